//! Shared plumbing for local rewrites: germ translation tables, record
//! rewriting, orientation-sign propagation, and region-orientation transfer
//! from the old spine to the rewritten one.

use crate::branching::BranchedSpine;
use crate::perm::{arrangement_is_even, Perm4};
use crate::region::{Region, WingState};
use crate::spine::{EdgeId, EdgeRec, Germ, Spine};
use std::collections::{HashMap, HashSet};

use super::MoveError;

/// Translation of the germs on affected vertices into the rewritten spine.
/// Unaffected vertices translate by `vmap` with identity slot permutation.
pub(crate) struct Xlat {
    pub new_vertex_count: usize,
    /// old germ (on an affected vertex) -> (new germ, old-slot -> new-slot)
    pub germ: HashMap<Germ, (Germ, Perm4)>,
    /// old unaffected vertex -> new vertex id
    pub vmap: HashMap<usize, usize>,
    pub affected: HashSet<usize>,
}

impl Xlat {
    pub fn translate(&self, g: Germ) -> (Germ, Perm4) {
        if self.affected.contains(&g.vertex) {
            self.germ[&g]
        } else {
            (Germ::new(self.vmap[&g.vertex], g.slot), Perm4::IDENTITY)
        }
    }
}

/// Rewrite a spine: drop `deleted` records, translate the rest through
/// `xlat`, append `extra` records, and propagate vertex orientations from
/// the geometric `anchor` sign of one new gadget. Unaffected vertices must
/// come out with sign `+1` (they are untouched and the input is
/// sign-normalized); a violation means the anchor convention is wrong and is
/// reported as a hard error.
pub(crate) fn rewrite_spine(
    old: &Spine,
    deleted: &HashSet<EdgeId>,
    xlat: &Xlat,
    extra: Vec<EdgeRec>,
    anchor: (usize, i8),
) -> Result<Spine, MoveError> {
    let mut edges: Vec<EdgeRec> = Vec::with_capacity(old.edges.len() - deleted.len() + extra.len());
    for (ei, e) in old.edges.iter().enumerate() {
        if deleted.contains(&ei) {
            continue;
        }
        let (g1, t1) = xlat.translate(e.a);
        let (g2, t2) = xlat.translate(e.b);
        let perm = t2.compose(&e.perm).compose(&t1.inverse());
        edges.push(EdgeRec::new(g1, g2, perm));
    }
    edges.extend(extra);
    let mut spine = Spine::new(xlat.new_vertex_count, edges);
    propagate_signs(&mut spine, anchor)?;
    for &v in xlat.vmap.values() {
        if spine.vertex_orientations[v] != 1 {
            return Err(MoveError::InvalidSite(
                "orientation anchor convention violated at an untouched vertex".into(),
            ));
        }
    }
    Ok(spine)
}

/// Solve vertex orientations from the gluing parities (a record's extended
/// permutation is odd iff its endpoints carry equal signs), starting from
/// the given anchor. Fails if the parities are inconsistent (non-orientable
/// rewrite — a template bug, never expected on valid input).
pub(crate) fn propagate_signs(spine: &mut Spine, anchor: (usize, i8)) -> Result<(), MoveError> {
    let n = spine.vertex_count;
    let mut sign: Vec<i8> = vec![0; n];
    sign[anchor.0] = anchor.1;
    let mut changed = true;
    while changed {
        changed = false;
        for e in &spine.edges {
            let (va, vb) = (e.a.vertex, e.b.vertex);
            let rel: i8 = if e.perm.is_odd() { 1 } else { -1 };
            match (sign[va], sign[vb]) {
                (0, 0) => {}
                (sa, 0) => {
                    sign[vb] = sa * rel;
                    changed = true;
                }
                (0, sb) => {
                    sign[va] = sb * rel;
                    changed = true;
                }
                (sa, sb) => {
                    if sb != sa * rel {
                        return Err(MoveError::InvalidSite(
                            "rewrite produced inconsistent orientation parities".into(),
                        ));
                    }
                }
            }
        }
    }
    if sign.iter().any(|&s| s == 0) {
        return Err(MoveError::InvalidSite(
            "rewrite produced a disconnected spine".into(),
        ));
    }
    spine.vertex_orientations = sign;
    Ok(())
}

/// At a vertex with orientation `sign`, the directed wing state occupying
/// slots `(in, out)` directs the complementary corner pair `tail -> head`.
pub(crate) fn directed_corners(sign: i8, st: WingState) -> (u8, u8) {
    let mut rest = [0u8; 2];
    let mut k = 0;
    for x in 0..4u8 {
        if x != st.in_slot && x != st.out_slot {
            rest[k] = x;
            k += 1;
        }
    }
    let (c, d) = (rest[0], rest[1]);
    if arrangement_is_even(st.in_slot, st.out_slot, c, d) == (sign > 0) {
        (c, d)
    } else {
        (d, c)
    }
}

/// Index of a spine's regions by directed corner pair: `(v, tail, head)` ->
/// (region id, direction relative to the canonical orbit).
pub(crate) fn corner_dir_index(
    spine: &Spine,
    regions: &[Region],
) -> HashMap<(usize, u8, u8), (usize, i8)> {
    let mut idx = HashMap::new();
    for r in regions {
        for st in &r.orbit {
            let (t, h) = directed_corners(spine.vertex_orientations[st.vertex], *st);
            idx.insert((st.vertex, t, h), (r.id, 1));
            idx.insert((st.vertex, h, t), (r.id, -1));
        }
    }
    idx
}

/// Transfer old region orientations onto the rewritten spine.
///
/// `map_corner_pair` sends a directed old corner pair at an affected vertex
/// to a directed corner pair in the new spine (for unaffected vertices the
/// caller's closure should translate the vertex id and keep the corners).
/// `skip` lists old region ids that do not survive; new regions that receive
/// no sign are returned as `None` entries for the caller to decide.
pub(crate) fn transfer_region_signs(
    old: &BranchedSpine,
    skip: &HashSet<usize>,
    new_spine: &Spine,
    new_regions: &[Region],
    map_corner_pair: impl Fn(usize, u8, u8) -> (usize, u8, u8),
) -> Result<Vec<Option<i8>>, MoveError> {
    let idx = corner_dir_index(new_spine, new_regions);
    let mut signs: Vec<Option<i8>> = vec![None; new_regions.len()];
    for r in &old.regions {
        if skip.contains(&r.id) {
            continue;
        }
        let st = r.orbit[0];
        let (t, h) = directed_corners(old.spine.vertex_orientations[st.vertex], st);
        let (nv, nt, nh) = map_corner_pair(st.vertex, t, h);
        let &(nid, dir) = idx.get(&(nv, nt, nh)).ok_or_else(|| {
            MoveError::InvalidSite("transferred corner pair has no region in the rewrite".into())
        })?;
        let new_sign = old.branching.region_orientations[r.id] * dir;
        if signs[nid].is_some() {
            return Err(MoveError::InvalidSite(
                "two old regions transferred onto one new region".into(),
            ));
        }
        signs[nid] = Some(new_sign);
    }
    Ok(signs)
}
