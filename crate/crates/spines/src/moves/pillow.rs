//! Shared pillow insertion: the generic sliding rewrite that cuts the
//! manifold along a bent disk and inserts two vertex gadgets glued to each
//! other along two slots.
//!
//! The cut disk is a pair of gluings flanking a chain of wedges along one
//! region: chains of length one slide the disk over a single wedge (the
//! sliding-vertex move), chains of length two slide it over the gluing in
//! the middle (the snake move). The insertion splits the region carrying the
//! chain in two, creates one two-passage region between the fresh gadgets,
//! and never touches the old vertices, so counts change by (+2, +4, +2).

use crate::branching::{branching_is_valid, BranchedSpine, Branching};
use crate::boundary::{boundary_pattern, pattern_signature};
use crate::perm::Perm4;
use crate::region::{trace_regions, WingState};
use crate::spine::{EdgeId, EdgeRec, Germ};
use crate::transform::normalize_signs;
use std::collections::{HashMap, HashSet};

use super::surgery::{corner_dir_index, directed_corners, rewrite_spine, Xlat};
use super::MoveError;

/// Insert a pillow along the wedge chain of length `dist` that starts at
/// wing state `start` (the first flank is the gluing at the state's in-slot;
/// the chain advances through its out-slot). Returns one branched result per
/// valid orientation of the fresh two-passage region, each with its sliding
/// flag (boundary pattern preserved).
pub(crate) fn pillow_insert(
    bs: &BranchedSpine,
    start: WingState,
    dist: usize,
) -> Result<Vec<(BranchedSpine, bool)>, MoveError> {
    assert!(dist >= 1);
    let bs = normalize_signs(bs);
    let n = bs.spine.vertex_count;
    let map = bs.spine.germ_map().expect("valid spine");

    // Walk the chain, carrying the two shared corners of the disk diagonal.
    let (va, fa_in, fa_out) = (start.vertex, start.in_slot, start.out_slot);
    let shared: Vec<u8> = (0..4u8).filter(|&c| c != fa_in && c != fa_out).collect();
    let (mut s, mut u, mut v) = (start, shared[0], shared[1]);
    let mut crossed: Vec<EdgeId> = Vec::new();
    for _ in 0..dist - 1 {
        let g = Germ::new(s.vertex, s.out_slot);
        let (ei, rec) = bs.spine.gluing_at(&map, g);
        let q = rec.perm_from(g);
        let far = rec.other_end(g);
        crossed.push(ei);
        s = WingState {
            vertex: far.vertex,
            in_slot: q.apply(s.out_slot),
            out_slot: q.apply(s.in_slot),
        };
        u = q.apply(u);
        v = q.apply(v);
    }

    let gf = Germ::new(va, fa_in);
    let gg = Germ::new(s.vertex, s.out_slot);
    let (fid, frec) = bs.spine.gluing_at(&map, gf);
    let (gid, grec) = bs.spine.gluing_at(&map, gg);
    if crossed.contains(&fid) || crossed.contains(&gid) {
        return Err(MoveError::InvalidSite(
            "cut disk flank crosses its own chain".into(),
        ));
    }
    let p = frec.perm_from(gf);
    let q = grec.perm_from(gg);
    let gb = frec.other_end(gf);
    let gc = grec.other_end(gg);

    // New gadgets carry the corners of the cut disk: slot 0 is the free
    // corner of the first flank, slot 1 the free corner of the second, and
    // slots 2 and 3 the shared corners of the disk's diagonal.
    let (t1, t2) = (n, n + 1);
    let ta = Perm4([fa_out, fa_in, shared[0], shared[1]]).inverse();
    let tz = Perm4([s.out_slot, s.in_slot, u, v]).inverse();
    let tb = Perm4([p.apply(fa_out), gb.slot, p.apply(shared[0]), p.apply(shared[1])]).inverse();
    let tc = Perm4([gc.slot, q.apply(s.in_slot), q.apply(u), q.apply(v)]).inverse();
    let extra = if gf == gg {
        // Fully degenerate flanks: the disk passes twice through the same
        // side of one gluing, so the cut splits that gluing's neighborhood
        // into three slabs; the middle slab joins the two gadgets directly.
        let rho = p;
        vec![
            EdgeRec::new(gf, Germ::new(t1, 1), ta),
            EdgeRec::new(
                Germ::new(t2, 1),
                Germ::new(t1, 0),
                tz.compose(&rho.inverse()).compose(&tb.inverse()),
            ),
            EdgeRec::new(gc, Germ::new(t2, 0), tc),
            EdgeRec::new(Germ::new(t1, 2), Germ::new(t2, 2), Perm4::IDENTITY),
            EdgeRec::new(Germ::new(t1, 3), Germ::new(t2, 3), Perm4::IDENTITY),
        ]
    } else if fid == gid {
        // Degenerate flanks: the two disk faces are the two sides of one
        // gluing (so its far ends are the near ends swapped). The outer
        // faces of the second gadget then glue to each other through the
        // old record.
        vec![
            EdgeRec::new(gf, Germ::new(t1, 1), ta),
            EdgeRec::new(gg, Germ::new(t1, 0), tz),
            EdgeRec::new(
                Germ::new(t2, 1),
                Germ::new(t2, 0),
                tc.compose(&q).compose(&tb.inverse()),
            ),
            EdgeRec::new(Germ::new(t1, 2), Germ::new(t2, 2), Perm4::IDENTITY),
            EdgeRec::new(Germ::new(t1, 3), Germ::new(t2, 3), Perm4::IDENTITY),
        ]
    } else {
        vec![
            EdgeRec::new(gf, Germ::new(t1, 1), ta),
            EdgeRec::new(gg, Germ::new(t1, 0), tz),
            EdgeRec::new(gb, Germ::new(t2, 1), tb),
            EdgeRec::new(gc, Germ::new(t2, 0), tc),
            EdgeRec::new(Germ::new(t1, 2), Germ::new(t2, 2), Perm4::IDENTITY),
            EdgeRec::new(Germ::new(t1, 3), Germ::new(t2, 3), Perm4::IDENTITY),
        ]
    };

    let xlat = Xlat {
        new_vertex_count: n + 2,
        germ: HashMap::new(),
        vmap: (0..n).map(|w| (w, w)).collect(),
        affected: HashSet::new(),
    };
    let deleted: HashSet<EdgeId> = [fid, gid].into_iter().collect();
    // Every old vertex is untouched, so anchoring any one of them pins the
    // orientations of the two new gadgets through the parity relations.
    let new_spine = rewrite_spine(&bs.spine, &deleted, &xlat, extra, (va, 1))?;
    let diag = new_spine.validate();
    if !diag.is_valid() {
        return Err(MoveError::InvalidSite(format!(
            "insertion is not a valid spine: {:?}",
            diag.failures
        )));
    }
    let new_regions =
        trace_regions(&new_spine).map_err(|e| MoveError::InvalidSite(e.to_string()))?;
    if new_regions.len() != bs.regions.len() + 2 {
        return Err(MoveError::InvalidSite(
            "insertion did not create exactly two regions".into(),
        ));
    }

    // Every old region survives with its surface intact except the one
    // carrying the chain, which is cut in two pieces that both keep its
    // orientation; transferring through every passage covers both pieces,
    // leaving only the two-passage pillow region fresh.
    let idx = corner_dir_index(&new_spine, &new_regions);
    let mut transferred: Vec<Option<i8>> = vec![None; new_regions.len()];
    for r in &bs.regions {
        for st in &r.orbit {
            let (t, h) = directed_corners(bs.spine.vertex_orientations[st.vertex], *st);
            let &(nid, dir) = idx.get(&(st.vertex, t, h)).ok_or_else(|| {
                MoveError::InvalidSite("passage has no region in the rewrite".into())
            })?;
            let new_sign = bs.branching.region_orientations[r.id] * dir;
            if let Some(prev) = transferred[nid] {
                if prev != new_sign {
                    return Err(MoveError::InvalidSite(
                        "surviving region received conflicting orientations".into(),
                    ));
                }
            }
            transferred[nid] = Some(new_sign);
        }
    }
    let fresh: Vec<usize> = transferred
        .iter()
        .enumerate()
        .filter(|(_, sg)| sg.is_none())
        .map(|(i, _)| i)
        .collect();
    if fresh.len() != 1 {
        return Err(MoveError::InvalidSite(format!(
            "expected one fresh region, found {}",
            fresh.len()
        )));
    }
    let fresh = fresh[0];

    let old_sig = pattern_signature(&boundary_pattern(&bs));
    let mut out = Vec::new();
    for s0 in [1i8, -1i8] {
        let signs: Vec<i8> = transferred
            .iter()
            .enumerate()
            .map(|(i, sg)| if i == fresh { s0 } else { sg.unwrap() })
            .collect();
        if branching_is_valid(&new_spine, &new_regions, &signs) {
            let branched = BranchedSpine::new(
                new_spine.clone(),
                Branching {
                    region_orientations: signs,
                },
            )
            .map_err(|e| MoveError::InvalidSite(e.to_string()))?;
            let branched = normalize_signs(&branched);
            let sliding = pattern_signature(&boundary_pattern(&branched)) == old_sig;
            out.push((branched, sliding));
        }
    }
    if out.is_empty() {
        return Err(MoveError::BranchingObstruction(
            "no orientation of the fresh region satisfies the branching condition".into(),
        ));
    }
    Ok(out)
}

