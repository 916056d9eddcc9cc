//! Relabelings of spines: vertex bijections plus per-vertex slot
//! permutations, with the orientation bookkeeping that keeps validity.
//!
//! Applying a slot permutation of odd parity at a vertex reverses the local
//! orientation of its gadget, so the vertex sign is multiplied by the
//! permutation's parity. Any spine is therefore isomorphic to one with all
//! signs positive, which is the normal form used by the text format and the
//! canonical form.

use crate::branching::{BranchedSpine, Branching};
use crate::perm::Perm4;
use crate::region::{trace_regions, WingState};
use crate::spine::{EdgeRec, Germ, Spine};

/// A relabeling: `vertex_map[v]` is the new label of old vertex `v`, and
/// `slot_perms[v]` relabels the slots at old vertex `v`.
#[derive(Clone, Debug)]
pub struct Relabeling {
    pub vertex_map: Vec<usize>,
    pub slot_perms: Vec<Perm4>,
}

impl Relabeling {
    pub fn identity(n: usize) -> Relabeling {
        Relabeling {
            vertex_map: (0..n).collect(),
            slot_perms: vec![Perm4::IDENTITY; n],
        }
    }

    pub fn apply_state(&self, s: WingState) -> WingState {
        let p = &self.slot_perms[s.vertex];
        WingState {
            vertex: self.vertex_map[s.vertex],
            in_slot: p.apply(s.in_slot),
            out_slot: p.apply(s.out_slot),
        }
    }
}

/// Orient an edge record so its first germ is the lexicographically smaller
/// one, then records can be sorted into a deterministic order.
pub fn normalize_edge(e: &EdgeRec) -> EdgeRec {
    if e.b < e.a {
        EdgeRec {
            a: e.b,
            b: e.a,
            perm: e.perm.inverse(),
        }
    } else {
        *e
    }
}

/// Apply a relabeling to a spine. Vertex signs are multiplied by the parity
/// of the slot permutation applied at that vertex, keeping validity.
pub fn relabel_spine(spine: &Spine, r: &Relabeling) -> Spine {
    let n = spine.vertex_count;
    let mut edges: Vec<EdgeRec> = spine
        .edges
        .iter()
        .map(|e| {
            let pa = &r.slot_perms[e.a.vertex];
            let pb = &r.slot_perms[e.b.vertex];
            normalize_edge(&EdgeRec {
                a: Germ::new(r.vertex_map[e.a.vertex], pa.apply(e.a.slot)),
                b: Germ::new(r.vertex_map[e.b.vertex], pb.apply(e.b.slot)),
                perm: pb.compose(&e.perm).compose(&pa.inverse()),
            })
        })
        .collect();
    edges.sort_by_key(|e| (e.a, e.b, e.perm.0));
    let mut signs = vec![1i8; n];
    for v in 0..n {
        let parity = if r.slot_perms[v].is_odd() { -1 } else { 1 };
        signs[r.vertex_map[v]] = spine.vertex_orientations[v] * parity;
    }
    Spine {
        vertex_count: n,
        edges,
        vertex_orientations: signs,
    }
}

/// Apply a relabeling to a branched spine, re-expressing region signs with
/// respect to the relabeled regions' canonical directions.
pub fn relabel_branched(bs: &BranchedSpine, r: &Relabeling) -> BranchedSpine {
    let new_spine = relabel_spine(&bs.spine, r);
    let new_regions = trace_regions(&new_spine).expect("relabeled spine is well-formed");
    // Map: new directed state -> (new region id, direction vs canonical)
    let mut state_dir = std::collections::HashMap::new();
    for nr in &new_regions {
        for st in &nr.orbit {
            state_dir.insert(*st, (nr.id, 1i8));
            state_dir.insert(st.reversed(), (nr.id, -1i8));
        }
    }
    let mut new_signs = vec![0i8; new_regions.len()];
    for old in &bs.regions {
        let old_sign = bs.branching.region_orientations[old.id];
        let image = r.apply_state(old.orbit[0]);
        let (nid, dir) = state_dir[&image];
        new_signs[nid] = old_sign * dir;
    }
    debug_assert!(new_signs.iter().all(|&s| s != 0));
    BranchedSpine {
        spine: new_spine,
        regions: new_regions,
        branching: Branching {
            region_orientations: new_signs,
        },
    }
}

/// Normalize vertex signs to all `+1` by applying an odd slot permutation at
/// every negative vertex.
pub fn normalize_signs(bs: &BranchedSpine) -> BranchedSpine {
    let n = bs.spine.vertex_count;
    let tau = Perm4([1, 0, 2, 3]);
    let mut r = Relabeling::identity(n);
    let mut any = false;
    for v in 0..n {
        if bs.spine.vertex_orientations[v] < 0 {
            r.slot_perms[v] = tau;
            any = true;
        }
    }
    if !any {
        return bs.clone();
    }
    relabel_branched(bs, &r)
}

/// The mirror spine: globally reversed screw-orientation. Realized by
/// flipping every vertex sign and then sign-normalizing.
pub fn mirror(bs: &BranchedSpine) -> BranchedSpine {
    let mut flipped = bs.clone();
    for s in flipped.spine.vertex_orientations.iter_mut() {
        *s = -*s;
    }
    normalize_signs(&flipped)
}
