//! Rigidity (no positive sliding-MP site) and the generators for the small
//! rigid families: the four one-vertex branched spines and the chained
//! two-per-link rigid family.

use crate::branching::{enumerate_branchings, BranchedSpine};
use crate::canon::{canonical_pair, DEFAULT_CANON_CAP};
use crate::enumerate::enumerate_spines;
use crate::moves::mp::apply_mp_positive;
use crate::moves::{find_sites, SpineMoveKind};

/// True iff no positive sliding MP move applies: every positive MP result
/// changes the boundary pattern (or no positive MP site exists at all).
pub fn is_rigid(bs: &BranchedSpine) -> bool {
    for site in find_sites(bs, SpineMoveKind::MpPos) {
        if let Ok(results) = apply_mp_positive(bs, site.anchor) {
            if results.iter().any(|(_, sliding)| *sliding) {
                return false;
            }
        }
    }
    true
}

/// The four branched spines with one vertex, as canonical representatives in
/// certificate order.
pub fn one_vertex_branched_spines() -> Vec<BranchedSpine> {
    let mut reps: std::collections::BTreeMap<Vec<u8>, BranchedSpine> =
        std::collections::BTreeMap::new();
    for spine in enumerate_spines(1) {
        for b in enumerate_branchings(&spine).expect("enumerated spines are valid") {
            let bs = BranchedSpine::new(spine.clone(), b).expect("filtered branchings are valid");
            let (cert, rep) = canonical_pair(&bs, DEFAULT_CANON_CAP).expect("size within cap");
            reps.entry(cert).or_insert(rep);
        }
    }
    reps.into_values().collect()
}

/// The `k`-th member of the chained rigid family (2k vertices).
pub fn make_rigid_spine(k: usize) -> BranchedSpine {
    assert!(k >= 1, "the rigid family starts at k = 1");
    super::rigid_family::build(k)
}
