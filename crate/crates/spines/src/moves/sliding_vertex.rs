//! The sliding-vertex move: a sliding rewrite anchored at a single vertex.
//!
//! Dually it is the pillow insertion over a single wedge of the anchor
//! vertex: the wing whose two slots have branching ranks {0, 2} (variant 0)
//! or {1, 3} (variant 1). Both variants exist at every vertex, admit exactly
//! one orientation of the fresh region, and always preserve the boundary
//! pattern, so the move is total. It is related to the snake move along any
//! edge incident to the anchor vertex by one positive and one negative MP
//! move.

use crate::branching::BranchedSpine;
use crate::region::WingState;
use crate::spine::VertexId;

use super::pillow::pillow_insert;
use super::MoveError;

/// Apply the sliding-vertex move at `vertex` (variant 0).
pub fn apply_sliding_vertex(
    bs: &BranchedSpine,
    vertex: VertexId,
) -> Result<BranchedSpine, MoveError> {
    apply_sliding_vertex_variant(bs, vertex, 0)
}

/// Apply the chosen variant of the sliding-vertex move at `vertex`:
/// variant 0 slides over the rank-{0, 2} wing, variant 1 over rank-{1, 3}.
pub fn apply_sliding_vertex_variant(
    bs: &BranchedSpine,
    vertex: VertexId,
    variant: usize,
) -> Result<BranchedSpine, MoveError> {
    if vertex >= bs.spine.vertex_count {
        return Err(MoveError::InvalidSite(format!("no vertex {vertex}")));
    }
    if variant > 1 {
        return Err(MoveError::InvalidSite(format!(
            "sliding-vertex variant {variant} out of range"
        )));
    }
    let ranks = bs.vertex_ranks();
    let slot_of = |r: u8| {
        (0..4u8)
            .find(|&s| ranks[vertex][s as usize] == r)
            .expect("ranks are a permutation of 0..4")
    };
    let (r1, r2) = if variant == 0 { (0, 2) } else { (1, 3) };
    let start = WingState {
        vertex,
        in_slot: slot_of(r1),
        out_slot: slot_of(r2),
    };
    let results = pillow_insert(bs, start, 1)?;
    let mut sliding: Vec<BranchedSpine> = results
        .into_iter()
        .filter(|(_, s)| *s)
        .map(|(b, _)| b)
        .collect();
    if sliding.len() != 1 {
        return Err(MoveError::BranchingObstruction(format!(
            "expected one sliding orientation, found {}",
            sliding.len()
        )));
    }
    Ok(sliding.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{boundary_pattern, pattern_signature};
    use crate::branching::enumerate_branchings;
    use crate::canon::canonical_form;
    use crate::enumerate::enumerate_spines;
    use crate::homology::homology_h1;
    use crate::moves::{apply_mp_negative, apply_mp_positive, find_sites, SpineMoveKind};
    use std::collections::BTreeSet;

    fn sample_branched(n: usize, take: usize) -> Vec<BranchedSpine> {
        let mut out = Vec::new();
        for s in enumerate_spines(n) {
            for b in enumerate_branchings(&s).unwrap() {
                out.push(BranchedSpine::new(s.clone(), b).unwrap());
                if out.len() >= take {
                    return out;
                }
            }
        }
        out
    }

    #[test]
    fn sliding_vertex_is_total_with_expected_deltas() {
        let mut samples = sample_branched(1, 16);
        samples.extend(sample_branched(2, 8));
        for bs in &samples {
            let sig = pattern_signature(&boundary_pattern(bs));
            let h1 = homology_h1(&bs.spine).unwrap();
            for v in 0..bs.spine.vertex_count {
                for variant in 0..2 {
                    let res = apply_sliding_vertex_variant(bs, v, variant).unwrap();
                    assert!(res.spine.validate().is_valid());
                    assert_eq!(res.spine.vertex_count, bs.spine.vertex_count + 2);
                    assert_eq!(res.spine.edges.len(), bs.spine.edges.len() + 4);
                    assert_eq!(res.regions.len(), bs.regions.len() + 2);
                    assert_eq!(pattern_signature(&boundary_pattern(&res)), sig);
                    assert_eq!(homology_h1(&res.spine).unwrap(), h1);
                }
            }
        }
    }

    #[test]
    fn sliding_vertex_and_incident_snake_differ_by_two_mp_moves() {
        use crate::moves::snake::{apply_snake, SnakeMirror};
        let samples = sample_branched(2, 6);
        let mut checked = 0usize;
        for bs in &samples {
            for (ei, e) in bs.spine.edges.iter().enumerate() {
                let v = e.a.vertex;
                let Ok(pe) = apply_snake(bs, ei, true, SnakeMirror::Left) else {
                    continue;
                };
                let pv = apply_sliding_vertex(bs, v).unwrap();
                let target = canonical_form(&pv).unwrap();
                let mut reached: BTreeSet<Vec<u8>> = BTreeSet::new();
                for pos in find_sites(&pe, SpineMoveKind::MpPos) {
                    let Ok(mids) = apply_mp_positive(&pe, pos.anchor) else {
                        continue;
                    };
                    for (mid, _) in mids {
                        for neg in find_sites(&mid, SpineMoveKind::MpNeg) {
                            if let Ok(end) = apply_mp_negative(&mid, neg.anchor) {
                                reached.insert(canonical_form(&end).unwrap());
                            }
                        }
                    }
                }
                assert!(
                    reached.contains(&target),
                    "vertex and edge insertions not related by two MP moves"
                );
                checked += 1;
                if checked >= 6 {
                    return;
                }
            }
        }
        assert!(checked > 0, "no applicable snake site found");
    }
}
