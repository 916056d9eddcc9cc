//! Branchings: one orientation sign per region with the per-edge 2-1 rule.
//!
//! A branching orients every region (sign `+1` keeps the canonical orbit
//! direction, `-1` reverses it). Along each edge the three passages acquire
//! directions; the branching condition demands they are never all equal.
//!
//! Derived structure: orienting a region also directs, at every vertex it
//! passes, the complementary slot pair of the wing it occupies (`{c,d}` is
//! directed `c -> d` iff the arrangement `[in, out, c, d]` is even — a rule
//! that commutes with parity-admissible gluings). The 2-1 condition is
//! equivalent to these directions forming an acyclic tournament on the four
//! slots of every vertex, which yields a rank (a total order of slots) per
//! vertex. Ranks drive the boundary-pattern assembly.

use crate::perm::arrangement_is_even;
use crate::region::{trace_regions, Region, WingState};
use crate::spine::{Spine, SpineError};
use thiserror::Error;

/// One sign per region; `region_orientations[r]` flips region `r`'s
/// canonical boundary direction when negative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Branching {
    pub region_orientations: Vec<i8>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BranchingError {
    #[error("branching has {0} signs but the spine has {1} regions")]
    WrongLength(usize, usize),
    #[error("edge {0} is induced the same orientation three times")]
    EdgeCondition(usize),
    #[error("spine is not valid: {0:?}")]
    InvalidSpine(Vec<String>),
    #[error(transparent)]
    Spine(#[from] SpineError),
}

/// A valid spine together with a valid branching. Regions are cached so that
/// ids stay consistent across all derived computations.
#[derive(Clone, Debug)]
pub struct BranchedSpine {
    pub spine: Spine,
    pub regions: Vec<Region>,
    pub branching: Branching,
}

impl PartialEq for BranchedSpine {
    fn eq(&self, other: &Self) -> bool {
        self.spine == other.spine && self.branching == other.branching
    }
}
impl Eq for BranchedSpine {}

/// For each edge, the three passages as (region id, index into the region's
/// boundary word). Every edge of a valid spine is passed exactly three times.
pub fn passages_by_edge(spine: &Spine, regions: &[Region]) -> Vec<Vec<(usize, usize)>> {
    let mut by_edge: Vec<Vec<(usize, usize)>> = vec![Vec::new(); spine.edges.len()];
    for r in regions {
        for (k, p) in r.boundary_word.iter().enumerate() {
            by_edge[p.edge].push((r.id, k));
        }
    }
    by_edge
}

/// Check the per-edge 2-1 condition for a sign vector.
pub fn branching_is_valid(spine: &Spine, regions: &[Region], signs: &[i8]) -> bool {
    if signs.len() != regions.len() || signs.iter().any(|&s| s != 1 && s != -1) {
        return false;
    }
    let by_edge = passages_by_edge(spine, regions);
    by_edge.iter().all(|passes| {
        debug_assert_eq!(passes.len(), 3);
        let dirs: Vec<i8> = passes
            .iter()
            .map(|&(rid, k)| regions[rid].boundary_word[k].dir * signs[rid])
            .collect();
        !(dirs.iter().all(|&d| d == 1) || dirs.iter().all(|&d| d == -1))
    })
}

/// Enumerate all branchings of a valid spine by backtracking over regions
/// with per-edge constraint propagation. Deterministic order: lexicographic
/// in the sign vectors with `+1` before `-1`.
pub fn enumerate_branchings(spine: &Spine) -> Result<Vec<Branching>, BranchingError> {
    let diag = spine.validate();
    if !diag.is_valid() {
        return Err(BranchingError::InvalidSpine(diag.failures));
    }
    let regions = trace_regions(spine)?;
    let by_edge = passages_by_edge(spine, &regions);
    // For early pruning: once all three regions through an edge are signed,
    // the edge condition is decidable.
    let edge_max_region: Vec<usize> = by_edge
        .iter()
        .map(|ps| ps.iter().map(|&(rid, _)| rid).max().unwrap())
        .collect();
    let mut out = Vec::new();
    let mut signs: Vec<i8> = Vec::with_capacity(regions.len());
    backtrack(
        &regions,
        &by_edge,
        &edge_max_region,
        &mut signs,
        &mut out,
    );
    Ok(out)
}

fn backtrack(
    regions: &[Region],
    by_edge: &[Vec<(usize, usize)>],
    edge_max_region: &[usize],
    signs: &mut Vec<i8>,
    out: &mut Vec<Branching>,
) {
    if signs.len() == regions.len() {
        out.push(Branching {
            region_orientations: signs.clone(),
        });
        return;
    }
    let next = signs.len();
    'candidate: for s in [1i8, -1i8] {
        signs.push(s);
        for (e, passes) in by_edge.iter().enumerate() {
            if edge_max_region[e] != next {
                continue;
            }
            let dirs: Vec<i8> = passes
                .iter()
                .map(|&(rid, k)| regions[rid].boundary_word[k].dir * signs[rid])
                .collect();
            if dirs.iter().all(|&d| d == 1) || dirs.iter().all(|&d| d == -1) {
                signs.pop();
                continue 'candidate;
            }
        }
        backtrack(regions, by_edge, edge_max_region, signs, out);
        signs.pop();
    }
}

impl BranchedSpine {
    pub fn new(spine: Spine, branching: Branching) -> Result<BranchedSpine, BranchingError> {
        let diag = spine.validate();
        if !diag.is_valid() {
            return Err(BranchingError::InvalidSpine(diag.failures));
        }
        let regions = trace_regions(&spine)?;
        if branching.region_orientations.len() != regions.len() {
            return Err(BranchingError::WrongLength(
                branching.region_orientations.len(),
                regions.len(),
            ));
        }
        if !branching_is_valid(&spine, &regions, &branching.region_orientations) {
            let by_edge = passages_by_edge(&spine, &regions);
            for (e, passes) in by_edge.iter().enumerate() {
                let dirs: Vec<i8> = passes
                    .iter()
                    .map(|&(rid, k)| {
                        regions[rid].boundary_word[k].dir
                            * branching.region_orientations[rid]
                    })
                    .collect();
                if dirs.iter().all(|&d| d == 1) || dirs.iter().all(|&d| d == -1) {
                    return Err(BranchingError::EdgeCondition(e));
                }
            }
            return Err(BranchingError::WrongLength(
                branching.region_orientations.len(),
                regions.len(),
            ));
        }
        Ok(BranchedSpine {
            spine,
            regions,
            branching,
        })
    }

    /// The region orbit in the direction selected by the branching.
    pub fn oriented_orbit(&self, rid: usize) -> Vec<WingState> {
        let r = &self.regions[rid];
        if self.branching.region_orientations[rid] == 1 {
            r.orbit.clone()
        } else {
            r.orbit.iter().rev().map(|s| s.reversed()).collect()
        }
    }

    /// Slot ranks per vertex: `ranks[v][slot]` is the height of `slot` in the
    /// acyclic tournament induced by the branching (0 = lowest).
    ///
    /// The 2-1 edge condition guarantees acyclicity; this panics only on
    /// data that violates the `BranchedSpine` invariants.
    pub fn vertex_ranks(&self) -> Vec<[u8; 4]> {
        let n = self.spine.vertex_count;
        debug_assert!(self.spine.vertex_orientations.iter().all(|&s| s == 1));
        // in-degree of each slot in the "lower -> higher" tournament
        let mut indeg = vec![[0u8; 4]; n];
        for rid in 0..self.regions.len() {
            for st in self.oriented_orbit(rid) {
                let (a, b) = (st.in_slot, st.out_slot);
                let mut rest = [0u8; 2];
                let mut k = 0;
                for x in 0..4u8 {
                    if x != a && x != b {
                        rest[k] = x;
                        k += 1;
                    }
                }
                let (c, d) = (rest[0], rest[1]);
                // wing {a,b} directs the complementary pair: c -> d iff
                // [a, b, c, d] is an even arrangement
                let (lo, hi) = if arrangement_is_even(a, b, c, d) {
                    (c, d)
                } else {
                    (d, c)
                };
                let _ = lo;
                indeg[st.vertex][hi as usize] += 1;
            }
        }
        let mut ranks = vec![[0u8; 4]; n];
        for v in 0..n {
            let mut order: Vec<u8> = (0..4u8).collect();
            order.sort_by_key(|&s| indeg[v][s as usize]);
            // acyclic tournament on 4 nodes has in-degrees 0,1,2,3
            for (rank, &slot) in order.iter().enumerate() {
                assert_eq!(
                    indeg[v][slot as usize] as usize, rank,
                    "branching does not induce a total slot order at vertex {v}"
                );
                ranks[v][slot as usize] = rank as u8;
            }
        }
        ranks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_spines;

    #[test]
    fn global_flip_preserves_validity() {
        for spine in enumerate_spines(1) {
            let regions = trace_regions(&spine).unwrap();
            for b in enumerate_branchings(&spine).unwrap() {
                let flipped: Vec<i8> =
                    b.region_orientations.iter().map(|&s| -s).collect();
                assert!(branching_is_valid(&spine, &regions, &flipped));
            }
        }
    }

    #[test]
    fn enumeration_matches_filtering_all_sign_vectors() {
        for spine in enumerate_spines(1) {
            let regions = trace_regions(&spine).unwrap();
            let listed = enumerate_branchings(&spine).unwrap();
            let mut brute = Vec::new();
            let r = regions.len();
            for mask in 0..(1u32 << r) {
                let signs: Vec<i8> = (0..r)
                    .map(|i| if mask & (1 << i) == 0 { 1 } else { -1 })
                    .collect();
                if branching_is_valid(&spine, &regions, &signs) {
                    brute.push(signs);
                }
            }
            let listed_signs: Vec<Vec<i8>> =
                listed.into_iter().map(|b| b.region_orientations).collect();
            let mut brute_sorted = brute.clone();
            brute_sorted.sort();
            let mut listed_sorted = listed_signs.clone();
            listed_sorted.sort();
            assert_eq!(brute_sorted, listed_sorted);
        }
    }

    #[test]
    fn ranks_exist_for_every_branching() {
        for spine in enumerate_spines(1) {
            for b in enumerate_branchings(&spine).unwrap() {
                let bs = BranchedSpine::new(spine.clone(), b).unwrap();
                let ranks = bs.vertex_ranks();
                for v in 0..bs.spine.vertex_count {
                    let mut sorted = ranks[v];
                    sorted.sort_unstable();
                    assert_eq!(sorted, [0, 1, 2, 3]);
                }
            }
        }
    }
}
