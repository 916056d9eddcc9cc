//! The per-edge sheet analysis and the legal crossing types.
//!
//! Along every spine edge three region sheets meet; the branching gives each
//! the direction it induces on the edge, and the 2-1 condition singles out
//! one tangential sheet against two smoothly continuing ones. A strand may
//! cross the edge between the two smooth sheets (`Transverse`), or pass from
//! the tangential sheet onto either smooth sheet (`TangentialL`/`TangentialR`
//! by ascending side index of the smooth partner). Every unordered sheet
//! pair is legal with exactly one type; declaring any other type for a pair
//! is a legality failure.

use crate::branching::{passages_by_edge, BranchedSpine};

/// Crossing type of a matched leg pair at an edge.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PairKind {
    Transverse,
    TangentialL,
    TangentialR,
}

impl std::fmt::Display for PairKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairKind::Transverse => "TRANSVERSE",
            PairKind::TangentialL => "TANGENTIAL_L",
            PairKind::TangentialR => "TANGENTIAL_R",
        })
    }
}

/// The three sheets of one edge with their branching data.
#[derive(Clone, Copy, Debug)]
pub struct EdgeSheets {
    /// For side index 0..3: (region id, index into the region's
    /// boundary word, induced direction along the edge).
    pub sides: [(usize, usize, i8); 3],
    /// The two smoothly continuing side indices, ascending.
    pub smooth: [u8; 2],
    /// The tangential side index.
    pub lone: u8,
}

impl EdgeSheets {
    /// Region owning a given side.
    pub fn region(&self, side: u8) -> usize {
        self.sides[side as usize].0
    }
}

/// Sheet analysis for every edge of a branched spine.
pub fn edge_sheets(bs: &BranchedSpine) -> Vec<EdgeSheets> {
    let by_edge = passages_by_edge(&bs.spine, &bs.regions);
    by_edge
        .iter()
        .map(|passes| {
            let mut sides = [(0usize, 0usize, 0i8); 3];
            for &(rid, k) in passes {
                let p = bs.regions[rid].boundary_word[k];
                let induced = p.dir * bs.branching.region_orientations[rid];
                sides[p.side as usize] = (rid, k, induced);
            }
            let total: i8 = sides.iter().map(|&(_, _, d)| d).sum();
            // 2-1 split: the majority direction is the sign of the total
            let majority = if total > 0 { 1 } else { -1 };
            let mut smooth = Vec::with_capacity(2);
            let mut lone = 0u8;
            for (s, &(_, _, d)) in sides.iter().enumerate() {
                if d == majority {
                    smooth.push(s as u8);
                } else {
                    lone = s as u8;
                }
            }
            EdgeSheets {
                sides,
                smooth: [smooth[0], smooth[1]],
                lone,
            }
        })
        .collect()
}

/// The unique legal crossing type for an unordered pair of sides at an edge,
/// or `None` when the sides coincide.
pub fn legal_kind(sheets: &EdgeSheets, s1: u8, s2: u8) -> Option<PairKind> {
    if s1 == s2 || s1 > 2 || s2 > 2 {
        return None;
    }
    let (lo, hi) = (s1.min(s2), s1.max(s2));
    if [lo, hi] == sheets.smooth {
        Some(PairKind::Transverse)
    } else if lo == sheets.lone || hi == sheets.lone {
        let partner = if lo == sheets.lone { hi } else { lo };
        if partner == sheets.smooth[0] {
            Some(PairKind::TangentialL)
        } else {
            Some(PairKind::TangentialR)
        }
    } else {
        None
    }
}

/// The two side indices a crossing type connects at this edge.
pub fn kind_sides(sheets: &EdgeSheets, kind: PairKind) -> (u8, u8) {
    let (a, b) = match kind {
        PairKind::Transverse => (sheets.smooth[0], sheets.smooth[1]),
        PairKind::TangentialL => (sheets.lone, sheets.smooth[0]),
        PairKind::TangentialR => (sheets.lone, sheets.smooth[1]),
    };
    (a.min(b), a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::one_vertex_branched_spines;

    #[test]
    fn every_edge_has_a_two_one_sheet_split() {
        for bs in one_vertex_branched_spines() {
            for sh in edge_sheets(&bs) {
                let dirs: Vec<i8> = sh.sides.iter().map(|&(_, _, d)| d).collect();
                assert!(dirs.iter().all(|&d| d == 1 || d == -1));
                assert_ne!(dirs[0] + dirs[1] + dirs[2], 3);
                assert_ne!(dirs[0] + dirs[1] + dirs[2], -3);
                // smooth sides share the majority direction, the lone one opposes
                let maj = sh.sides[sh.smooth[0] as usize].2;
                assert_eq!(sh.sides[sh.smooth[1] as usize].2, maj);
                assert_eq!(sh.sides[sh.lone as usize].2, -maj);
            }
        }
    }

    #[test]
    fn each_side_pair_has_exactly_one_legal_kind() {
        for bs in one_vertex_branched_spines() {
            for sh in edge_sheets(&bs) {
                let mut kinds = Vec::new();
                for s1 in 0..3u8 {
                    for s2 in (s1 + 1)..3u8 {
                        let k = legal_kind(&sh, s1, s2).expect("distinct sides are legal");
                        assert_eq!(kind_sides(&sh, k), (s1, s2));
                        kinds.push(k);
                    }
                }
                kinds.sort_by_key(|k| format!("{k}"));
                kinds.dedup();
                assert_eq!(kinds.len(), 3, "all three kinds occur at every edge");
            }
        }
    }
}
