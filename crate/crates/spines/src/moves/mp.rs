//! The branched MP move: positive (one vertex becomes two fused with a new
//! region between three vertices) and negative (the inverse collapse).
//!
//! Dually, the positive move replaces the two vertex gadgets glued by the
//! anchor edge with three gadgets arranged around one fresh region; the six
//! outer gluings are carried across by explicit slot translations. The fresh
//! region receives every orientation compatible with the branching condition
//! (one or two). The negative move collapses a three-passage region whose
//! three vertices are distinct, failing with `BranchingObstruction` when the
//! re-exposed configuration would violate the branching condition.

use crate::branching::{branching_is_valid, BranchedSpine, Branching};
use crate::boundary::{boundary_pattern, pattern_signature};
use crate::perm::{arrangement_is_even, Perm4};
use crate::region::trace_regions;
use crate::spine::{EdgeId, EdgeRec, Germ};
use crate::transform::normalize_signs;
use std::collections::{HashMap, HashSet};

use super::surgery::{directed_corners, rewrite_spine, transfer_region_signs, Xlat};
use super::MoveError;

/// Apply the positive branched MP move at edge `edge` (endpoints must be
/// distinct vertices). Returns one result per valid orientation of the new
/// region, each with its sliding flag (boundary pattern preserved).
pub fn apply_mp_positive(
    bs: &BranchedSpine,
    edge: EdgeId,
) -> Result<Vec<(BranchedSpine, bool)>, MoveError> {
    let bs = normalize_signs(bs);
    let n = bs.spine.vertex_count;
    let e = *bs
        .spine
        .edges
        .get(edge)
        .ok_or_else(|| MoveError::InvalidSite(format!("no edge {edge}")))?;
    let (va, vb) = (e.a.vertex, e.b.vertex);
    if va == vb {
        return Err(MoveError::InvalidSite(
            "anchor edge endpoints must be distinct vertices".into(),
        ));
    }
    let (fa, fb, p) = (e.a.slot, e.b.slot, e.perm);
    let xs: Vec<u8> = (0..4u8).filter(|&s| s != fa).collect();
    let cid = [va, vb, n];

    // lam[i]: slots of new gadget i -> slots of old gadget `va`
    // lamp[i]: slots of new gadget i -> slots of old gadget `vb`
    let mut lam = [Perm4::IDENTITY; 3];
    let mut lamp = [Perm4::IDENTITY; 3];
    for i in 0..3 {
        let others: Vec<u8> = (0..3).filter(|&j| j != i).map(|j| xs[j]).collect();
        lam[i] = Perm4([fa, xs[i], others[0], others[1]]);
        lamp[i] = Perm4([p.apply(xs[i]), fb, p.apply(others[0]), p.apply(others[1])]);
    }

    let mut germ = HashMap::new();
    for i in 0..3 {
        germ.insert(
            Germ::new(va, xs[i]),
            (Germ::new(cid[i], 1), lam[i].inverse()),
        );
        germ.insert(
            Germ::new(vb, p.apply(xs[i])),
            (Germ::new(cid[i], 0), lamp[i].inverse()),
        );
    }
    let xlat = Xlat {
        new_vertex_count: n + 1,
        germ,
        vmap: (0..n).filter(|v| *v != va && *v != vb).map(|v| (v, v)).collect(),
        affected: [va, vb].into_iter().collect(),
    };

    // internal gluings between the three new gadgets
    let mut extra = Vec::with_capacity(3);
    for i in 0..3 {
        for j in (i + 1)..3 {
            let k = 3 - i - j;
            let (li, lj) = (lam[i].inverse(), lam[j].inverse());
            let si = li.apply(xs[j]);
            let sj = lj.apply(xs[i]);
            let mut arr = [0u8; 4];
            arr[0] = 0;
            arr[1] = 1;
            arr[li.apply(xs[k]) as usize] = lj.apply(xs[k]);
            arr[si as usize] = sj;
            extra.push(EdgeRec::new(
                Germ::new(cid[i], si),
                Germ::new(cid[j], sj),
                Perm4::new(arr).expect("internal gluing is a bijection"),
            ));
        }
    }

    // Orientation anchor, derived in an explicit affine model of the two
    // glued gadgets: the first new gadget carries the parity sign of the
    // slot arrangement (fa, xs[0], xs[1], xs[2]).
    let sigma: i8 = if arrangement_is_even(fa, xs[0], xs[1], xs[2]) {
        1
    } else {
        -1
    };
    let deleted: HashSet<EdgeId> = [edge].into_iter().collect();
    let new_spine = rewrite_spine(&bs.spine, &deleted, &xlat, extra, (cid[0], sigma))?;
    let diag = new_spine.validate();
    if !diag.is_valid() {
        return Err(MoveError::InvalidSite(format!(
            "rewrite is not a valid spine: {:?}",
            diag.failures
        )));
    }
    let new_regions =
        trace_regions(&new_spine).map_err(|e| MoveError::InvalidSite(e.to_string()))?;
    if new_regions.len() != bs.regions.len() + 1 {
        return Err(MoveError::InvalidSite(
            "rewrite did not create exactly one region".into(),
        ));
    }

    let map_pair = |v: usize, c: u8, d: u8| -> (usize, u8, u8) {
        if v == va {
            for i in 0..3 {
                let corners = [fa, xs[(i + 1) % 3], xs[(i + 2) % 3]];
                if corners.contains(&c) && corners.contains(&d) {
                    let li = lam[i].inverse();
                    return (cid[i], li.apply(c), li.apply(d));
                }
            }
            unreachable!("corner pair at the first endpoint fits some new gadget");
        } else if v == vb {
            for i in 0..3 {
                let corners = [fb, p.apply(xs[(i + 1) % 3]), p.apply(xs[(i + 2) % 3])];
                if corners.contains(&c) && corners.contains(&d) {
                    let li = lamp[i].inverse();
                    return (cid[i], li.apply(c), li.apply(d));
                }
            }
            unreachable!("corner pair at the second endpoint fits some new gadget");
        } else {
            (v, c, d)
        }
    };
    let transferred =
        transfer_region_signs(&bs, &HashSet::new(), &new_spine, &new_regions, map_pair)?;
    let fresh: Vec<usize> = transferred
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
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
    for sign in [1i8, -1i8] {
        let signs: Vec<i8> = transferred
            .iter()
            .enumerate()
            .map(|(i, s)| if i == fresh { sign } else { s.unwrap() })
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
            "no orientation of the new region satisfies the branching condition".into(),
        ));
    }
    Ok(out)
}

/// Apply the negative branched MP move by collapsing region `region`, which
/// must have exactly three passages through three distinct vertices.
pub fn apply_mp_negative(bs: &BranchedSpine, region: usize) -> Result<BranchedSpine, MoveError> {
    let bs = normalize_signs(bs);
    let n = bs.spine.vertex_count;
    let r = bs
        .regions
        .get(region)
        .ok_or_else(|| MoveError::InvalidSite(format!("no region {region}")))?;
    if r.orbit.len() != 3 {
        return Err(MoveError::InvalidSite(
            "anchor region must have exactly three passages".into(),
        ));
    }
    let states = [r.orbit[0], r.orbit[1], r.orbit[2]];
    let vs = [states[0].vertex, states[1].vertex, states[2].vertex];
    if vs[0] == vs[1] || vs[1] == vs[2] || vs[0] == vs[2] {
        return Err(MoveError::InvalidSite(
            "anchor region must pass through three distinct vertices".into(),
        ));
    }
    // tail/head corners of the collapsing region's dual axis, per vertex
    let mut cc = [0u8; 3];
    let mut dd = [0u8; 3];
    for i in 0..3 {
        let (c, d) = directed_corners(1, states[i]);
        cc[i] = c;
        dd[i] = d;
    }
    // consistency of the axis direction across the three gluings
    let map = bs.spine.germ_map().expect("valid spine");
    for i in 0..3 {
        let g = Germ::new(vs[i], states[i].out_slot);
        let (_, rec) = bs.spine.gluing_at(&map, g);
        let q = rec.perm_from(g);
        debug_assert_eq!(q.apply(cc[i]), cc[(i + 1) % 3]);
        debug_assert_eq!(q.apply(dd[i]), dd[(i + 1) % 3]);
    }

    let mut removed = vs;
    removed.sort_unstable();
    let (aid, bid) = (removed[0], removed[1]);
    let vmap: HashMap<usize, usize> = (0..n)
        .filter(|v| !vs.contains(v))
        .map(|v| (v, if v < removed[2] { v } else { v - 1 }))
        .collect();

    let mut germ = HashMap::new();
    for i in 0..3 {
        let (y_here, y_prev) = (states[i].in_slot, states[i].out_slot);
        let mut mu = [0u8; 4]; // V_i slots -> gadget B slots
        mu[cc[i] as usize] = ((i + 1) % 3) as u8;
        mu[dd[i] as usize] = 3;
        mu[y_here as usize] = i as u8;
        mu[y_prev as usize] = ((i + 2) % 3) as u8;
        let mut mup = mu; // V_i slots -> gadget A slots
        mup[dd[i] as usize] = ((i + 1) % 3) as u8;
        mup[cc[i] as usize] = 3;
        germ.insert(
            Germ::new(vs[i], cc[i]),
            (
                Germ::new(bid, ((i + 1) % 3) as u8),
                Perm4::new(mu).expect("slot translation is a bijection"),
            ),
        );
        germ.insert(
            Germ::new(vs[i], dd[i]),
            (
                Germ::new(aid, ((i + 1) % 3) as u8),
                Perm4::new(mup).expect("slot translation is a bijection"),
            ),
        );
    }
    let xlat = Xlat {
        new_vertex_count: n - 1,
        germ,
        vmap: vmap.clone(),
        affected: vs.into_iter().collect(),
    };
    let deleted: HashSet<EdgeId> = r.boundary_word.iter().map(|p| p.edge).collect();
    debug_assert_eq!(deleted.len(), 3);
    let extra = vec![EdgeRec::new(
        Germ::new(aid, 3),
        Germ::new(bid, 3),
        Perm4::IDENTITY,
    )];
    // Orientation anchor from the affine model of the three collapsing
    // gadgets: the tail-side gadget carries the parity sign of the slot
    // arrangement (c_0, d_0, in_0, out_0).
    let sigma: i8 = if arrangement_is_even(cc[0], dd[0], states[0].in_slot, states[0].out_slot) {
        1
    } else {
        -1
    };
    let new_spine = rewrite_spine(&bs.spine, &deleted, &xlat, extra, (aid, sigma))?;
    let diag = new_spine.validate();
    if !diag.is_valid() {
        return Err(MoveError::InvalidSite(format!(
            "collapse is not a valid spine: {:?}",
            diag.failures
        )));
    }
    let new_regions =
        trace_regions(&new_spine).map_err(|e| MoveError::InvalidSite(e.to_string()))?;
    if new_regions.len() + 1 != bs.regions.len() {
        return Err(MoveError::InvalidSite(
            "collapse did not remove exactly one region".into(),
        ));
    }

    let map_pair = |v: usize, c: u8, d: u8| -> (usize, u8, u8) {
        if let Some(i) = (0..3).find(|&i| vs[i] == v) {
            let (y_here, y_prev) = (states[i].in_slot, states[i].out_slot);
            let y = |x: u8| -> u8 {
                if x == y_here {
                    i as u8
                } else {
                    debug_assert_eq!(x, y_prev);
                    ((i + 2) % 3) as u8
                }
            };
            let tgt = |x: u8| -> u8 {
                if x == cc[i] || x == dd[i] {
                    3
                } else {
                    y(x)
                }
            };
            if c == dd[i] || d == dd[i] {
                (bid, tgt(c), tgt(d))
            } else {
                // covers pairs containing the tail corner and pure y pairs
                (aid, tgt(c), tgt(d))
            }
        } else {
            (vmap[&v], c, d)
        }
    };
    let skip: HashSet<usize> = [region].into_iter().collect();
    let transferred = transfer_region_signs(&bs, &skip, &new_spine, &new_regions, map_pair)?;
    let signs: Vec<i8> = transferred
        .into_iter()
        .collect::<Option<Vec<i8>>>()
        .ok_or_else(|| MoveError::InvalidSite("a region received no orientation".into()))?;
    if !branching_is_valid(&new_spine, &new_regions, &signs) {
        return Err(MoveError::BranchingObstruction(
            "collapsed picture violates the branching condition".into(),
        ));
    }
    let branched = BranchedSpine::new(
        new_spine,
        Branching {
            region_orientations: signs,
        },
    )
    .map_err(|e| MoveError::InvalidSite(e.to_string()))?;
    Ok(normalize_signs(&branched))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::enumerate_branchings;
    use crate::canon::canonical_form;
    use crate::enumerate::enumerate_spines;
    use crate::homology::homology_h1;
    use crate::moves::{find_sites, SpineMoveKind};

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
    fn mp_positive_deltas_and_validity() {
        for bs in sample_branched(2, 12) {
            let h1 = homology_h1(&bs.spine).unwrap();
            for site in find_sites(&bs, SpineMoveKind::MpPos) {
                let results = apply_mp_positive(&bs, site.anchor).unwrap();
                assert!(!results.is_empty() && results.len() <= 2);
                for (res, _) in results {
                    assert!(res.spine.validate().is_valid());
                    assert_eq!(res.spine.vertex_count, bs.spine.vertex_count + 1);
                    assert_eq!(res.spine.edges.len(), bs.spine.edges.len() + 2);
                    assert_eq!(res.regions.len(), bs.regions.len() + 1);
                    assert_eq!(homology_h1(&res.spine).unwrap(), h1);
                }
            }
        }
    }

    #[test]
    fn mp_round_trip_restores_the_spine() {
        for bs in sample_branched(2, 6) {
            let cert = canonical_form(&bs).unwrap();
            for site in find_sites(&bs, SpineMoveKind::MpPos) {
                for (res, _) in apply_mp_positive(&bs, site.anchor).unwrap() {
                    let mut recovered = false;
                    for neg in find_sites(&res, SpineMoveKind::MpNeg) {
                        if let Ok(back) = apply_mp_negative(&res, neg.anchor) {
                            assert_eq!(
                                homology_h1(&back.spine).unwrap(),
                                homology_h1(&bs.spine).unwrap()
                            );
                            if canonical_form(&back).unwrap() == cert {
                                recovered = true;
                            }
                        }
                    }
                    assert!(recovered, "no negative move undoes the positive one");
                }
            }
        }
    }
}
