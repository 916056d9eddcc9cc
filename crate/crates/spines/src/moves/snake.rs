//! The snake move (both mirrors): a sliding insertion of two vertices along
//! an edge, with an inverse recognizer.
//!
//! Dually, the positive move is a pillow insertion along a bent disk whose
//! first flank is the face glued at the anchor edge, seen from its `a` end
//! (mirror `Left`) or its `b` end (mirror `Right`). The disk preferably
//! continues over a wedge chain of length two; the crossed wedge is chosen
//! so its two slots have ranks of equal parity (measured past the crossing
//! when the crossed gluing is a loop). When no such chain yields a sliding
//! insertion the disk shortens to the single equal-parity wedge at the
//! anchor end. Both shapes preserve the boundary pattern and are related to
//! the sliding-vertex move at the anchor end by one positive and one
//! negative MP move, so the move is total. The negative move recognizes the
//! pillow — a two-passage region through two distinct vertices — and
//! removes it, restoring the anchor edge.

use crate::branching::{branching_is_valid, BranchedSpine, Branching};
use crate::region::{trace_regions, WingState};
use crate::spine::{EdgeId, EdgeRec, Germ};
use crate::transform::normalize_signs;
use std::collections::{HashMap, HashSet};

use super::pillow::pillow_insert;
use super::surgery::{corner_dir_index, directed_corners, rewrite_spine, Xlat};
use super::{MoveError, SpineMoveKind, SpineMoveSite};

/// Mirror variant of the snake move.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SnakeMirror {
    Left,
    Right,
}

/// Apply a snake move at `edge`: positive inserts two vertices, negative
/// recognizes and removes a previously inserted pair.
pub fn apply_snake(
    bs: &BranchedSpine,
    edge: EdgeId,
    positive: bool,
    mirror: SnakeMirror,
) -> Result<BranchedSpine, MoveError> {
    if positive {
        apply_snake_positive(bs, edge, mirror)
    } else {
        apply_snake_negative(bs, edge, mirror)
    }
}

fn apply_snake_positive(
    bs: &BranchedSpine,
    edge: EdgeId,
    mirror: SnakeMirror,
) -> Result<BranchedSpine, MoveError> {
    let e = *bs
        .spine
        .edges
        .get(edge)
        .ok_or_else(|| MoveError::InvalidSite(format!("no edge {edge}")))?;
    let ga = if mirror == SnakeMirror::Right { e.b } else { e.a };
    let (va, fa) = (ga.vertex, ga.slot);
    let ranks = bs.vertex_ranks();
    let par = |v: usize, s: u8| ranks[v][s as usize] % 2;
    let map = bs.spine.germ_map().expect("valid spine");
    // Preferred shape: a length-two chain. The crossed wedge must have slots
    // of equal rank parity, judged past the crossing when the crossed gluing
    // is a loop (the far copy of the wedge carries the relevant ranks).
    for t in (0..4u8).filter(|&t| t != fa) {
        let g = Germ::new(va, t);
        let (_, rec) = bs.spine.gluing_at(&map, g);
        let matches = if rec.a.vertex == rec.b.vertex {
            let m = rec.perm_from(g);
            let far = rec.other_end(g);
            par(far.vertex, m.apply(fa)) == par(far.vertex, m.apply(t))
        } else {
            par(va, fa) == par(va, t)
        };
        if !matches {
            continue;
        }
        let start = WingState {
            vertex: va,
            in_slot: fa,
            out_slot: t,
        };
        if let Ok(results) = pillow_insert(bs, start, 2) {
            if let Some((branched, _)) = results.into_iter().find(|(_, s)| *s) {
                return Ok(branched);
            }
        }
    }
    // Degenerate shape: the disk shortens to the single wedge at the anchor
    // end whose slots have ranks of equal parity.
    let t1 = (0..4u8)
        .filter(|&s| s != fa)
        .find(|&s| par(va, s) == par(va, fa))
        .expect("some other slot shares the anchor slot's rank parity");
    let start = WingState {
        vertex: va,
        in_slot: fa,
        out_slot: t1,
    };
    let results = pillow_insert(bs, start, 1)?;
    results
        .into_iter()
        .find(|(_, sliding)| *sliding)
        .map(|(branched, _)| branched)
        .ok_or_else(|| {
            MoveError::BranchingObstruction(
                "insertion does not preserve the boundary pattern".into(),
            )
        })
}

/// Collapse the pillow whose internal gluings include `edge`: the anchor
/// must be crossed by a two-passage region through two distinct vertices
/// whose other four slots lead outside the pair. The mirror is implied by
/// the configuration and ignored.
fn apply_snake_negative(
    bs: &BranchedSpine,
    edge: EdgeId,
    _mirror: SnakeMirror,
) -> Result<BranchedSpine, MoveError> {
    let bs = normalize_signs(bs);
    let n = bs.spine.vertex_count;
    if edge >= bs.spine.edges.len() {
        return Err(MoveError::InvalidSite(format!("no edge {edge}")));
    }
    let r = bs
        .regions
        .iter()
        .find(|r| r.orbit.len() == 2 && r.boundary_word.iter().any(|p| p.edge == edge))
        .ok_or_else(|| {
            MoveError::InvalidSite("anchor is not crossed by a two-passage region".into())
        })?;
    let (s1, s2) = (r.orbit[0], r.orbit[1]);
    let (t1, t2) = (s1.vertex, s2.vertex);
    if t1 == t2 {
        return Err(MoveError::InvalidSite(
            "pillow passages must visit two distinct vertices".into(),
        ));
    }
    let map = bs.spine.germ_map().expect("valid spine");
    let (out_id, rec_out) = bs.spine.gluing_at(&map, Germ::new(t1, s1.out_slot));
    let (in_id, rec_in) = bs.spine.gluing_at(&map, Germ::new(t1, s1.in_slot));
    let w = rec_out.perm_from(Germ::new(t1, s1.out_slot));
    let wp = rec_in.perm_from(Germ::new(t1, s1.in_slot));
    // corners of the pillow's internal edge at the first vertex
    let corners: Vec<u8> = (0..4u8)
        .filter(|&s| s != s1.in_slot && s != s1.out_slot)
        .collect();
    // the two internal gluings must induce the same identification of the
    // pair, or the pillow cannot be squashed flat
    if (0..4u8).any(|c| w.apply(c) != wp.apply(c)) {
        return Err(MoveError::InvalidSite(
            "pillow gluings disagree on the internal edge".into(),
        ));
    }

    // The pillow's outer germs: the two non-internal slots on each vertex,
    // identified across the pair by `w`. In degenerate pillows (inserted
    // over a short or self-returning disk) some outer germs glue back into
    // the pair, so restored gluings are found by walking through it.
    let mut deleted: HashSet<EdgeId> = [out_id, in_id].into_iter().collect();
    let w_inv = w.inverse();
    let in_pair = |g: Germ| g.vertex == t1 || g.vertex == t2;
    let twin = |g: Germ| {
        if g.vertex == t1 {
            Germ::new(t2, w.apply(g.slot))
        } else {
            Germ::new(t1, w_inv.apply(g.slot))
        }
    };
    for &x in &corners {
        let (id1, _) = bs.spine.gluing_at(&map, Germ::new(t1, x));
        let (id2, _) = bs.spine.gluing_at(&map, Germ::new(t2, w.apply(x)));
        deleted.insert(id1);
        deleted.insert(id2);
    }
    let mut extra = Vec::with_capacity(2);
    let mut consumed: HashSet<(usize, u8)> = HashSet::new();
    for &x in &corners {
        for start in [Germ::new(t1, x), Germ::new(t2, w.apply(x))] {
            let (_, rec0) = bs.spine.gluing_at(&map, start);
            let g0 = rec0.other_end(start);
            if in_pair(g0) || !consumed.insert((g0.vertex, g0.slot)) {
                continue;
            }
            // walk from the external germ g0 through the pillow until the
            // path exits on the other side
            let mut acc = rec0.perm_from(g0);
            let mut cur = start;
            let exit = loop {
                acc = if cur.vertex == t1 {
                    w.compose(&acc)
                } else {
                    w_inv.compose(&acc)
                };
                let tw = twin(cur);
                let (_, rec) = bs.spine.gluing_at(&map, tw);
                let nxt = rec.other_end(tw);
                acc = rec.perm_from(tw).compose(&acc);
                if !in_pair(nxt) {
                    break nxt;
                }
                cur = nxt;
            };
            if exit == g0 {
                return Err(MoveError::InvalidSite(
                    "collapse would glue a face to itself".into(),
                ));
            }
            consumed.insert((exit.vertex, exit.slot));
            extra.push(EdgeRec::new(g0, exit, acc));
        }
    }
    if extra.is_empty() {
        return Err(MoveError::InvalidSite(
            "pillow has no attachment outside the pair".into(),
        ));
    }

    let removed = if t1 < t2 { [t1, t2] } else { [t2, t1] };
    let vmap: HashMap<usize, usize> = (0..n)
        .filter(|&v| v != t1 && v != t2)
        .map(|v| (v, v - removed.iter().filter(|&&x| x < v).count()))
        .collect();
    let extra: Vec<EdgeRec> = extra
        .into_iter()
        .map(|rec| {
            EdgeRec::new(
                Germ::new(vmap[&rec.a.vertex], rec.a.slot),
                Germ::new(vmap[&rec.b.vertex], rec.b.slot),
                rec.perm,
            )
        })
        .collect();
    let anchor_vertex = extra[0].a.vertex;
    let xlat = Xlat {
        new_vertex_count: n - 2,
        germ: HashMap::new(),
        vmap: vmap.clone(),
        affected: [t1, t2].into_iter().collect(),
    };
    let new_spine = rewrite_spine(&bs.spine, &deleted, &xlat, extra, (anchor_vertex, 1))?;
    let diag = new_spine.validate();
    if !diag.is_valid() {
        return Err(MoveError::InvalidSite(format!(
            "collapse is not a valid spine: {:?}",
            diag.failures
        )));
    }
    let new_regions =
        trace_regions(&new_spine).map_err(|e| MoveError::InvalidSite(e.to_string()))?;
    if new_regions.len() + 2 != bs.regions.len() {
        return Err(MoveError::InvalidSite(
            "collapse did not remove exactly two regions".into(),
        ));
    }

    // Transfer through every passage outside the removed pair; the two
    // halves separated by the pillow merge back and must agree.
    let idx = corner_dir_index(&new_spine, &new_regions);
    let mut transferred: Vec<Option<i8>> = vec![None; new_regions.len()];
    for old in &bs.regions {
        if old.id == r.id {
            continue;
        }
        for st in &old.orbit {
            if st.vertex == t1 || st.vertex == t2 {
                continue;
            }
            let (t, h) = directed_corners(bs.spine.vertex_orientations[st.vertex], *st);
            let &(nid, dir) = idx.get(&(vmap[&st.vertex], t, h)).ok_or_else(|| {
                MoveError::InvalidSite("passage has no region in the collapse".into())
            })?;
            let new_sign = bs.branching.region_orientations[old.id] * dir;
            if let Some(prev) = transferred[nid] {
                if prev != new_sign {
                    return Err(MoveError::BranchingObstruction(
                        "merged region halves carry opposite orientations".into(),
                    ));
                }
            }
            transferred[nid] = Some(new_sign);
        }
    }
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

/// One site per collapsible pillow, anchored at the smaller of the two
/// internal gluings.
pub(crate) fn find_negative_sites(bs: &BranchedSpine) -> Vec<SpineMoveSite> {
    let mut out = Vec::new();
    for r in &bs.regions {
        if r.orbit.len() != 2 || r.orbit[0].vertex == r.orbit[1].vertex {
            continue;
        }
        let anchor = r
            .boundary_word
            .iter()
            .map(|p| p.edge)
            .min()
            .expect("two-passage region crosses a gluing");
        if apply_snake_negative(bs, anchor, SnakeMirror::Left).is_ok() {
            out.push(SpineMoveSite {
                kind: SpineMoveKind::SnakeNeg,
                anchor,
                variant: 0,
                orientation_choice: 0,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{boundary_pattern, pattern_signature};
    use crate::branching::enumerate_branchings;
    use crate::canon::canonical_form;
    use crate::enumerate::enumerate_spines;
    use crate::homology::homology_h1;
    use crate::moves::{find_sites, is_rigid};

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
    fn snake_deltas_pattern_and_round_trip() {
        let mut samples = sample_branched(1, 8);
        samples.extend(sample_branched(2, 12));
        let mut applied = 0usize;
        for bs in &samples {
            let cert = canonical_form(bs).unwrap();
            let sig = pattern_signature(&boundary_pattern(bs));
            let h1 = homology_h1(&bs.spine).unwrap();
            for edge in 0..bs.spine.edges.len() {
                for mirror in [SnakeMirror::Left, SnakeMirror::Right] {
                    // the positive snake is total: some disk shape applies
                    // at every edge end
                    let res = apply_snake(bs, edge, true, mirror).unwrap();
                    applied += 1;
                    assert!(res.spine.validate().is_valid());
                    assert_eq!(res.spine.vertex_count, bs.spine.vertex_count + 2);
                    assert_eq!(res.spine.edges.len(), bs.spine.edges.len() + 4);
                    assert_eq!(res.regions.len(), bs.regions.len() + 2);
                    assert_eq!(homology_h1(&res.spine).unwrap(), h1);
                    assert_eq!(pattern_signature(&boundary_pattern(&res)), sig);
                    let sites = find_sites(&res, super::super::SpineMoveKind::SnakeNeg);
                    assert!(!sites.is_empty());
                    let recovered = sites.iter().any(|s| {
                        apply_snake(&res, s.anchor, false, SnakeMirror::Left)
                            .map(|back| canonical_form(&back).unwrap() == cert)
                            .unwrap_or(false)
                    });
                    assert!(recovered, "no collapse restores the original");
                }
            }
        }
        assert!(applied >= 20, "too few applicable snake sites: {applied}");
    }

    #[test]
    fn snake_result_is_never_rigid() {
        let mut samples = sample_branched(1, 4);
        samples.extend(sample_branched(2, 8));
        for bs in samples {
            for edge in 0..bs.spine.edges.len() {
                for mirror in [SnakeMirror::Left, SnakeMirror::Right] {
                    let res = apply_snake(&bs, edge, true, mirror).unwrap();
                    assert!(!is_rigid(&res));
                }
            }
        }
    }
}
