//! Region tracing: the wing-orbit decomposition of a spine.
//!
//! A directed wing state `(v, in, out)` stands for a region germ at vertex
//! `v` occupying the wing `{in, out}`, about to leave through slot `out`.
//! Crossing the gluing at germ `(v, out)` with extended permutation `p`
//! leads to the state `(w, p(out), p(in))` at the far vertex. This walk is a
//! permutation of the `12n` directed states; reversing a state conjugates
//! the walk to its inverse, so orbits come in mutually reversed pairs. A
//! region is such a pair; it is a disk exactly when its orbit visits each
//! undirected wing once.

use crate::spine::{EdgeId, Germ, Spine, SpineError, VertexId};

/// A directed wing state.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WingState {
    pub vertex: VertexId,
    pub in_slot: u8,
    pub out_slot: u8,
}

impl WingState {
    pub fn reversed(&self) -> WingState {
        WingState {
            vertex: self.vertex,
            in_slot: self.out_slot,
            out_slot: self.in_slot,
        }
    }

    /// The undirected wing `(vertex, {in, out})` with sorted slots.
    pub fn wing(&self) -> Wing {
        let (lo, hi) = if self.in_slot < self.out_slot {
            (self.in_slot, self.out_slot)
        } else {
            (self.out_slot, self.in_slot)
        };
        Wing {
            vertex: self.vertex,
            lo,
            hi,
        }
    }
}

/// An undirected wing: a pair of distinct slots at a vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Wing {
    pub vertex: VertexId,
    pub lo: u8,
    pub hi: u8,
}

/// One passage of a region boundary along a spine edge.
///
/// `side` indexes which of the three wing pairs of the edge record is being
/// traversed (ranked by the wing slot at the record's first germ, ascending);
/// `dir` is `+1` when the passage runs from the record's first germ to its
/// second.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Passage {
    pub edge: EdgeId,
    pub side: u8,
    pub dir: i8,
}

/// A region: a disk 2-stratum of the spine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub id: usize,
    /// The canonically directed orbit: starts at the minimal wing entered
    /// through its higher slot and leaving through its lower slot.
    pub orbit: Vec<WingState>,
    /// Cyclic sequence of edge passages, aligned with `orbit` (passage `k`
    /// is the crossing made when leaving state `k`).
    pub boundary_word: Vec<Passage>,
    /// The wings this region contains, sorted.
    pub wing_orbit: Vec<Wing>,
}

/// Advance one step of the directed wing walk.
pub fn step(
    spine: &Spine,
    map: &[[Option<(EdgeId, bool)>; 4]],
    s: WingState,
) -> (WingState, Passage) {
    let germ = Germ::new(s.vertex, s.out_slot);
    let (ei, rec) = spine.gluing_at(map, germ);
    let p = rec.perm_from(germ);
    let next = WingState {
        vertex: rec.other_end(germ).vertex,
        in_slot: p.apply(s.out_slot),
        out_slot: p.apply(s.in_slot),
    };
    // Express the traversed wing at the record's first germ to rank the side.
    let (wing_slot_at_a, dir) = if germ == rec.a {
        (s.in_slot, 1)
    } else {
        (rec.perm.inverse().apply(s.in_slot), -1)
    };
    let mut side = 0u8;
    for j in 0..4u8 {
        if j == rec.a.slot {
            continue;
        }
        if j == wing_slot_at_a {
            break;
        }
        side += 1;
    }
    (
        next,
        Passage {
            edge: ei,
            side,
            dir,
        },
    )
}

fn all_states(n: usize) -> Vec<WingState> {
    let mut out = Vec::with_capacity(12 * n);
    for v in 0..n {
        for a in 0..4u8 {
            for b in 0..4u8 {
                if a != b {
                    out.push(WingState {
                        vertex: v,
                        in_slot: a,
                        out_slot: b,
                    });
                }
            }
        }
    }
    out
}

fn orbit_from(
    spine: &Spine,
    map: &[[Option<(EdgeId, bool)>; 4]],
    start: WingState,
) -> (Vec<WingState>, Vec<Passage>) {
    let mut states = vec![start];
    let mut passages = Vec::new();
    let mut cur = start;
    loop {
        let (next, pass) = step(spine, map, cur);
        passages.push(pass);
        if next == start {
            break;
        }
        states.push(next);
        cur = next;
    }
    (states, passages)
}

/// Check that every traced orbit visits each undirected wing at most once.
pub fn check_standardness(
    spine: &Spine,
    map: &[[Option<(EdgeId, bool)>; 4]],
) -> Result<(), String> {
    let mut visited = std::collections::HashSet::new();
    for s in all_states(spine.vertex_count) {
        if visited.contains(&s) {
            continue;
        }
        let (states, _) = orbit_from(spine, map, s);
        let mut wings = std::collections::HashSet::new();
        for st in &states {
            visited.insert(*st);
            if !wings.insert(st.wing()) {
                return Err(format!(
                    "region orbit through wing ({}, {{{}, {}}}) revisits a wing-germ",
                    st.wing().vertex,
                    st.wing().lo,
                    st.wing().hi
                ));
            }
        }
    }
    Ok(())
}

/// Trace all regions of a spine. Requires only a perfect germ matching; the
/// spine need not be standard (non-disk orbits are rejected by
/// `validate_spine`, but here each mutually-reversed orbit pair still yields
/// one region entry as long as it is a disk).
///
/// Region ids are deterministic: orbits sorted by minimal wing key.
pub fn trace_regions(spine: &Spine) -> Result<Vec<Region>, SpineError> {
    let map = spine.germ_map()?;
    let mut seen = std::collections::HashSet::new();
    let mut regions: Vec<Region> = Vec::new();
    // Visit candidate canonical starts in sorted order so that each region
    // is first discovered from its minimal wing in the canonical direction.
    let mut starts = all_states(spine.vertex_count);
    starts.sort_by_key(|s| (s.wing(), s.in_slot < s.out_slot));
    for start in starts {
        if seen.contains(&start) {
            continue;
        }
        let (states, passages) = orbit_from(spine, &map, start);
        for st in &states {
            seen.insert(*st);
            seen.insert(st.reversed());
        }
        let mut wings: Vec<Wing> = states.iter().map(|s| s.wing()).collect();
        wings.sort();
        wings.dedup();
        regions.push(Region {
            id: 0,
            orbit: states,
            boundary_word: passages,
            wing_orbit: wings,
        });
    }
    regions.sort_by_key(|r| r.wing_orbit[0]);
    for (i, r) in regions.iter_mut().enumerate() {
        r.id = i;
    }
    Ok(regions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversal_conjugates_the_walk() {
        // On any well-formed spine, step(rev(step(s))) == rev(s).
        let spine = crate::enumerate::sample_one_vertex();
        let map = spine.germ_map().unwrap();
        for s in all_states(spine.vertex_count) {
            let (t, _) = step(&spine, &map, s);
            let (u, _) = step(&spine, &map, t.reversed());
            assert_eq!(u, s.reversed());
        }
    }
}
