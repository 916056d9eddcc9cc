//! Brute-force enumeration of small spines.
//!
//! Enumerates perfect matchings on the `4n` germs together with all
//! parity-admissible wing bijections, filtering by validity. This is the
//! engine behind the census and behind several exhaustive cross-checks in
//! the tests.

use crate::perm::Perm4;
use crate::spine::{EdgeRec, Germ, Spine};

/// All germs of an `n`-vertex spine in lexicographic order.
fn all_germs(n: usize) -> Vec<Germ> {
    let mut out = Vec::with_capacity(4 * n);
    for v in 0..n {
        for s in 0..4u8 {
            out.push(Germ::new(v, s));
        }
    }
    out
}

/// The odd extended permutations sending `i` to `k`.
pub fn odd_perms_sending(i: u8, k: u8) -> Vec<Perm4> {
    Perm4::all_odd()
        .into_iter()
        .filter(|p| p.apply(i) == k)
        .collect()
}

/// Enumerate all valid spines with exactly `n` vertices (all vertex
/// orientations positive), in a deterministic order. The result is NOT
/// deduplicated up to isomorphism.
pub fn enumerate_spines(n: usize) -> Vec<Spine> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let germs = all_germs(n);
    let mut used = vec![false; germs.len()];
    let mut edges: Vec<EdgeRec> = Vec::with_capacity(2 * n);
    recurse(&germs, &mut used, &mut edges, n, &mut out);
    out
}

fn recurse(
    germs: &[Germ],
    used: &mut Vec<bool>,
    edges: &mut Vec<EdgeRec>,
    n: usize,
    out: &mut Vec<Spine>,
) {
    let first = match used.iter().position(|&u| !u) {
        Some(i) => i,
        None => {
            let spine = Spine::new(n, edges.clone());
            if spine.validate().is_valid() {
                out.push(spine);
            }
            return;
        }
    };
    used[first] = true;
    for j in (first + 1)..germs.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        let (a, b) = (germs[first], germs[j]);
        for p in odd_perms_sending(a.slot, b.slot) {
            edges.push(EdgeRec::new(a, b, p));
            recurse(germs, used, edges, n, out);
            edges.pop();
        }
        used[j] = false;
    }
    used[first] = false;
}

/// Enumerate all valid spines with exactly `n` vertices, pruning partial
/// matchings early: whenever a wing orbit is fully determined by the gluings
/// chosen so far, it must visit each undirected wing at most once (the disk
/// condition), and any partial walk revisiting a wing is fatal. Produces the
/// same set as `enumerate_spines` but reaches `n = 3` in reasonable time.
pub fn enumerate_spines_pruned(n: usize) -> Vec<Spine> {
    let mut out = Vec::new();
    visit_spines_pruned(n, &mut |spine| out.push(spine));
    out
}

/// Streaming form of [`enumerate_spines_pruned`]: calls `visit` on every
/// valid spine instead of collecting them (there are millions at `n = 3`).
pub fn visit_spines_pruned(n: usize, visit: &mut dyn FnMut(Spine)) {
    if n == 0 {
        return;
    }
    let germs = all_germs(n);
    let mut used = vec![false; germs.len()];
    let mut edges: Vec<EdgeRec> = Vec::with_capacity(2 * n);
    let mut map: Vec<[Option<usize>; 4]> = vec![[None; 4]; n];
    recurse_pruned(&germs, &mut used, &mut edges, &mut map, n, visit);
}

/// Walk the wing chains passing through the most recently added gluing;
/// reject when any such chain revisits an undirected wing. Chains untouched
/// by the new gluing were already checked at the earlier levels, so this
/// incremental check keeps the whole partial matching disk-clean.
fn partial_wings_ok(map: &[[Option<usize>; 4]], edges: &[EdgeRec]) -> bool {
    let new = edges.last().expect("called with at least one gluing");
    // (state just after crossing, state whose forward walk covers the part
    // of the chain before the crossing: the reversed pre-crossing state)
    let mut starts: Vec<((usize, u8, u8), (usize, u8, u8))> = Vec::with_capacity(6);
    for (g, h) in [(new.a, new.b), (new.b, new.a)] {
        let p = new.perm_from(g);
        for cin in 0..4u8 {
            if cin == g.slot {
                continue;
            }
            starts.push((
                (h.vertex, h.slot, p.apply(cin)),
                (g.vertex, g.slot, cin),
            ));
        }
    }
    let step = |(cv, cin, cout): (usize, u8, u8)| -> Option<(usize, u8, u8)> {
        let ei = map[cv][cout as usize]?;
        let rec = &edges[ei];
        let g = Germ::new(cv, cout);
        let p = rec.perm_from(g);
        Some((rec.other_end(g).vertex, p.apply(cout), p.apply(cin)))
    };
    let wing = |(cv, cin, cout): (usize, u8, u8)| (cv, cin.min(cout), cin.max(cout));
    for (fwd, back) in starts {
        let mut wings: Vec<(usize, u8, u8)> = Vec::new();
        let mut cur = fwd;
        let closed = loop {
            let w = wing(cur);
            if wings.contains(&w) {
                return false;
            }
            wings.push(w);
            match step(cur) {
                Some(next) if next == fwd => break true,
                Some(next) => cur = next,
                None => break false,
            }
        };
        if closed {
            continue;
        }
        // the chain is open: its half before the crossing is traced by the
        // forward walk of the reversed pre-crossing state
        let mut cur = back;
        loop {
            let w = wing(cur);
            if wings.contains(&w) {
                return false;
            }
            wings.push(w);
            match step(cur) {
                Some(next) => cur = next,
                None => break,
            }
        }
    }
    true
}

fn recurse_pruned(
    germs: &[Germ],
    used: &mut Vec<bool>,
    edges: &mut Vec<EdgeRec>,
    map: &mut Vec<[Option<usize>; 4]>,
    n: usize,
    visit: &mut dyn FnMut(Spine),
) {
    let first = match used.iter().position(|&u| !u) {
        Some(i) => i,
        None => {
            let spine = Spine::new(n, edges.clone());
            if spine.validate().is_valid() {
                visit(spine);
            }
            return;
        }
    };
    used[first] = true;
    for j in (first + 1)..germs.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        let (a, b) = (germs[first], germs[j]);
        let ei = edges.len();
        map[a.vertex][a.slot as usize] = Some(ei);
        map[b.vertex][b.slot as usize] = Some(ei);
        for p in odd_perms_sending(a.slot, b.slot) {
            edges.push(EdgeRec::new(a, b, p));
            if partial_wings_ok(map, edges) {
                recurse_pruned(germs, used, edges, map, n, visit);
            }
            edges.pop();
        }
        map[a.vertex][a.slot as usize] = None;
        map[b.vertex][b.slot as usize] = None;
        used[j] = false;
    }
    used[first] = false;
}

/// A fixed valid one-vertex spine, handy for unit tests.
pub fn sample_one_vertex() -> Spine {
    enumerate_spines(1)
        .into_iter()
        .next()
        .expect("at least one valid one-vertex spine exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_vertex_spines_exist_and_validate() {
        let spines = enumerate_spines(1);
        assert!(!spines.is_empty());
        for s in &spines {
            assert_eq!(s.edges.len(), 2);
            assert!(s.validate().is_valid());
        }
    }
}
