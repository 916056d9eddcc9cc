//! Strand tracing: closed components of a diagram and their homology
//! classes.
//!
//! Tracing follows strand segments through crossings (in one slot, out the
//! opposite slot) and jumps across edges at matched leg pairs. A component's
//! homology class is computed by homotoping each in-region chord onto the
//! region boundary: a chord from one passage to another is replaced by the
//! integral edge path between fixed per-edge anchor points, walked forward
//! along the boundary circuit; the fractional runs from each crossing point
//! to its anchor cancel in pairs around the closed curve.

use std::collections::BTreeSet;

use crate::homology::{chain_complex_with_regions, reduce_mod_column_lattice};

use super::tangle::{Dart, Diagram, LegRef, Node};
use super::DiagramError;

/// One closed strand component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    /// The traversal as (region, dart) departures, in trace order; empty for
    /// a free loop.
    pub route: Vec<(usize, Dart)>,
    /// Region holding the component when it is a free loop.
    pub free_loop_region: Option<usize>,
    /// Number of matched pairs (edge crossings) traversed.
    pub leg_count: usize,
    pub crossing_visits: usize,
}

/// The matched partner of a leg, with the pair's edge.
fn partner(d: &Diagram, leg: LegRef) -> Option<LegRef> {
    let Some(Node::Leg { edge, .. }) = d.tangles[leg.region].nodes[leg.node] else {
        return None;
    };
    for pair in &d.matchings[edge] {
        if pair.legs[0] == leg {
            return Some(pair.legs[1]);
        }
        if pair.legs[1] == leg {
            return Some(pair.legs[0]);
        }
    }
    None
}

/// One step of the strand walk: depart from `dart` in `region`, run the
/// segment, pass through the node at the far end. Returns the next
/// departure.
fn advance(d: &Diagram, region: usize, dart: Dart) -> (usize, Dart) {
    let mate = d.tangles[region].pairs[&dart];
    match d.tangles[region].nodes[mate.node].expect("live node") {
        Node::Crossing { .. } => (region, Dart::new(mate.node, (mate.slot + 2) % 4)),
        Node::Leg { .. } => {
            let far = partner(
                d,
                LegRef {
                    region,
                    node: mate.node,
                },
            )
            .expect("validated diagrams match every leg");
            (far.region, Dart::new(far.node, 0))
        }
    }
}

/// The closed components of a valid diagram, in deterministic order
/// (minimal departure dart, then free loops by region).
pub fn components(d: &Diagram) -> Vec<Component> {
    let mut out = Vec::new();
    let mut visited: BTreeSet<(usize, Dart)> = BTreeSet::new();
    for (rid, t) in d.tangles.iter().enumerate() {
        let mut starts: Vec<Dart> = t.pairs.keys().copied().collect();
        starts.sort();
        for start in starts {
            if visited.contains(&(rid, start)) {
                continue;
            }
            let mut route = Vec::new();
            let mut legs = 0usize;
            let mut crossings = 0usize;
            let mut cur = (rid, start);
            loop {
                visited.insert(cur);
                // the reverse traversal would depart the segment's far dart;
                // mark it so the component is not traced twice
                visited.insert((cur.0, d.tangles[cur.0].pairs[&cur.1]));
                match d.tangles[cur.0].nodes[cur.1.node].expect("live node") {
                    Node::Leg { .. } => legs += 1,
                    Node::Crossing { .. } => crossings += 1,
                }
                route.push(cur);
                cur = advance(d, cur.0, cur.1);
                if cur == (rid, start) {
                    break;
                }
            }
            // only arrival legs are departure points, so `legs` counts the
            // matched pairs (edge crossings) the component traverses
            out.push(Component {
                id: out.len(),
                route,
                free_loop_region: None,
                leg_count: legs,
                crossing_visits: crossings,
            });
        }
    }
    for (rid, t) in d.tangles.iter().enumerate() {
        for _ in 0..t.free_loops {
            out.push(Component {
                id: out.len(),
                route: Vec::new(),
                free_loop_region: Some(rid),
                leg_count: 0,
                crossing_visits: 0,
            });
        }
    }
    out
}

/// The integral edge path between the anchor points of two passages of one
/// region, walked forward along the boundary circuit, accumulated into `z`
/// with sign `orient`.
fn add_chord(
    d: &Diagram,
    region: usize,
    k_in: usize,
    k_out: usize,
    orient: i64,
    z: &mut [i64],
) {
    let word = &d.spine.regions[region].boundary_word;
    let len = word.len();
    // anchor of a crossed edge = the edge's first-germ endpoint; it sits at
    // the start of the passage when the passage runs with the edge
    let sigma = if word[k_in].dir > 0 { k_in } else { (k_in + 1) % len };
    let tau = if word[k_out].dir > 0 { k_out } else { (k_out + 1) % len };
    let mut k = sigma;
    while k != tau {
        z[word[k].edge] += orient * word[k].dir as i64;
        k = (k + 1) % len;
    }
}

/// The leg sequence of a component as (region, leg node, passage index)
/// triples in trace order.
fn leg_events(d: &Diagram, comp: &Component) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for &(region, dart) in &comp.route {
        if let Some(Node::Leg { edge, side }) = d.tangles[region].nodes[dart.node] {
            let k = d.spine.regions[region]
                .boundary_word
                .iter()
                .position(|p| p.edge == edge && p.side == side)
                .expect("every sheet is passed exactly once");
            out.push((region, dart.node, k));
        }
    }
    out
}

/// The 1-cycle traced by an oriented component, as a vector over the edge
/// basis (`forward` follows the canonical trace direction).
pub fn component_cycle(d: &Diagram, comp: &Component, forward: bool) -> Vec<i64> {
    let mut z = vec![0i64; d.spine.spine.edges.len()];
    let events = leg_events(d, comp);
    // the route departs each leg once on arrival in a region (dart slot 0);
    // consecutive arrival legs bound one chord in the region of the first
    let orient = if forward { 1 } else { -1 };
    let m = events.len();
    for i in 0..m {
        let (region, _, k_in) = events[i];
        // the exit leg of this chord is the matched partner of the NEXT
        // arrival; it lies in `region` on some passage
        let next_arrival = events[(i + 1) % m];
        let exit = partner(
            d,
            LegRef {
                region: next_arrival.0,
                node: next_arrival.1,
            },
        )
        .expect("validated diagrams match every leg");
        debug_assert_eq!(exit.region, region);
        let Some(Node::Leg { edge, side }) = d.tangles[region].nodes[exit.node] else {
            unreachable!("partner of a leg is a leg");
        };
        let k_out = d.spine.regions[region]
            .boundary_word
            .iter()
            .position(|p| p.edge == edge && p.side == side)
            .expect("every sheet is passed exactly once");
        add_chord(d, region, k_in, k_out, orient, &mut z);
    }
    z
}

/// The homology class of one oriented component in canonical coordinates:
/// the traced 1-cycle reduced modulo region boundaries. Errors when the
/// component has no assigned orientation.
pub fn homology_class(d: &Diagram, comp: &Component) -> Result<Vec<i64>, DiagramError> {
    let forward = d
        .orientations
        .get(comp.id)
        .copied()
        .flatten()
        .ok_or(DiagramError::UnorientedComponent(comp.id))?;
    let z = component_cycle(d, comp, forward);
    Ok(reduce_cycle(d, &z))
}

/// Reduce a 1-cycle to canonical coordinates modulo the image of the region
/// boundary map.
pub fn reduce_cycle(d: &Diagram, z: &[i64]) -> Vec<i64> {
    let (d2, d1) = chain_complex_with_regions(&d.spine.spine, &d.spine.regions);
    debug_assert!({
        let mut ok = true;
        for i in 0..d1.rows {
            let mut s = 0i64;
            for j in 0..d1.cols {
                s += d1.get(i, j) * z[j];
            }
            ok &= s == 0;
        }
        ok
    });
    reduce_mod_column_lattice(&d2, z)
}

/// Sign-normalized homology classes of all components (first nonzero entry
/// positive), independent of any orientation assignment; suitable for
/// multiset comparison across moves.
pub fn homology_classes(d: &Diagram) -> Vec<Vec<i64>> {
    components(d)
        .iter()
        .map(|c| {
            let z = component_cycle(d, c, true);
            let neg: Vec<i64> = z.iter().map(|&v| -v).collect();
            // the class is only defined up to orientation here; pick the
            // lexicographically smaller of the two reduced representatives
            reduce_cycle(d, &z).min(reduce_cycle(d, &neg))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::one_vertex_branched_spines;

    #[test]
    fn free_loops_are_components_with_zero_class() {
        let bs = one_vertex_branched_spines().remove(0);
        let mut d = super::super::tangle::empty_diagram(&bs);
        d.tangles[0].free_loops = 2;
        if d.tangles.len() > 1 {
            d.tangles[1].free_loops = 1;
        }
        let comps = components(&d);
        assert_eq!(comps.len(), if d.tangles.len() > 1 { 3 } else { 2 });
        for c in &comps {
            assert_eq!(c.leg_count, 0);
            let z = component_cycle(&d, c, true);
            assert!(z.iter().all(|&v| v == 0));
        }
    }
}
