//! Diagram data structures and validation.
//!
//! Each region carries a planar tangle: a rotation-system map in a disk with
//! internal 4-valent crossings and univalent legs on the region boundary.
//! Node ids are slot-stable (`Vec<Option<Node>>`) so that rewrites away from
//! a move site never disturb the rest of the diagram. The linear order of
//! legs within a boundary passage is not stored: it is derived from the edge
//! matching order (positions ascend from the edge record's first germ to its
//! second), which makes order-compatibility across an edge hold by
//! construction.

use std::collections::{BTreeMap, BTreeSet};

use crate::branching::BranchedSpine;

use super::legality::{edge_sheets, legal_kind, PairKind};

/// A dart: one end of a strand segment at a node. Crossings use slots 0..3
/// in rotation order (strands run 0-2 and 1-3); legs use slot 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dart {
    pub node: usize,
    pub slot: u8,
}

impl Dart {
    pub fn new(node: usize, slot: u8) -> Dart {
        Dart { node, slot }
    }
}

/// A tangle node.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Node {
    /// Internal crossing; `over_first` means the strand through slots 0-2
    /// passes over the strand through slots 1-3.
    Crossing { over_first: bool },
    /// Univalent endpoint sitting on sheet `side` of spine edge `edge`.
    Leg { edge: usize, side: u8 },
}

/// The tangle of one region.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegionTangle {
    pub region: usize,
    /// Slot-stable node storage; `None` marks deleted nodes.
    pub nodes: Vec<Option<Node>>,
    /// Strand-segment involution on darts (stored symmetrically).
    pub pairs: BTreeMap<Dart, Dart>,
    /// Closed strands with no crossings or legs, floating in the region.
    pub free_loops: usize,
}

impl RegionTangle {
    pub fn new(region: usize) -> RegionTangle {
        RegionTangle {
            region,
            nodes: Vec::new(),
            pairs: BTreeMap::new(),
            free_loops: 0,
        }
    }

    pub fn add_node(&mut self, node: Node) -> usize {
        match self.nodes.iter().position(|n| n.is_none()) {
            Some(i) => {
                self.nodes[i] = Some(node);
                i
            }
            None => {
                self.nodes.push(Some(node));
                self.nodes.len() - 1
            }
        }
    }

    pub fn remove_node(&mut self, id: usize) {
        self.nodes[id] = None;
        while matches!(self.nodes.last(), Some(None)) {
            self.nodes.pop();
        }
    }

    /// Connect two darts as one strand segment.
    pub fn connect(&mut self, a: Dart, b: Dart) {
        self.pairs.insert(a, b);
        self.pairs.insert(b, a);
    }

    pub fn disconnect(&mut self, a: Dart) -> Option<Dart> {
        let b = self.pairs.remove(&a)?;
        self.pairs.remove(&b);
        Some(b)
    }

    /// The darts a live node exposes.
    pub fn darts_of(&self, id: usize) -> Vec<Dart> {
        match self.nodes[id] {
            Some(Node::Crossing { .. }) => (0..4).map(|s| Dart::new(id, s)).collect(),
            Some(Node::Leg { .. }) => vec![Dart::new(id, 0)],
            None => Vec::new(),
        }
    }

    pub fn live_nodes(&self) -> impl Iterator<Item = (usize, Node)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.map(|n| (i, n)))
    }
}

/// Reference to a leg node inside a region tangle.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LegRef {
    pub region: usize,
    pub node: usize,
}

/// One matched crossing point on an edge: two legs on distinct sheets, with
/// the crossing type. `legs[0]` is the leg on the smaller side index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MatchPair {
    pub legs: [LegRef; 2],
    pub kind: PairKind,
}

/// A link diagram on a branched spine.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub spine: BranchedSpine,
    /// One tangle per region id.
    pub tangles: Vec<RegionTangle>,
    /// Per edge: matched pairs ordered along the edge (first germ to second).
    pub matchings: Vec<Vec<MatchPair>>,
    /// Optional orientation per component (component ids are deterministic);
    /// `true` traverses the component in its canonical trace direction.
    pub orientations: Vec<Option<bool>>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.spine == other.spine
            && self.tangles == other.tangles
            && self.matchings == other.matchings
            && self.orientations == other.orientations
    }
}
impl Eq for Diagram {}

/// The empty diagram on a spine.
pub fn empty_diagram(bs: &BranchedSpine) -> Diagram {
    Diagram {
        spine: bs.clone(),
        tangles: (0..bs.regions.len()).map(RegionTangle::new).collect(),
        matchings: vec![Vec::new(); bs.spine.edges.len()],
        orientations: Vec::new(),
    }
}

/// Validation diagnostics; valid iff no failure was recorded.
#[derive(Clone, Debug, Default)]
pub struct DiagramDiagnostics {
    pub failures: Vec<String>,
    pub component_count: usize,
}

impl DiagramDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The legs of a region in boundary-circuit order, as (node id, passage
/// index) pairs: passages in boundary-word order, legs within a passage in
/// matching order (reversed when the passage runs against the edge).
pub fn boundary_legs(d: &Diagram, region: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (k, p) in d.spine.regions[region].boundary_word.iter().enumerate() {
        let mut here: Vec<usize> = Vec::new();
        for pair in &d.matchings[p.edge] {
            for (i, leg) in pair.legs.iter().enumerate() {
                if leg.region != region {
                    continue;
                }
                let is_side = matches!(
                    d.tangles[region].nodes.get(leg.node).copied().flatten(),
                    Some(Node::Leg { edge, side }) if edge == p.edge && side == p.side
                );
                // a pair stores each leg once; both entries are checked in
                // case a region owns two sheets of the same edge
                let _ = i;
                if is_side {
                    here.push(leg.node);
                }
            }
        }
        if p.dir < 0 {
            here.reverse();
        }
        out.extend(here.into_iter().map(|n| (n, k)));
    }
    out
}

/// Rotation-system planarity check of one region: the tangle together with
/// the boundary cycle through its legs must be genus zero on every connected
/// component (V - E + F = 2, counting the outer face).
fn check_region_planarity(d: &Diagram, region: usize, failures: &mut Vec<String>) {
    let t = &d.tangles[region];
    let legs = boundary_legs(d, region);
    // augmented darts: strand darts plus, at each leg, slot 1 (boundary
    // next) and slot 2 (boundary previous)
    let mut alpha: BTreeMap<Dart, Dart> = t.pairs.clone();
    for (i, &(n, _)) in legs.iter().enumerate() {
        let (m, _) = legs[(i + 1) % legs.len()];
        alpha.insert(Dart::new(n, 1), Dart::new(m, 2));
        alpha.insert(Dart::new(m, 2), Dart::new(n, 1));
    }
    let mut darts: BTreeSet<Dart> = BTreeSet::new();
    for (id, node) in t.live_nodes() {
        match node {
            Node::Crossing { .. } => darts.extend((0..4).map(|s| Dart::new(id, s))),
            Node::Leg { .. } => darts.extend((0..3).map(|s| Dart::new(id, s))),
        }
    }
    if darts.iter().any(|d| !alpha.contains_key(d)) {
        failures.push(format!("region {region}: some dart has no strand continuation"));
        return;
    }
    let sigma = |d: Dart| -> Dart {
        match t.nodes[d.node] {
            Some(Node::Crossing { .. }) => Dart::new(d.node, (d.slot + 1) % 4),
            Some(Node::Leg { .. }) => Dart::new(d.node, (d.slot + 1) % 3),
            None => unreachable!("live dart"),
        }
    };
    // connected components over alpha and sigma
    let index: BTreeMap<Dart, usize> = darts.iter().copied().zip(0..).collect();
    let mut comp: Vec<usize> = (0..darts.len()).collect();
    fn find(comp: &mut Vec<usize>, mut i: usize) -> usize {
        while comp[i] != i {
            comp[i] = comp[comp[i]];
            i = comp[i];
        }
        i
    }
    for (&a, &b) in &alpha {
        let (ia, ib) = (index[&a], index[&b]);
        let (ra, rb) = (find(&mut comp, ia), find(&mut comp, ib));
        comp[ra] = rb;
    }
    for &dart in &darts {
        let (ia, ib) = (index[&dart], index[&sigma(dart)]);
        let (ra, rb) = (find(&mut comp, ia), find(&mut comp, ib));
        comp[ra] = rb;
    }
    // faces: orbits of sigma . alpha
    let mut face_of: BTreeMap<Dart, usize> = BTreeMap::new();
    let mut faces = 0usize;
    for &start in &darts {
        if face_of.contains_key(&start) {
            continue;
        }
        let mut cur = start;
        loop {
            face_of.insert(cur, faces);
            cur = sigma(alpha[&cur]);
            if cur == start {
                break;
            }
        }
        faces += 1;
    }
    // per-component Euler count
    let mut by_comp: BTreeMap<usize, (BTreeSet<usize>, usize, BTreeSet<usize>)> = BTreeMap::new();
    for &dart in &darts {
        let c = find(&mut comp, index[&dart]);
        let entry = by_comp.entry(c).or_default();
        entry.0.insert(dart.node);
        entry.1 += 1;
        entry.2.insert(face_of[&dart]);
    }
    for (_, (vs, dart_count, fs)) in by_comp {
        let v = vs.len() as i64;
        let e = (dart_count / 2) as i64;
        let f = fs.len() as i64;
        if v - e + f != 2 {
            failures.push(format!(
                "region {region}: tangle component is not planar (V-E+F = {})",
                v - e + f
            ));
        }
    }
}

/// Validate a diagram: structural consistency, matching completeness, the
/// crossing-type legality table, per-region planarity, and component
/// closure. Returns diagnostics with the component count.
pub fn validate_diagram(d: &Diagram) -> DiagramDiagnostics {
    let mut failures = Vec::new();
    let bs = &d.spine;
    if d.tangles.len() != bs.regions.len() {
        failures.push(format!(
            "diagram has {} tangles but the spine has {} regions",
            d.tangles.len(),
            bs.regions.len()
        ));
    }
    if d.matchings.len() != bs.spine.edges.len() {
        failures.push(format!(
            "diagram has {} matchings but the spine has {} edges",
            d.matchings.len(),
            bs.spine.edges.len()
        ));
    }
    if !failures.is_empty() {
        return DiagramDiagnostics {
            failures,
            component_count: 0,
        };
    }
    let sheets = edge_sheets(bs);
    // tangles: node/dart/pair consistency, leg sheet ownership
    for (rid, t) in d.tangles.iter().enumerate() {
        if t.region != rid {
            failures.push(format!("tangle at index {rid} claims region {}", t.region));
        }
        let mut live_darts: BTreeSet<Dart> = BTreeSet::new();
        for (id, node) in t.live_nodes() {
            live_darts.extend(t.darts_of(id));
            if let Node::Leg { edge, side } = node {
                if edge >= bs.spine.edges.len() || side > 2 {
                    failures.push(format!("region {rid}: leg {id} references a bad sheet"));
                } else if sheets[edge].region(side) != rid {
                    failures.push(format!(
                        "region {rid}: leg {id} sits on sheet ({edge}, {side}) owned by region {}",
                        sheets[edge].region(side)
                    ));
                }
            }
        }
        for (&a, &b) in &t.pairs {
            if !live_darts.contains(&a) || !live_darts.contains(&b) {
                failures.push(format!("region {rid}: strand segment on a dead dart"));
            }
            if t.pairs.get(&b) != Some(&a) || a == b {
                failures.push(format!("region {rid}: strand pairing is not an involution"));
            }
        }
        for &dart in &live_darts {
            if !t.pairs.contains_key(&dart) {
                failures.push(format!(
                    "region {rid}: dart ({}, {}) has no strand segment",
                    dart.node, dart.slot
                ));
            }
        }
    }
    if !failures.is_empty() {
        return DiagramDiagnostics {
            failures,
            component_count: 0,
        };
    }
    // matchings: every leg matched exactly once, legal kinds
    let mut matched: BTreeSet<LegRef> = BTreeSet::new();
    for (eid, pairs) in d.matchings.iter().enumerate() {
        for pair in pairs {
            let mut sides = [0u8; 2];
            for (i, leg) in pair.legs.iter().enumerate() {
                match d
                    .tangles
                    .get(leg.region)
                    .and_then(|t| t.nodes.get(leg.node).copied().flatten())
                {
                    Some(Node::Leg { edge, side }) if edge == eid => sides[i] = side,
                    _ => {
                        failures.push(format!(
                            "edge {eid}: matched pair references a non-leg or a leg of another edge"
                        ));
                        return DiagramDiagnostics {
                            failures,
                            component_count: 0,
                        };
                    }
                }
                if !matched.insert(*leg) {
                    failures.push(format!("edge {eid}: leg matched more than once"));
                }
            }
            if sides[0] >= sides[1] {
                failures.push(format!(
                    "edge {eid}: pair sides must be distinct and ascending"
                ));
            }
            match legal_kind(&sheets[eid], sides[0], sides[1]) {
                Some(k) if k == pair.kind => {}
                _ => failures.push(format!(
                    "edge {eid}: pair across sides ({}, {}) declared {} (legality failure)",
                    sides[0], sides[1], pair.kind
                )),
            }
        }
    }
    for (rid, t) in d.tangles.iter().enumerate() {
        for (id, node) in t.live_nodes() {
            if matches!(node, Node::Leg { .. })
                && !matched.contains(&LegRef { region: rid, node: id })
            {
                failures.push(format!("region {rid}: leg {id} is unmatched"));
            }
        }
    }
    if !failures.is_empty() {
        return DiagramDiagnostics {
            failures,
            component_count: 0,
        };
    }
    for rid in 0..d.tangles.len() {
        check_region_planarity(d, rid, &mut failures);
    }
    let component_count = if failures.is_empty() {
        super::trace::components(d).len()
    } else {
        0
    };
    DiagramDiagnostics {
        failures,
        component_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::one_vertex_branched_spines;

    #[test]
    fn empty_diagram_is_valid_with_no_components() {
        for bs in one_vertex_branched_spines() {
            let d = empty_diagram(&bs);
            let diag = validate_diagram(&d);
            assert!(diag.is_valid(), "{:?}", diag.failures);
            assert_eq!(diag.component_count, 0);
        }
    }

    #[test]
    fn free_loop_is_valid_single_component() {
        let bs = one_vertex_branched_spines().remove(0);
        let mut d = empty_diagram(&bs);
        d.tangles[0].free_loops = 1;
        let diag = validate_diagram(&d);
        assert!(diag.is_valid(), "{:?}", diag.failures);
        assert_eq!(diag.component_count, 1);
    }
}
