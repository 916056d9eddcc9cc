//! The diagram move engine: local rewrites generating framed-link
//! equivalence of diagrams on a fixed branched spine.
//!
//! Eight move kinds are supported. `R_I'`, `R_II` and `R_III` are the
//! Reidemeister moves inside one region (curl, bigon, triangle slide);
//! `T_I'`/`T_I''` push a finger of strand across an edge (transversally or
//! tangentially), `T_II'` slides a crossing through an edge, `T_IV'` slides
//! a matched pair around a vertex corner, and `T_V'` switches the side of a
//! tangential crossing at the cost of one transverse pair. Every move except
//! `R_I'` preserves the framing, so scripts avoiding `R_I'` are the
//! pseudo-Legendrian subset.
//!
//! Rewrites are pure: `apply_diagram_move` returns the rewritten diagram
//! together with the site of the inverse move. Component orientations are
//! transported across the rewrite where a strand segment away from the site
//! survives, and dropped to `None` otherwise.

use std::collections::{BTreeMap, BTreeSet};

use super::legality::{edge_sheets, legal_kind, EdgeSheets, PairKind};
use super::tangle::{boundary_legs, Dart, Diagram, LegRef, MatchPair, Node, RegionTangle};
use super::trace::components;
use super::DiagramError;

/// Sentinel node id: a positive finger move starting from a free loop of the
/// source region instead of a strand segment.
pub const FREE_LOOP_CELL: usize = usize::MAX;

/// The move kinds of the diagram calculus.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DiagramMoveKind {
    /// Curl insertion/removal (changes the framing).
    RIp,
    /// Bigon creation/removal.
    RII,
    /// Triangle slide across a crossing.
    RIII,
    /// Transverse finger across an edge.
    TIp,
    /// Tangential finger across an edge.
    TIpp,
    /// Crossing slides through an edge.
    TIIp,
    /// Matched pair slides around a vertex corner.
    TIVp,
    /// Tangency switch at an edge.
    TVp,
}

pub const ALL_DIAGRAM_MOVE_KINDS: [DiagramMoveKind; 8] = [
    DiagramMoveKind::RIp,
    DiagramMoveKind::RII,
    DiagramMoveKind::RIII,
    DiagramMoveKind::TIp,
    DiagramMoveKind::TIpp,
    DiagramMoveKind::TIIp,
    DiagramMoveKind::TIVp,
    DiagramMoveKind::TVp,
];

impl DiagramMoveKind {
    pub fn name(self) -> &'static str {
        match self {
            DiagramMoveKind::RIp => "R_I'",
            DiagramMoveKind::RII => "R_II",
            DiagramMoveKind::RIII => "R_III",
            DiagramMoveKind::TIp => "T_I'",
            DiagramMoveKind::TIpp => "T_I''",
            DiagramMoveKind::TIIp => "T_II'",
            DiagramMoveKind::TIVp => "T_IV'",
            DiagramMoveKind::TVp => "T_V'",
        }
    }

    /// Every kind except the curl move preserves the framing.
    pub fn pseudo_legendrian(self) -> bool {
        self != DiagramMoveKind::RIp
    }

    pub fn parse(s: &str) -> Result<DiagramMoveKind, DiagramError> {
        ALL_DIAGRAM_MOVE_KINDS
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| DiagramError::Parse(format!("unknown diagram move kind `{s}`")))
    }
}

impl std::fmt::Display for DiagramMoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One concrete application site of a diagram move.
///
/// `cells` is kind-specific:
/// - `R_I'` +: `[node, slot]` a dart of the strand segment receiving the
///   curl, or empty for a curl on a free loop; −: `[crossing]`.
///   `variant = loop_start + 4*over`: the curl's loop arc joins crossing
///   slots `(loop_start, loop_start+1)`.
/// - `R_II` +: `[node_a, slot_a, node_b, slot_b]` two darts bounding a
///   common face (or on separate floating components); `variant` 0 pushes
///   the first strand over, 1 under; −: `[crossing_a, crossing_b]`.
/// - `R_III`: `[n1, s1, n2, s2, n3, s3]` the darts of a triangular face in
///   face order; self-inverse.
/// - `T_I'`/`T_I''` +: `[node, slot, passage, pos]` the finger's base dart
///   (`FREE_LOOP_CELL` node for a free loop), the boundary passage crossed,
///   and the insertion index into the edge matching; `variant` is the target
///   sheet side; −: `[edge, pos]` the first of the two matched pairs.
/// - `T_II'`: `[crossing, slot]` with darts `slot`, `slot+1` attached to the
///   matched legs; self-inverse family.
/// - `T_IV'`: `[edge, pair_index, end]` with `end` 0/1 the first/second germ
///   endpoint of the edge; self-inverse family.
/// - `T_V'` +: `[edge, pair_index]` of a tangential pair (`variant` 0 for
///   a left tangency, 1 for right); −: the first of the two replaced pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramMoveSite {
    pub kind: DiagramMoveKind,
    pub positive: bool,
    pub variant: u8,
    pub region: usize,
    pub cells: Vec<usize>,
}

/// Script line for a diagram move, prefixed `D:` to share the script
/// namespace with spine moves.
pub fn format_diagram_site(site: &DiagramMoveSite) -> String {
    let cells: Vec<String> = site.cells.iter().map(|c| c.to_string()).collect();
    format!(
        "D:{} {} @ {} v{} [{}]",
        site.kind,
        if site.positive { "+" } else { "-" },
        site.region,
        site.variant,
        cells.join(",")
    )
}

pub fn parse_diagram_site(line: &str) -> Result<DiagramMoveSite, DiagramError> {
    let bad = || DiagramError::Parse(format!("malformed diagram move `{line}`"));
    let rest = line.trim().strip_prefix("D:").ok_or_else(bad)?;
    let mut parts = rest.split_whitespace();
    let kind = DiagramMoveKind::parse(parts.next().ok_or_else(bad)?)?;
    let positive = match parts.next().ok_or_else(bad)? {
        "+" => true,
        "-" => false,
        _ => return Err(bad()),
    };
    if parts.next() != Some("@") {
        return Err(bad());
    }
    let region: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let variant: u8 = parts
        .next()
        .and_then(|v| v.strip_prefix('v'))
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    let cells_str = parts.next().ok_or_else(bad)?;
    let inner = cells_str
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(bad)?;
    let mut cells = Vec::new();
    if !inner.is_empty() {
        for c in inner.split(',') {
            cells.push(c.parse().map_err(|_| bad())?);
        }
    }
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(DiagramMoveSite {
        kind,
        positive,
        variant,
        region,
        cells,
    })
}

/// A script is pseudo-Legendrian when none of its diagram steps is a curl
/// move; spine-move lines are ignored.
pub fn is_pseudo_legendrian_script<S: AsRef<str>>(steps: &[S]) -> bool {
    steps.iter().all(|s| {
        let line = s.as_ref().trim();
        if !line.starts_with("D:") {
            return true;
        }
        match parse_diagram_site(line) {
            Ok(site) => site.kind.pseudo_legendrian(),
            Err(_) => true,
        }
    })
}

fn bad_site(msg: impl Into<String>) -> DiagramError {
    DiagramError::InvalidSite(msg.into())
}

/// The faces and connected components of one region's augmented rotation
/// map (strand darts plus boundary arcs between consecutive legs). Returns
/// `(face id per dart, component id per dart)`.
fn region_faces(d: &Diagram, region: usize) -> (BTreeMap<Dart, usize>, BTreeMap<Dart, usize>) {
    let t = &d.tangles[region];
    let legs = boundary_legs(d, region);
    let mut alpha: BTreeMap<Dart, Dart> = t.pairs.clone();
    for (i, &(n, _)) in legs.iter().enumerate() {
        let (m, _) = legs[(i + 1) % legs.len()];
        alpha.insert(Dart::new(n, 1), Dart::new(m, 2));
        alpha.insert(Dart::new(m, 2), Dart::new(n, 1));
    }
    let mut darts: Vec<Dart> = Vec::new();
    for (id, node) in t.live_nodes() {
        match node {
            Node::Crossing { .. } => darts.extend((0..4).map(|s| Dart::new(id, s))),
            Node::Leg { .. } => darts.extend((0..3).map(|s| Dart::new(id, s))),
        }
    }
    let sigma = |dart: Dart| -> Dart {
        match t.nodes[dart.node] {
            Some(Node::Crossing { .. }) => Dart::new(dart.node, (dart.slot + 1) % 4),
            Some(Node::Leg { .. }) => Dart::new(dart.node, (dart.slot + 1) % 3),
            None => unreachable!("live dart"),
        }
    };
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
        let (ra, rb) = (find(&mut comp, index[&a]), find(&mut comp, index[&b]));
        comp[ra] = rb;
    }
    for &dart in &darts {
        let (ra, rb) = (find(&mut comp, index[&dart]), find(&mut comp, index[&sigma(dart)]));
        comp[ra] = rb;
    }
    let comp_of: BTreeMap<Dart, usize> = darts
        .iter()
        .map(|&dart| {
            let r = find(&mut comp, index[&dart]);
            (dart, r)
        })
        .collect();
    (face_of, comp_of)
}

/// Remove `dead` nodes, splicing strands straight through them along the
/// virtual `ident` continuations (one per dead-dart pair). Strands that
/// close up entirely inside the dead set become free loops.
fn splice_out(t: &mut RegionTangle, dead: &[usize], ident: &[(Dart, Dart)]) {
    let mut virt: BTreeMap<Dart, Dart> = BTreeMap::new();
    for &(a, b) in ident {
        virt.insert(a, b);
        virt.insert(b, a);
    }
    let dead_darts: BTreeSet<Dart> = dead.iter().flat_map(|&n| t.darts_of(n)).collect();
    let alpha: BTreeMap<Dart, Dart> = dead_darts.iter().map(|&dd| (dd, t.pairs[&dd])).collect();
    let mut handled: BTreeSet<Dart> = BTreeSet::new();
    let mut new_arcs: Vec<(Dart, Dart)> = Vec::new();
    for &start in &dead_darts {
        if handled.contains(&start) || dead_darts.contains(&alpha[&start]) {
            continue;
        }
        let q = alpha[&start];
        let mut cur = start;
        loop {
            handled.insert(cur);
            let v = virt[&cur];
            handled.insert(v);
            let nxt = alpha[&v];
            if dead_darts.contains(&nxt) {
                cur = nxt;
            } else {
                new_arcs.push((q, nxt));
                break;
            }
        }
    }
    let mut loops = 0usize;
    for &start in &dead_darts {
        if handled.contains(&start) {
            continue;
        }
        let mut cur = start;
        loop {
            handled.insert(cur);
            let v = virt[&cur];
            handled.insert(v);
            cur = alpha[&v];
            if cur == start {
                break;
            }
        }
        loops += 1;
    }
    for &dd in &dead_darts {
        t.disconnect(dd);
    }
    for &(a, b) in &new_arcs {
        t.connect(a, b);
    }
    for &n in dead {
        t.remove_node(n);
    }
    t.free_loops += loops;
}

/// Leg side lookup on a specific edge.
fn leg_side(d: &Diagram, leg: LegRef, edge: usize) -> Result<u8, DiagramError> {
    match d.tangles[leg.region].nodes.get(leg.node).copied().flatten() {
        Some(Node::Leg { edge: e, side }) if e == edge => Ok(side),
        _ => Err(bad_site("matched pair references a missing leg")),
    }
}

/// Build a matched pair from two legs of one edge, sorting by side and
/// computing the unique legal kind.
fn make_pair(
    d: &Diagram,
    sheets: &[EdgeSheets],
    edge: usize,
    x: LegRef,
    y: LegRef,
) -> Result<MatchPair, DiagramError> {
    let (sx, sy) = (leg_side(d, x, edge)?, leg_side(d, y, edge)?);
    let kind = legal_kind(&sheets[edge], sx, sy)
        .ok_or_else(|| DiagramError::LegalityFailure(format!("sides {sx},{sy} on edge {edge}")))?;
    let legs = if sx < sy { [x, y] } else { [y, x] };
    Ok(MatchPair { legs, kind })
}

/// Transport component orientations from `old` onto the rewritten diagram:
/// a component inherits the orientation of the old component sharing a
/// surviving strand segment; free loops are matched per region in order.
fn transport_orientations(old: &Diagram, new_d: &mut Diagram) {
    let old_comps = components(old);
    let new_comps = components(new_d);
    let mut old_departs: BTreeSet<(usize, Dart)> = BTreeSet::new();
    let mut any_oriented = false;
    let mut old_free: BTreeMap<usize, Vec<Option<bool>>> = BTreeMap::new();
    for c in &old_comps {
        let flag = old.orientations.get(c.id).copied().flatten();
        if let Some(rid) = c.free_loop_region {
            old_free.entry(rid).or_default().push(flag);
            if flag.is_some() {
                any_oriented = true;
            }
            continue;
        }
        let Some(flag) = flag else { continue };
        any_oriented = true;
        for &(r, dart) in &c.route {
            let dep = if flag { dart } else { old.tangles[r].pairs[&dart] };
            old_departs.insert((r, dep));
        }
    }
    let mut orients: Vec<Option<bool>> = vec![None; new_comps.len()];
    if any_oriented {
        let mut free_used: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &new_comps {
            if let Some(rid) = c.free_loop_region {
                let i = free_used.entry(rid).or_insert(0);
                if let Some(flags) = old_free.get(&rid) {
                    if *i < flags.len() {
                        orients[c.id] = flags[*i];
                    }
                }
                *i += 1;
                continue;
            }
            for &(r, dart) in &c.route {
                let Some(&mate) = new_d.tangles[r].pairs.get(&dart) else { continue };
                let persists = old
                    .tangles
                    .get(r)
                    .map(|t| {
                        t.pairs.get(&dart) == Some(&mate)
                            && t.nodes.get(dart.node).copied().flatten()
                                == new_d.tangles[r].nodes.get(dart.node).copied().flatten()
                            && t.nodes.get(mate.node).copied().flatten()
                                == new_d.tangles[r].nodes.get(mate.node).copied().flatten()
                    })
                    .unwrap_or(false);
                if !persists {
                    continue;
                }
                if old_departs.contains(&(r, dart)) {
                    orients[c.id] = Some(true);
                    break;
                }
                if old_departs.contains(&(r, mate)) {
                    orients[c.id] = Some(false);
                    break;
                }
            }
        }
    }
    new_d.orientations = orients;
}

/// Apply one diagram move. Returns the rewritten diagram and the site of the
/// inverse move (applying it to the result undoes the rewrite up to
/// canonical relabeling).
pub fn apply_diagram_move(
    d: &Diagram,
    site: &DiagramMoveSite,
) -> Result<(Diagram, DiagramMoveSite), DiagramError> {
    if site.region >= d.tangles.len() {
        return Err(bad_site(format!("region {} out of range", site.region)));
    }
    let sheets = edge_sheets(&d.spine);
    let mut out = d.clone();
    let inverse = match (site.kind, site.positive) {
        (DiagramMoveKind::RIp, true) => apply_curl_pos(&mut out, site)?,
        (DiagramMoveKind::RIp, false) => apply_curl_neg(&mut out, site)?,
        (DiagramMoveKind::RII, true) => apply_bigon_pos(&mut out, site)?,
        (DiagramMoveKind::RII, false) => apply_bigon_neg(&mut out, site)?,
        (DiagramMoveKind::RIII, _) => apply_triangle(&mut out, site)?,
        (DiagramMoveKind::TIp | DiagramMoveKind::TIpp, true) => {
            apply_finger_pos(&mut out, site, &sheets)?
        }
        (DiagramMoveKind::TIp | DiagramMoveKind::TIpp, false) => {
            apply_finger_neg(&mut out, site, &sheets)?
        }
        (DiagramMoveKind::TIIp, _) => apply_crossing_slide(&mut out, site, &sheets)?,
        (DiagramMoveKind::TIVp, _) => apply_corner_slide(&mut out, site, &sheets)?,
        (DiagramMoveKind::TVp, true) => apply_tangency_pos(&mut out, site, &sheets)?,
        (DiagramMoveKind::TVp, false) => apply_tangency_neg(&mut out, site, &sheets)?,
    };
    transport_orientations(d, &mut out);
    Ok((out, inverse))
}

// --- R_I': curls -----------------------------------------------------------

fn curl_slots(variant: u8) -> (u8, u8, u8, u8) {
    // loop arc joins (i, i+1); the strand enters at i+3 and exits at i+2
    let i = variant & 3;
    (i, (i + 1) % 4, (i + 3) % 4, (i + 2) % 4)
}

fn apply_curl_pos(d: &mut Diagram, site: &DiagramMoveSite) -> Result<DiagramMoveSite, DiagramError> {
    if site.variant >= 8 {
        return Err(bad_site("curl variant out of range"));
    }
    let (li, lj, entry, exit) = curl_slots(site.variant);
    let over = site.variant >= 4;
    let t = &mut d.tangles[site.region];
    let c = match site.cells.as_slice() {
        [] => {
            if t.free_loops == 0 {
                return Err(bad_site("no free loop to curl"));
            }
            t.free_loops -= 1;
            let c = t.add_node(Node::Crossing { over_first: over });
            t.connect(Dart::new(c, entry), Dart::new(c, exit));
            t.connect(Dart::new(c, li), Dart::new(c, lj));
            c
        }
        &[node, slot] => {
            let a = Dart::new(node, slot as u8);
            let b = t
                .disconnect(a)
                .ok_or_else(|| bad_site("curl site dart has no strand segment"))?;
            let c = t.add_node(Node::Crossing { over_first: over });
            t.connect(a, Dart::new(c, entry));
            t.connect(Dart::new(c, li), Dart::new(c, lj));
            t.connect(Dart::new(c, exit), b);
            c
        }
        _ => return Err(bad_site("curl site expects [] or [node, slot]")),
    };
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::RIp,
        positive: false,
        variant: site.variant,
        region: site.region,
        cells: vec![c],
    })
}

/// The loop arc of a curl crossing: the smallest slot `i` with an arc to
/// slot `i+1`, if any.
pub(super) fn curl_loop_start(t: &RegionTangle, c: usize) -> Option<u8> {
    if !matches!(t.nodes.get(c).copied().flatten(), Some(Node::Crossing { .. })) {
        return None;
    }
    (0..4u8).find(|&i| t.pairs.get(&Dart::new(c, i)) == Some(&Dart::new(c, (i + 1) % 4)))
}

fn apply_curl_neg(d: &mut Diagram, site: &DiagramMoveSite) -> Result<DiagramMoveSite, DiagramError> {
    let &[c] = site.cells.as_slice() else {
        return Err(bad_site("curl removal expects [crossing]"));
    };
    let t = &mut d.tangles[site.region];
    let Some(Node::Crossing { over_first }) = t.nodes.get(c).copied().flatten() else {
        return Err(bad_site("curl removal site is not a crossing"));
    };
    let i = curl_loop_start(t, c).ok_or_else(|| bad_site("crossing has no curl loop"))?;
    let variant = i + if over_first { 4 } else { 0 };
    let (_, _, entry, exit) = curl_slots(variant);
    let a = t.pairs[&Dart::new(c, entry)];
    let free_loop = a == Dart::new(c, exit);
    splice_out(
        t,
        &[c],
        &[
            (Dart::new(c, 0), Dart::new(c, 2)),
            (Dart::new(c, 1), Dart::new(c, 3)),
        ],
    );
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::RIp,
        positive: true,
        variant,
        region: site.region,
        cells: if free_loop {
            Vec::new()
        } else {
            vec![a.node, a.slot as usize]
        },
    })
}

// --- R_II: bigons -----------------------------------------------------------

fn apply_bigon_pos(d: &mut Diagram, site: &DiagramMoveSite) -> Result<DiagramMoveSite, DiagramError> {
    let &[nu, su, nw, sw] = site.cells.as_slice() else {
        return Err(bad_site("bigon creation expects [node, slot, node, slot]"));
    };
    if site.variant >= 2 {
        return Err(bad_site("bigon variant out of range"));
    }
    let u = Dart::new(nu, su as u8);
    let w = Dart::new(nw, sw as u8);
    let t = &d.tangles[site.region];
    let (Some(&eu), Some(&ew)) = (t.pairs.get(&u), t.pairs.get(&w)) else {
        return Err(bad_site("bigon site darts have no strand segments"));
    };
    if u == w || u == ew || eu == w {
        return Err(bad_site("bigon site needs two distinct strand segments"));
    }
    let (face_of, comp_of) = region_faces(d, site.region);
    if comp_of[&u] == comp_of[&w] && face_of[&u] != face_of[&w] {
        return Err(bad_site("bigon site darts do not bound a common face"));
    }
    let over = site.variant == 0;
    let t = &mut d.tangles[site.region];
    t.disconnect(u);
    t.disconnect(w);
    let c1 = t.add_node(Node::Crossing { over_first: over });
    let c2 = t.add_node(Node::Crossing { over_first: over });
    // the first strand detours across the second: u -> c1 -> c2 -> eu along
    // the even slots, the second runs w -> c2 -> c1 -> ew along the odd ones
    t.connect(u, Dart::new(c1, 0));
    t.connect(Dart::new(c1, 2), Dart::new(c2, 0));
    t.connect(Dart::new(c2, 2), eu);
    t.connect(w, Dart::new(c2, 1));
    t.connect(Dart::new(c2, 3), Dart::new(c1, 1));
    t.connect(Dart::new(c1, 3), ew);
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::RII,
        positive: false,
        variant: site.variant,
        region: site.region,
        cells: vec![c1, c2],
    })
}

fn apply_bigon_neg(d: &mut Diagram, site: &DiagramMoveSite) -> Result<DiagramMoveSite, DiagramError> {
    let &[n1, n2] = site.cells.as_slice() else {
        return Err(bad_site("bigon removal expects [crossing, crossing]"));
    };
    let t = &d.tangles[site.region];
    if n1 == n2 {
        return Err(bad_site("bigon removal needs two distinct crossings"));
    }
    let (Some(Node::Crossing { over_first: o1 }), Some(Node::Crossing { over_first: o2 })) = (
        t.nodes.get(n1).copied().flatten(),
        t.nodes.get(n2).copied().flatten(),
    ) else {
        return Err(bad_site("bigon removal sites must be crossings"));
    };
    // find the bigon face: darts x at n1, y at n2 with sigma(alpha(x)) = y
    // and sigma(alpha(y)) = x
    let (face_of, _) = region_faces(d, site.region);
    let mut found: Option<Dart> = None;
    for s in 0..4u8 {
        let x = Dart::new(n1, s);
        let ax = t.pairs[&x];
        if ax.node != n2 {
            continue;
        }
        let y = Dart::new(n2, (ax.slot + 1) % 4);
        let ay = t.pairs[&y];
        if ay.node == n1 && (ay.slot + 1) % 4 == s && face_of[&x] == face_of[&y] {
            found = Some(x);
            break;
        }
    }
    let x = found.ok_or_else(|| bad_site("crossings do not bound a bigon face"))?;
    let ax = t.pairs[&x];
    // the same strand must be over at both ends of the bigon
    let first_over_1 = (x.slot % 2 == 0) == o1;
    let first_over_2 = (ax.slot % 2 == 0) == o2;
    if first_over_1 != first_over_2 {
        return Err(bad_site("bigon strands alternate over/under; not removable"));
    }
    // external darts reattached by the removal; reject the degenerate bigon
    // whose strands close onto themselves
    let ext_u = Dart::new(n1, (x.slot + 1) % 4);
    let ext_w = Dart::new(n1, (x.slot + 2) % 4);
    let (pu, pw) = (t.pairs[&ext_u], t.pairs[&ext_w]);
    if pu.node == n1 || pu.node == n2 || pw.node == n1 || pw.node == n2 {
        return Err(bad_site("degenerate bigon closes onto itself"));
    }
    let over_u = ((x.slot + 1) % 2 == 0) == o1;
    let t = &mut d.tangles[site.region];
    splice_out(
        t,
        &[n1, n2],
        &[
            (Dart::new(n1, 0), Dart::new(n1, 2)),
            (Dart::new(n1, 1), Dart::new(n1, 3)),
            (Dart::new(n2, 0), Dart::new(n2, 2)),
            (Dart::new(n2, 1), Dart::new(n2, 3)),
        ],
    );
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::RII,
        positive: true,
        variant: if over_u { 0 } else { 1 },
        region: site.region,
        cells: vec![pu.node, pu.slot as usize, pw.node, pw.slot as usize],
    })
}

// --- R_III: triangle slide ---------------------------------------------------

fn apply_triangle(d: &mut Diagram, site: &DiagramMoveSite) -> Result<DiagramMoveSite, DiagramError> {
    let &[n1, s1, n2, s2, n3, s3] = site.cells.as_slice() else {
        return Err(bad_site("triangle slide expects [n1,s1,n2,s2,n3,s3]"));
    };
    let u = [
        Dart::new(n1, s1 as u8),
        Dart::new(n2, s2 as u8),
        Dart::new(n3, s3 as u8),
    ];
    if n1 == n2 || n2 == n3 || n1 == n3 {
        return Err(bad_site("triangle slide needs three distinct crossings"));
    }
    let t = &d.tangles[site.region];
    let mut overs = [false; 3];
    for (i, dart) in u.iter().enumerate() {
        match t.nodes.get(dart.node).copied().flatten() {
            Some(Node::Crossing { over_first }) => overs[i] = over_first,
            _ => return Err(bad_site("triangle slide sites must be crossings")),
        }
    }
    // the three darts must form one triangular face (in either rotation
    // direction of the face traversal)
    let next_face = |dart: Dart| -> Dart {
        let a = t.pairs[&dart];
        Dart::new(a.node, (a.slot + 1) % 4)
    };
    let forward = next_face(u[0]) == u[1] && next_face(u[1]) == u[2] && next_face(u[2]) == u[0];
    let backward = next_face(u[0]) == u[2] && next_face(u[2]) == u[1] && next_face(u[1]) == u[0];
    if !forward && !backward {
        return Err(bad_site("darts do not bound a triangular face"));
    }
    // the over/under tournament of the three lines must be transitive
    let order = if forward { [0, 1, 2] } else { [0, 2, 1] };
    let mut beats = [false; 3];
    for i in 0..3 {
        let dart = u[order[i]];
        beats[i] = (dart.slot % 2 == 0) == overs[order[i]];
    }
    if beats[0] == beats[1] && beats[1] == beats[2] {
        return Err(bad_site("cyclic over/under pattern admits no triangle slide"));
    }
    // slide: every strand end on the triangle swaps with its opposite dart
    let mut swap: BTreeMap<Dart, Dart> = BTreeMap::new();
    for &dart in &u {
        let a = t.pairs[&dart];
        for x in [dart, a] {
            swap.insert(x, Dart::new(x.node, (x.slot + 2) % 4));
            swap.insert(Dart::new(x.node, (x.slot + 2) % 4), x);
        }
    }
    let old_pairs = t.pairs.clone();
    let t = &mut d.tangles[site.region];
    let mut new_pairs: BTreeMap<Dart, Dart> = BTreeMap::new();
    for (&a, &b) in &old_pairs {
        let na = swap.get(&a).copied().unwrap_or(a);
        let nb = swap.get(&b).copied().unwrap_or(b);
        new_pairs.insert(na, nb);
    }
    t.pairs = new_pairs;
    let cells = u
        .iter()
        .flat_map(|dart| [dart.node, ((dart.slot + 2) % 4) as usize])
        .collect();
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::RIII,
        positive: true,
        variant: 0,
        region: site.region,
        cells,
    })
}

// --- T_I'/T_I'': finger across an edge --------------------------------------

/// Boundary gap bookkeeping for inserting a matched pair: given a passage
/// and an insertion index into the edge matching, the circuit leg preceding
/// the insertion point (if the region has any legs).
fn gap_before(
    d: &Diagram,
    region: usize,
    k: usize,
    edge: usize,
    side: u8,
    pos: usize,
) -> Option<usize> {
    let b = boundary_legs(d, region);
    if b.is_empty() {
        return None;
    }
    let dir = d.spine.regions[region].boundary_word[k].dir;
    let side_pairs: Vec<usize> = d.matchings[edge]
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            p.legs.iter().any(|l| {
                l.region == region
                    && matches!(
                        d.tangles[region].nodes.get(l.node).copied().flatten(),
                        Some(Node::Leg { edge: e, side: s }) if e == edge && s == side
                    )
            })
        })
        .map(|(i, _)| i)
        .collect();
    let before = side_pairs.iter().filter(|&&i| i < pos).count();
    let ck = side_pairs.len();
    let j = if dir > 0 { before } else { ck - before };
    // circuit offset of this passage's legs
    let o = b
        .iter()
        .position(|&(_, pk)| pk == k)
        .unwrap_or_else(|| b.iter().position(|&(_, pk)| pk > k).unwrap_or(0));
    let l = b.len();
    Some((o + j + l - 1) % l)
}

fn apply_finger_pos(
    d: &mut Diagram,
    site: &DiagramMoveSite,
    sheets: &[EdgeSheets],
) -> Result<DiagramMoveSite, DiagramError> {
    let &[node, slot, k, pos] = site.cells.as_slice() else {
        return Err(bad_site("finger expects [node, slot, passage, pos]"));
    };
    let r = site.region;
    if k >= d.spine.regions[r].boundary_word.len() {
        return Err(bad_site("passage index out of range"));
    }
    let p = d.spine.regions[r].boundary_word[k];
    let (e, s) = (p.edge, p.side);
    let t_side = site.variant;
    let kind = legal_kind(&sheets[e], s, t_side)
        .ok_or_else(|| bad_site("no legal pair for the chosen sides"))?;
    let kind_ok = match site.kind {
        DiagramMoveKind::TIp => kind == PairKind::Transverse,
        DiagramMoveKind::TIpp => kind != PairKind::Transverse,
        _ => unreachable!(),
    };
    if !kind_ok {
        return Err(bad_site("finger flavor does not match the sheet pair"));
    }
    if pos > d.matchings[e].len() {
        return Err(bad_site("matching insertion index out of range"));
    }
    let free_loop = node == FREE_LOOP_CELL;
    if !free_loop {
        // planarity: the segment and the boundary gap must bound a common
        // face, unless the segment floats on its own component
        let dd = Dart::new(node, slot as u8);
        if !d.tangles[r].pairs.contains_key(&dd) {
            return Err(bad_site("finger base dart has no strand segment"));
        }
        if let Some(g) = gap_before(d, r, k, e, s, pos) {
            let b = boundary_legs(d, r);
            let (face_of, comp_of) = region_faces(d, r);
            let gap_dart = Dart::new(b[g].0, 1);
            if comp_of[&dd] == comp_of[&gap_dart] && face_of[&dd] != face_of[&gap_dart] {
                return Err(bad_site("finger base does not face the boundary gap"));
            }
        }
    } else if d.tangles[r].free_loops == 0 {
        return Err(bad_site("no free loop to push across the edge"));
    }
    let r2 = sheets[e].region(t_side);
    let dir = p.dir;
    // legs in the source region at matching slots pos, pos+1
    let t1 = &mut d.tangles[r];
    let l1 = t1.add_node(Node::Leg { edge: e, side: s });
    let l2 = t1.add_node(Node::Leg { edge: e, side: s });
    let (first, second) = if dir > 0 { (l1, l2) } else { (l2, l1) };
    if free_loop {
        t1.free_loops -= 1;
        t1.connect(Dart::new(l1, 0), Dart::new(l2, 0));
    } else {
        let dd = Dart::new(node, slot as u8);
        let ee = t1.disconnect(dd).expect("checked above");
        t1.connect(dd, Dart::new(first, 0));
        t1.connect(Dart::new(second, 0), ee);
    }
    let t2 = &mut d.tangles[r2];
    let m1 = t2.add_node(Node::Leg { edge: e, side: t_side });
    let m2 = t2.add_node(Node::Leg { edge: e, side: t_side });
    t2.connect(Dart::new(m1, 0), Dart::new(m2, 0));
    let pair1 = make_pair(d, sheets, e, LegRef { region: r, node: l1 }, LegRef { region: r2, node: m1 })?;
    let pair2 = make_pair(d, sheets, e, LegRef { region: r, node: l2 }, LegRef { region: r2, node: m2 })?;
    d.matchings[e].insert(pos, pair2);
    d.matchings[e].insert(pos, pair1);
    Ok(DiagramMoveSite {
        kind: site.kind,
        positive: false,
        variant: t_side,
        region: r,
        cells: vec![e, pos],
    })
}

fn apply_finger_neg(
    d: &mut Diagram,
    site: &DiagramMoveSite,
    sheets: &[EdgeSheets],
) -> Result<DiagramMoveSite, DiagramError> {
    let &[e, pos] = site.cells.as_slice() else {
        return Err(bad_site("finger removal expects [edge, pos]"));
    };
    let r = site.region;
    if e >= d.matchings.len() || pos + 1 >= d.matchings[e].len() {
        return Err(bad_site("matched pair index out of range"));
    }
    let (p1, p2) = (d.matchings[e][pos], d.matchings[e][pos + 1]);
    // the source side s is owned by region r; the tip side t carries a
    // direct arc between the two legs
    let sides1 = [leg_side(d, p1.legs[0], e)?, leg_side(d, p1.legs[1], e)?];
    let sides2 = [leg_side(d, p2.legs[0], e)?, leg_side(d, p2.legs[1], e)?];
    if sides1 != sides2 {
        return Err(bad_site("adjacent pairs cross different sheets"));
    }
    let s = (0..2)
        .find(|&i| p1.legs[i].region == r && sheets[e].region(sides1[i]) == r)
        .map(|i| sides1[i])
        .ok_or_else(|| bad_site("site region owns no sheet of the pair"))?;
    let t_side = if sides1[0] == s { sides1[1] } else { sides1[0] };
    let r2 = sheets[e].region(t_side);
    let leg_of = |pair: &MatchPair, side: u8| -> LegRef {
        if sides1[0] == side { pair.legs[0] } else { pair.legs[1] }
    };
    let (m1, m2) = (leg_of(&p1, t_side), leg_of(&p2, t_side));
    let (l1, l2) = (leg_of(&p1, s), leg_of(&p2, s));
    if d.tangles[r2].pairs.get(&Dart::new(m1.node, 0)) != Some(&Dart::new(m2.node, 0)) {
        return Err(bad_site("pair legs are not joined by a finger-tip arc"));
    }
    // where does the restored segment sit? record before splicing
    let a1 = d.tangles[r].pairs[&Dart::new(l1.node, 0)];
    let closes = a1 == Dart::new(l2.node, 0);
    let k = sheets[e].sides[s as usize].1;
    let dir = d.spine.regions[r].boundary_word[k].dir;
    let first = if dir > 0 { l1.node } else { l2.node };
    let base = d.tangles[r].pairs[&Dart::new(first, 0)];
    // remove the tip
    let t2 = &mut d.tangles[r2];
    t2.disconnect(Dart::new(m1.node, 0));
    t2.remove_node(m1.node);
    t2.remove_node(m2.node);
    // splice the base
    splice_out(
        &mut d.tangles[r],
        &[l1.node, l2.node],
        &[(Dart::new(l1.node, 0), Dart::new(l2.node, 0))],
    );
    d.matchings[e].remove(pos + 1);
    d.matchings[e].remove(pos);
    Ok(DiagramMoveSite {
        kind: site.kind,
        positive: true,
        variant: t_side,
        region: r,
        cells: if closes {
            vec![FREE_LOOP_CELL, 0, k, pos]
        } else {
            vec![base.node, base.slot as usize, k, pos]
        },
    })
}

// --- T_II': crossing slides through an edge ----------------------------------

fn apply_crossing_slide(
    d: &mut Diagram,
    site: &DiagramMoveSite,
    sheets: &[EdgeSheets],
) -> Result<DiagramMoveSite, DiagramError> {
    let &[c, x] = site.cells.as_slice() else {
        return Err(bad_site("crossing slide expects [crossing, slot]"));
    };
    let r = site.region;
    let x = (x % 4) as u8;
    let t = &d.tangles[r];
    let Some(Node::Crossing { over_first }) = t.nodes.get(c).copied().flatten() else {
        return Err(bad_site("crossing slide site is not a crossing"));
    };
    let la = t.pairs[&Dart::new(c, x)];
    let lb = t.pairs[&Dart::new(c, (x + 1) % 4)];
    let (Some(Node::Leg { edge: e, side: s }), Some(Node::Leg { edge: e2, side: s2 })) = (
        t.nodes.get(la.node).copied().flatten(),
        t.nodes.get(lb.node).copied().flatten(),
    ) else {
        return Err(bad_site("crossing slide darts must attach to legs"));
    };
    if la.slot != 0 || lb.slot != 0 || e != e2 || s != s2 {
        return Err(bad_site("crossing slide legs must share one sheet"));
    }
    let pair_index = |leg: LegRef| d.matchings[e].iter().position(|p| p.legs.contains(&leg));
    let ia = pair_index(LegRef { region: r, node: la.node })
        .ok_or_else(|| bad_site("leg is unmatched"))?;
    let ib = pair_index(LegRef { region: r, node: lb.node })
        .ok_or_else(|| bad_site("leg is unmatched"))?;
    if ia.abs_diff(ib) != 1 {
        return Err(bad_site("matched pairs are not adjacent along the edge"));
    }
    let other_leg = |i: usize, n: usize| -> LegRef {
        let p = d.matchings[e][i];
        if p.legs[0] == (LegRef { region: r, node: n }) {
            p.legs[1]
        } else {
            p.legs[0]
        }
    };
    let ma = other_leg(ia, la.node);
    let mb = other_leg(ib, lb.node);
    let ta = leg_side(d, ma, e)?;
    if leg_side(d, mb, e)? != ta {
        return Err(bad_site("far legs sit on different sheets"));
    }
    let r2 = sheets[e].region(ta);
    if r2 == r {
        return Err(bad_site("crossing slide across a self-adjacent sheet is unsupported"));
    }
    // strand A passes through slots {x, x+2}; it is the over strand iff the
    // parity of x matches the crossing flag
    let over_a = (x % 2 == 0) == over_first;
    // source region: remove the crossing and its two legs, leave two fresh
    // legs picking up the far strand ends
    let t1 = &mut d.tangles[r];
    let fa = t1.pairs[&Dart::new(c, (x + 2) % 4)];
    let fb = t1.pairs[&Dart::new(c, (x + 3) % 4)];
    t1.disconnect(Dart::new(c, 0));
    t1.disconnect(Dart::new(c, 1));
    t1.disconnect(Dart::new(c, 2));
    t1.disconnect(Dart::new(c, 3));
    t1.remove_node(c);
    t1.remove_node(la.node);
    t1.remove_node(lb.node);
    let nla = t1.add_node(Node::Leg { edge: e, side: s });
    let nlb = t1.add_node(Node::Leg { edge: e, side: s });
    if fa == Dart::new(c, (x + 3) % 4) {
        // the far ends were one arc (a curl hugging the edge)
        t1.connect(Dart::new(nla, 0), Dart::new(nlb, 0));
    } else {
        t1.connect(fa, Dart::new(nla, 0));
        t1.connect(fb, Dart::new(nlb, 0));
    }
    // far region: fresh crossing and legs
    let t2 = &mut d.tangles[r2];
    let wa = t2.pairs[&Dart::new(ma.node, 0)];
    let wb = t2.pairs[&Dart::new(mb.node, 0)];
    let tip = wa == Dart::new(mb.node, 0);
    t2.disconnect(Dart::new(ma.node, 0));
    if !tip {
        t2.disconnect(Dart::new(mb.node, 0));
    }
    t2.remove_node(ma.node);
    t2.remove_node(mb.node);
    let c2 = t2.add_node(Node::Crossing { over_first: over_a });
    let nma = t2.add_node(Node::Leg { edge: e, side: ta });
    let nmb = t2.add_node(Node::Leg { edge: e, side: ta });
    t2.connect(Dart::new(nma, 0), Dart::new(c2, 0));
    t2.connect(Dart::new(nmb, 0), Dart::new(c2, 1));
    if tip {
        t2.connect(Dart::new(c2, 2), Dart::new(c2, 3));
    } else {
        t2.connect(Dart::new(c2, 2), wa);
        t2.connect(Dart::new(c2, 3), wb);
    }
    // the strands swap their order along the edge
    let pair_a = make_pair(d, sheets, e, LegRef { region: r, node: nla }, LegRef { region: r2, node: nma })?;
    let pair_b = make_pair(d, sheets, e, LegRef { region: r, node: nlb }, LegRef { region: r2, node: nmb })?;
    d.matchings[e][ib] = pair_a;
    d.matchings[e][ia] = pair_b;
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::TIIp,
        positive: true,
        variant: 0,
        region: r2,
        cells: vec![c2, 0],
    })
}

// --- T_IV': pair slides around a vertex corner --------------------------------

/// The boundary passage of `region` covering sheet (`edge`, `side`), plus
/// the continuation passage around the corner at the given edge end
/// (0 = first germ, 1 = second germ). Returns (continuation passage index,
/// continuation side, continuation edge, continuation end).
fn corner_continuation(
    d: &Diagram,
    sheets: &[EdgeSheets],
    edge: usize,
    side: u8,
    end: usize,
) -> (usize, u8, usize, usize) {
    let (rid, k, _) = sheets[edge].sides[side as usize];
    let word = &d.spine.regions[rid].boundary_word;
    let p = word[k];
    // the passage traverses the edge first germ -> second germ when dir > 0
    let corner_at_start = (end == 0) == (p.dir > 0);
    let len = word.len();
    let qk = if corner_at_start { (k + len - 1) % len } else { (k + 1) % len };
    let q = word[qk];
    // the corner sits at the start of q when q follows p, at its end when
    // q precedes p
    let corner_at_q_start = !corner_at_start;
    let q_end = if corner_at_q_start == (q.dir > 0) { 0 } else { 1 };
    (qk, q.side, q.edge, q_end)
}

fn apply_corner_slide(
    d: &mut Diagram,
    site: &DiagramMoveSite,
    sheets: &[EdgeSheets],
) -> Result<DiagramMoveSite, DiagramError> {
    let &[e, idx, end] = site.cells.as_slice() else {
        return Err(bad_site("corner slide expects [edge, pair, end]"));
    };
    if e >= d.matchings.len() || idx >= d.matchings[e].len() || end > 1 {
        return Err(bad_site("corner slide indices out of range"));
    }
    let extremal = if end == 0 { 0 } else { d.matchings[e].len() - 1 };
    if idx != extremal {
        return Err(bad_site("pair is not extremal at the chosen edge end"));
    }
    let pair = d.matchings[e][idx];
    let s0 = leg_side(d, pair.legs[0], e)?;
    let s1 = leg_side(d, pair.legs[1], e)?;
    let (_, t0, e0, end0) = corner_continuation(d, sheets, e, s0, end);
    let (_, t1, e1, end1) = corner_continuation(d, sheets, e, s1, end);
    if e0 != e1 || end0 != end1 {
        return Err(bad_site("the two sheets do not share a corner continuation"));
    }
    if t0 == t1 {
        return Err(bad_site("corner continuation lands on a single sheet"));
    }
    let kind = legal_kind(&sheets[e0], t0, t1)
        .ok_or_else(|| bad_site("corner continuation yields no legal pair"))?;
    // relabel the legs in place; arcs and circuit order are untouched
    for (leg, t_new) in [(pair.legs[0], t0), (pair.legs[1], t1)] {
        d.tangles[leg.region].nodes[leg.node] = Some(Node::Leg { edge: e0, side: t_new });
    }
    d.matchings[e].remove(idx);
    let legs = if t0 < t1 {
        [pair.legs[0], pair.legs[1]]
    } else {
        [pair.legs[1], pair.legs[0]]
    };
    let new_idx = if end0 == 0 { 0 } else { d.matchings[e0].len() };
    d.matchings[e0].insert(new_idx, MatchPair { legs, kind });
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::TIVp,
        positive: true,
        variant: 0,
        region: legs[0].region,
        cells: vec![e0, new_idx, end0],
    })
}

// --- T_V': tangency switch ----------------------------------------------------

fn apply_tangency_pos(
    d: &mut Diagram,
    site: &DiagramMoveSite,
    sheets: &[EdgeSheets],
) -> Result<DiagramMoveSite, DiagramError> {
    let &[e, idx] = site.cells.as_slice() else {
        return Err(bad_site("tangency switch expects [edge, pair]"));
    };
    if e >= d.matchings.len() || idx >= d.matchings[e].len() || site.variant >= 2 {
        return Err(bad_site("tangency switch indices out of range"));
    }
    let pair = d.matchings[e][idx];
    let want = if site.variant == 0 { PairKind::TangentialL } else { PairKind::TangentialR };
    if pair.kind != want {
        return Err(bad_site("pair kind does not match the tangency variant"));
    }
    let sh = &sheets[e];
    // the detour runs through the other smooth sheet
    let detour = if site.variant == 0 { sh.smooth[1] } else { sh.smooth[0] };
    let lone = sh.lone;
    let side_of = |leg: LegRef| leg_side(d, leg, e);
    let (a, b) = if side_of(pair.legs[0])? == lone {
        (pair.legs[0], pair.legs[1])
    } else {
        (pair.legs[1], pair.legs[0])
    };
    let r2 = sh.region(detour);
    let t2 = &mut d.tangles[r2];
    let cnode = t2.add_node(Node::Leg { edge: e, side: detour });
    let dnode = t2.add_node(Node::Leg { edge: e, side: detour });
    t2.connect(Dart::new(cnode, 0), Dart::new(dnode, 0));
    let c_ref = LegRef { region: r2, node: cnode };
    let d_ref = LegRef { region: r2, node: dnode };
    let pair1 = make_pair(d, sheets, e, a, c_ref)?;
    let pair2 = make_pair(d, sheets, e, d_ref, b)?;
    d.matchings[e][idx] = pair1;
    d.matchings[e].insert(idx + 1, pair2);
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::TVp,
        positive: false,
        variant: site.variant,
        region: site.region,
        cells: vec![e, idx],
    })
}

fn apply_tangency_neg(
    d: &mut Diagram,
    site: &DiagramMoveSite,
    sheets: &[EdgeSheets],
) -> Result<DiagramMoveSite, DiagramError> {
    let &[e, idx] = site.cells.as_slice() else {
        return Err(bad_site("tangency merge expects [edge, pair]"));
    };
    if e >= d.matchings.len() || idx + 1 >= d.matchings[e].len() || site.variant >= 2 {
        return Err(bad_site("tangency merge indices out of range"));
    }
    let (p1, p2) = (d.matchings[e][idx], d.matchings[e][idx + 1]);
    let sh = &sheets[e];
    let detour = if site.variant == 0 { sh.smooth[1] } else { sh.smooth[0] };
    let want1 = if site.variant == 0 { PairKind::TangentialR } else { PairKind::TangentialL };
    if p1.kind != want1 || p2.kind != PairKind::Transverse {
        return Err(bad_site("adjacent pairs do not form a tangency detour"));
    }
    let side_of = |leg: LegRef| leg_side(d, leg, e);
    let (a, c) = if side_of(p1.legs[0])? == sh.lone {
        (p1.legs[0], p1.legs[1])
    } else {
        (p1.legs[1], p1.legs[0])
    };
    let (dn, b) = if side_of(p2.legs[0])? == detour {
        (p2.legs[0], p2.legs[1])
    } else {
        (p2.legs[1], p2.legs[0])
    };
    if side_of(c)? != detour || side_of(dn)? != detour || c.region != dn.region {
        return Err(bad_site("detour legs are not on the detour sheet"));
    }
    let r2 = c.region;
    if d.tangles[r2].pairs.get(&Dart::new(c.node, 0)) != Some(&Dart::new(dn.node, 0)) {
        return Err(bad_site("detour legs are not joined by a short arc"));
    }
    let t2 = &mut d.tangles[r2];
    t2.disconnect(Dart::new(c.node, 0));
    t2.remove_node(c.node);
    t2.remove_node(dn.node);
    let restored = make_pair(d, sheets, e, a, b)?;
    let expect = if site.variant == 0 { PairKind::TangentialL } else { PairKind::TangentialR };
    debug_assert_eq!(restored.kind, expect);
    d.matchings[e].remove(idx + 1);
    d.matchings[e][idx] = restored;
    Ok(DiagramMoveSite {
        kind: DiagramMoveKind::TVp,
        positive: true,
        variant: site.variant,
        region: site.region,
        cells: vec![e, idx],
    })
}

// --- site enumeration ---------------------------------------------------------

/// All application sites of one move kind on a diagram, both directions,
/// in deterministic order.
pub fn find_diagram_sites(d: &Diagram, kind: DiagramMoveKind) -> Vec<DiagramMoveSite> {
    let sheets = edge_sheets(&d.spine);
    let mut out = Vec::new();
    match kind {
        DiagramMoveKind::RIp => {
            for (rid, t) in d.tangles.iter().enumerate() {
                for variant in 0..8u8 {
                    if t.free_loops > 0 {
                        out.push(DiagramMoveSite {
                            kind,
                            positive: true,
                            variant,
                            region: rid,
                            cells: Vec::new(),
                        });
                    }
                    for &dart in t.pairs.keys() {
                        out.push(DiagramMoveSite {
                            kind,
                            positive: true,
                            variant,
                            region: rid,
                            cells: vec![dart.node, dart.slot as usize],
                        });
                    }
                }
                for (id, node) in t.live_nodes() {
                    if matches!(node, Node::Crossing { .. }) && curl_loop_start(t, id).is_some() {
                        out.push(DiagramMoveSite {
                            kind,
                            positive: false,
                            variant: 0,
                            region: rid,
                            cells: vec![id],
                        });
                    }
                }
            }
        }
        DiagramMoveKind::RII => {
            for (rid, t) in d.tangles.iter().enumerate() {
                if t.pairs.is_empty() {
                    continue;
                }
                let (face_of, comp_of) = region_faces(d, rid);
                let darts: Vec<Dart> = t.pairs.keys().copied().collect();
                for &u in &darts {
                    for &w in &darts {
                        let eu = t.pairs[&u];
                        let ew = t.pairs[&w];
                        if u == w || u == ew || eu == w {
                            continue;
                        }
                        let ok = if comp_of[&u] == comp_of[&w] {
                            face_of[&u] == face_of[&w]
                        } else {
                            true
                        };
                        if !ok {
                            continue;
                        }
                        for variant in 0..2u8 {
                            out.push(DiagramMoveSite {
                                kind,
                                positive: true,
                                variant,
                                region: rid,
                                cells: vec![u.node, u.slot as usize, w.node, w.slot as usize],
                            });
                        }
                    }
                }
                // removable bigons
                let crossings: Vec<usize> = t
                    .live_nodes()
                    .filter(|(_, n)| matches!(n, Node::Crossing { .. }))
                    .map(|(i, _)| i)
                    .collect();
                for &n1 in &crossings {
                    for &n2 in &crossings {
                        if n1 == n2 {
                            continue;
                        }
                        let probe = DiagramMoveSite {
                            kind,
                            positive: false,
                            variant: 0,
                            region: rid,
                            cells: vec![n1, n2],
                        };
                        let mut scratch = d.clone();
                        if apply_bigon_neg(&mut scratch, &probe).is_ok() {
                            out.push(probe);
                        }
                    }
                }
            }
        }
        DiagramMoveKind::RIII => {
            for (rid, t) in d.tangles.iter().enumerate() {
                let next_face = |dart: Dart| -> Dart {
                    let a = t.pairs[&dart];
                    Dart::new(a.node, (a.slot + 1) % 4)
                };
                let crossing_darts: Vec<Dart> = t
                    .live_nodes()
                    .filter(|(_, n)| matches!(n, Node::Crossing { .. }))
                    .flat_map(|(i, _)| (0..4).map(move |s| Dart::new(i, s)))
                    .collect();
                let all_crossing = |dart: Dart| {
                    matches!(
                        t.nodes.get(dart.node).copied().flatten(),
                        Some(Node::Crossing { .. })
                    )
                };
                for &u1 in &crossing_darts {
                    if !t.pairs.contains_key(&u1) {
                        continue;
                    }
                    let u2 = next_face(u1);
                    if !all_crossing(u2) || !t.pairs.contains_key(&u2) {
                        continue;
                    }
                    let u3 = next_face(u2);
                    if !all_crossing(u3) || !t.pairs.contains_key(&u3) || next_face(u3) != u1 {
                        continue;
                    }
                    if u1 != *[u1, u2, u3].iter().min().unwrap() {
                        continue;
                    }
                    let probe = DiagramMoveSite {
                        kind,
                        positive: true,
                        variant: 0,
                        region: rid,
                        cells: vec![
                            u1.node,
                            u1.slot as usize,
                            u2.node,
                            u2.slot as usize,
                            u3.node,
                            u3.slot as usize,
                        ],
                    };
                    let mut scratch = d.clone();
                    if apply_triangle(&mut scratch, &probe).is_ok() {
                        out.push(probe);
                    }
                }
            }
        }
        DiagramMoveKind::TIp | DiagramMoveKind::TIpp => {
            for (rid, region) in d.spine.regions.iter().enumerate() {
                for (k, p) in region.boundary_word.iter().enumerate() {
                    for t_side in 0..3u8 {
                        let Some(pk) = legal_kind(&sheets[p.edge], p.side, t_side) else {
                            continue;
                        };
                        let flavor_ok = match kind {
                            DiagramMoveKind::TIp => pk == PairKind::Transverse,
                            _ => pk != PairKind::Transverse,
                        };
                        if !flavor_ok {
                            continue;
                        }
                        for pos in 0..=d.matchings[p.edge].len() {
                            let mut bases: Vec<Vec<usize>> = Vec::new();
                            if d.tangles[rid].free_loops > 0 {
                                bases.push(vec![FREE_LOOP_CELL, 0, k, pos]);
                            }
                            for &dart in d.tangles[rid].pairs.keys() {
                                bases.push(vec![dart.node, dart.slot as usize, k, pos]);
                            }
                            for cells in bases {
                                let probe = DiagramMoveSite {
                                    kind,
                                    positive: true,
                                    variant: t_side,
                                    region: rid,
                                    cells,
                                };
                                let mut scratch = d.clone();
                                if apply_finger_pos(&mut scratch, &probe, &sheets).is_ok() {
                                    out.push(probe);
                                }
                            }
                        }
                    }
                }
            }
            // removable fingers
            for (e, pairs) in d.matchings.iter().enumerate() {
                for pos in 0..pairs.len().saturating_sub(1) {
                    for rid in 0..d.tangles.len() {
                        let probe = DiagramMoveSite {
                            kind,
                            positive: false,
                            variant: 0,
                            region: rid,
                            cells: vec![e, pos],
                        };
                        let mut scratch = d.clone();
                        if apply_finger_neg(&mut scratch, &probe, &sheets).is_ok() {
                            let pk = pairs[pos].kind;
                            let flavor_ok = match kind {
                                DiagramMoveKind::TIp => pk == PairKind::Transverse,
                                _ => pk != PairKind::Transverse,
                            };
                            if flavor_ok {
                                out.push(probe);
                            }
                        }
                    }
                }
            }
        }
        DiagramMoveKind::TIIp => {
            for (rid, t) in d.tangles.iter().enumerate() {
                for (id, node) in t.live_nodes() {
                    if !matches!(node, Node::Crossing { .. }) {
                        continue;
                    }
                    for x in 0..4usize {
                        let probe = DiagramMoveSite {
                            kind,
                            positive: true,
                            variant: 0,
                            region: rid,
                            cells: vec![id, x],
                        };
                        let mut scratch = d.clone();
                        if apply_crossing_slide(&mut scratch, &probe, &sheets).is_ok() {
                            out.push(probe);
                        }
                    }
                }
            }
        }
        DiagramMoveKind::TIVp => {
            for (e, pairs) in d.matchings.iter().enumerate() {
                if pairs.is_empty() {
                    continue;
                }
                for end in 0..2usize {
                    let idx = if end == 0 { 0 } else { pairs.len() - 1 };
                    let probe = DiagramMoveSite {
                        kind,
                        positive: true,
                        variant: 0,
                        region: pairs[idx].legs[0].region,
                        cells: vec![e, idx, end],
                    };
                    let mut scratch = d.clone();
                    if apply_corner_slide(&mut scratch, &probe, &sheets).is_ok() {
                        out.push(probe);
                    }
                }
            }
        }
        DiagramMoveKind::TVp => {
            for (e, pairs) in d.matchings.iter().enumerate() {
                for (idx, pair) in pairs.iter().enumerate() {
                    match pair.kind {
                        PairKind::TangentialL => out.push(DiagramMoveSite {
                            kind,
                            positive: true,
                            variant: 0,
                            region: pair.legs[0].region,
                            cells: vec![e, idx],
                        }),
                        PairKind::TangentialR => out.push(DiagramMoveSite {
                            kind,
                            positive: true,
                            variant: 1,
                            region: pair.legs[0].region,
                            cells: vec![e, idx],
                        }),
                        PairKind::Transverse => {}
                    }
                }
                for idx in 0..pairs.len().saturating_sub(1) {
                    for variant in 0..2u8 {
                        let probe = DiagramMoveSite {
                            kind,
                            positive: false,
                            variant,
                            region: pairs[idx].legs[0].region,
                            cells: vec![e, idx],
                        };
                        let mut scratch = d.clone();
                        if apply_tangency_neg(&mut scratch, &probe, &sheets).is_ok() {
                            out.push(probe);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::tangle::{empty_diagram, validate_diagram};
    use crate::diagrams::trace::homology_classes;
    use crate::moves::one_vertex_branched_spines;

    fn assert_valid(d: &Diagram, ctx: &str) {
        let diag = validate_diagram(d);
        assert!(diag.is_valid(), "{ctx}: {:?}", diag.failures);
    }

    #[test]
    fn curl_on_a_free_loop_round_trips_exactly() {
        let bs = one_vertex_branched_spines().remove(0);
        let mut d0 = empty_diagram(&bs);
        d0.tangles[0].free_loops = 1;
        for variant in 0..8u8 {
            let site = DiagramMoveSite {
                kind: DiagramMoveKind::RIp,
                positive: true,
                variant,
                region: 0,
                cells: Vec::new(),
            };
            let (d1, inv) = apply_diagram_move(&d0, &site).unwrap();
            assert_valid(&d1, "curled loop");
            assert_eq!(components(&d1).len(), 1);
            let (d2, inv2) = apply_diagram_move(&d1, &inv).unwrap();
            assert_valid(&d2, "uncurled loop");
            assert_eq!(d2.tangles, d0.tangles);
            assert_eq!(d2.matchings, d0.matchings);
            assert_eq!(inv2.cells, site.cells);
        }
    }

    #[test]
    fn curl_on_a_segment_round_trips_exactly() {
        let bs = one_vertex_branched_spines().remove(0);
        let mut d0 = empty_diagram(&bs);
        d0.tangles[0].free_loops = 1;
        let first = DiagramMoveSite {
            kind: DiagramMoveKind::RIp,
            positive: true,
            variant: 1,
            region: 0,
            cells: Vec::new(),
        };
        let (base, _) = apply_diagram_move(&d0, &first).unwrap();
        let darts: Vec<Dart> = base.tangles[0].pairs.keys().copied().collect();
        for dart in darts {
            for variant in 0..8u8 {
                let site = DiagramMoveSite {
                    kind: DiagramMoveKind::RIp,
                    positive: true,
                    variant,
                    region: 0,
                    cells: vec![dart.node, dart.slot as usize],
                };
                let (d1, inv) = apply_diagram_move(&base, &site).unwrap();
                assert_valid(&d1, "double-curled loop");
                assert_eq!(components(&d1).len(), 1);
                let (d2, _) = apply_diagram_move(&d1, &inv).unwrap();
                assert_eq!(d2.tangles, base.tangles, "variant {variant} dart {dart:?}");
            }
        }
    }

    #[test]
    fn probe_bigon_wirings() {
        let bs = one_vertex_branched_spines().remove(0);
        let mut d0 = empty_diagram(&bs);
        d0.tangles[0].free_loops = 1;
        let (base, _) = apply_diagram_move(
            &d0,
            &DiagramMoveSite {
                kind: DiagramMoveKind::RIp,
                positive: true,
                variant: 1,
                region: 0,
                cells: Vec::new(),
            },
        )
        .unwrap();
        let (face_of, _) = region_faces(&base, 0);
        let darts: Vec<Dart> = base.tangles[0].pairs.keys().copied().collect();
        let mut sites: Vec<(Dart, Dart)> = Vec::new();
        for &u in &darts {
            for &w in &darts {
                let eu = base.tangles[0].pairs[&u];
                let ew = base.tangles[0].pairs[&w];
                if u == w || u == ew || eu == w {
                    continue;
                }
                if face_of[&u] == face_of[&w] {
                    sites.push((u, w));
                }
            }
        }
        assert!(!sites.is_empty());
        for a in [0u8, 2] {
            for b in [0u8, 2] {
                for p in [1u8, 3] {
                    for q in [1u8, 3] {
                        for w_first in [true, false] {
                            let mut all_ok = true;
                            for &(u, w) in &sites {
                                let mut d = base.clone();
                                let t = &mut d.tangles[0];
                                let eu = t.disconnect(u).unwrap();
                                let ew = t.disconnect(w).unwrap();
                                let c1 = t.add_node(Node::Crossing { over_first: true });
                                let c2 = t.add_node(Node::Crossing { over_first: true });
                                t.connect(u, Dart::new(c1, a));
                                t.connect(Dart::new(c1, (a + 2) % 4), Dart::new(c2, b));
                                t.connect(Dart::new(c2, (b + 2) % 4), eu);
                                let (wc1, wc2) = if w_first { (c1, c2) } else { (c2, c1) };
                                t.connect(w, Dart::new(wc1, p));
                                t.connect(Dart::new(wc1, (p + 2) % 4), Dart::new(wc2, q));
                                t.connect(Dart::new(wc2, (q + 2) % 4), ew);
                                if !validate_diagram(&d).is_valid() {
                                    all_ok = false;
                                    break;
                                }
                                let neg = DiagramMoveSite {
                                    kind: DiagramMoveKind::RII,
                                    positive: false,
                                    variant: 0,
                                    region: 0,
                                    cells: vec![c1, c2],
                                };
                                let mut undone = d.clone();
                                match apply_bigon_neg(&mut undone, &neg) {
                                    Ok(_) if undone.tangles == base.tangles => {}
                                    _ => {
                                        all_ok = false;
                                        break;
                                    }
                                }
                            }
                            if all_ok {
                                println!("WIRING OK a={a} b={b} p={p} q={q} w_first={w_first}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bigon_round_trips_exactly_on_a_kinked_loop() {
        let bs = one_vertex_branched_spines().remove(0);
        let mut d0 = empty_diagram(&bs);
        d0.tangles[0].free_loops = 1;
        let (base, _) = apply_diagram_move(
            &d0,
            &DiagramMoveSite {
                kind: DiagramMoveKind::RIp,
                positive: true,
                variant: 1,
                region: 0,
                cells: Vec::new(),
            },
        )
        .unwrap();
        let sites = find_diagram_sites(&base, DiagramMoveKind::RII);
        let pos: Vec<_> = sites.iter().filter(|s| s.positive).collect();
        assert!(!pos.is_empty(), "a kinked loop admits bigon insertions");
        for site in pos {
            let (d1, inv) = apply_diagram_move(&base, site).unwrap();
            assert_valid(&d1, "bigon inserted");
            assert_eq!(components(&d1).len(), 1);
            assert_eq!(homology_classes(&d1), homology_classes(&base));
            let (d2, _) = apply_diagram_move(&d1, &inv).unwrap();
            assert_eq!(d2.tangles, base.tangles, "site {site:?}");
        }
    }

    #[test]
    fn finger_from_a_free_loop_round_trips_exactly() {
        for bs in one_vertex_branched_spines() {
            let mut d0 = empty_diagram(&bs);
            d0.tangles[0].free_loops = 1;
            for kind in [DiagramMoveKind::TIp, DiagramMoveKind::TIpp] {
                let sites = find_diagram_sites(&d0, kind);
                assert!(!sites.is_empty(), "free loop admits {kind} fingers");
                for site in sites.iter().filter(|s| s.positive) {
                    let (d1, inv) = apply_diagram_move(&d0, site).unwrap();
                    assert_valid(&d1, "finger applied");
                    assert_eq!(components(&d1).len(), 1);
                    let classes = homology_classes(&d1);
                    assert_eq!(classes, homology_classes(&d0), "classes preserved");
                    let (d2, _) = apply_diagram_move(&d1, &inv).unwrap();
                    assert_eq!(d2.tangles, d0.tangles);
                    assert_eq!(d2.matchings, d0.matchings);
                }
            }
        }
    }

    #[test]
    fn scripts_classify_as_pseudo_legendrian_without_curls() {
        let curl = format_diagram_site(&DiagramMoveSite {
            kind: DiagramMoveKind::RIp,
            positive: true,
            variant: 3,
            region: 2,
            cells: vec![5, 1],
        });
        let finger = format_diagram_site(&DiagramMoveSite {
            kind: DiagramMoveKind::TIpp,
            positive: false,
            variant: 1,
            region: 0,
            cells: vec![4, 0],
        });
        assert!(is_pseudo_legendrian_script(&[finger.clone(), "MP_POS/0 @ 1 choice=0".to_string()]));
        assert!(!is_pseudo_legendrian_script(&[finger, curl]));
    }

    #[test]
    fn sites_survive_a_format_parse_round_trip() {
        let site = DiagramMoveSite {
            kind: DiagramMoveKind::TIVp,
            positive: true,
            variant: 0,
            region: 7,
            cells: vec![3, 0, 1],
        };
        let line = format_diagram_site(&site);
        assert_eq!(parse_diagram_site(&line).unwrap(), site);
        let empty = DiagramMoveSite {
            kind: DiagramMoveKind::RIp,
            positive: true,
            variant: 2,
            region: 0,
            cells: vec![],
        };
        assert_eq!(parse_diagram_site(&format_diagram_site(&empty)).unwrap(), empty);
    }
}
