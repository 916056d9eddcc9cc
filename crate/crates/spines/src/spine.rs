//! The vertex-gadget encoding of an oriented standard polyhedron.
//!
//! A spine with `n` true vertices is described by `2n` edge records. Each
//! record glues two edge-germs `(vertex, slot)` together and carries a wing
//! bijection matching the three wings around one germ to the three wings
//! around the other. A wing at germ `(v, i)` is an unordered slot pair
//! `{i, j}` with `j != i`; each vertex has six wings.
//!
//! The wing bijection of a record extends to a permutation of the four slot
//! symbols (slot `i` of the first germ maps to slot `k` of the second). The
//! orientability convention fixed here: with both endpoint vertex
//! orientations positive, that extended permutation must be odd; each
//! negative endpoint orientation flips the required parity.

use crate::perm::Perm4;
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// An edge-germ: one of the four slots of a vertex gadget.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Germ {
    pub vertex: VertexId,
    pub slot: u8,
}

impl Germ {
    pub fn new(vertex: VertexId, slot: u8) -> Germ {
        Germ { vertex, slot }
    }
}

/// One edge record: a gluing of germ `a` to germ `b`.
///
/// `perm` is the extended permutation of slot symbols, mapping slots at
/// `a.vertex` to slots at `b.vertex`; it satisfies `perm[a.slot] == b.slot`,
/// and its restriction to the other three slots is the wing bijection.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EdgeRec {
    pub a: Germ,
    pub b: Germ,
    pub perm: Perm4,
}

impl EdgeRec {
    pub fn new(a: Germ, b: Germ, perm: Perm4) -> EdgeRec {
        debug_assert_eq!(perm.apply(a.slot), b.slot);
        EdgeRec { a, b, perm }
    }

    /// The germ at the far end from `g`, which must be one of the two ends.
    pub fn other_end(&self, g: Germ) -> Germ {
        if g == self.a {
            self.b
        } else {
            debug_assert_eq!(g, self.b);
            self.a
        }
    }

    /// The extended permutation oriented away from `g`.
    pub fn perm_from(&self, g: Germ) -> Perm4 {
        if g == self.a {
            self.perm
        } else {
            debug_assert_eq!(g, self.b);
            self.perm.inverse()
        }
    }
}

/// A spine: `n` vertex gadgets, `2n` edge records, one orientation sign per
/// vertex. Regions are derived by orbit tracing (see [`crate::region`]).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spine {
    pub vertex_count: usize,
    pub edges: Vec<EdgeRec>,
    pub vertex_orientations: Vec<i8>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SpineError {
    #[error("germ ({0}, {1}) is {2}")]
    MalformedGluing(VertexId, u8, &'static str),
    #[error("edge {0} has an inconsistent wing bijection")]
    MalformedWingMap(EdgeId),
    #[error("spine size {0} exceeds the configured limit {1}")]
    SizeLimit(usize, usize),
}

/// Structured validation diagnostics; a spine is valid iff all four checks
/// pass. `validate_spine` never aborts on bad input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineDiagnostics {
    pub matching_ok: bool,
    pub connectivity_ok: bool,
    pub orientability_ok: bool,
    pub standardness_ok: bool,
    pub failures: Vec<String>,
}

impl SpineDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.matching_ok && self.connectivity_ok && self.orientability_ok && self.standardness_ok
    }
}

impl Spine {
    pub fn new(vertex_count: usize, edges: Vec<EdgeRec>) -> Spine {
        Spine {
            vertex_count,
            edges,
            vertex_orientations: vec![1; vertex_count],
        }
    }

    /// Map each germ to (edge index, end). Errors if some germ is unpaired
    /// or doubly paired, or a record pairs a germ with itself.
    pub fn germ_map(&self) -> Result<Vec<[Option<(EdgeId, bool)>; 4]>, SpineError> {
        let mut map: Vec<[Option<(EdgeId, bool)>; 4]> = vec![[None; 4]; self.vertex_count];
        for (ei, e) in self.edges.iter().enumerate() {
            for (germ, is_b) in [(e.a, false), (e.b, true)] {
                if germ.vertex >= self.vertex_count || germ.slot > 3 {
                    return Err(SpineError::MalformedGluing(
                        germ.vertex,
                        germ.slot,
                        "out of range",
                    ));
                }
                let cell = &mut map[germ.vertex][germ.slot as usize];
                if cell.is_some() {
                    return Err(SpineError::MalformedGluing(
                        germ.vertex,
                        germ.slot,
                        "doubly paired",
                    ));
                }
                *cell = Some((ei, is_b));
            }
        }
        for v in 0..self.vertex_count {
            for s in 0..4 {
                if map[v][s].is_none() {
                    return Err(SpineError::MalformedGluing(v, s as u8, "unpaired"));
                }
            }
        }
        Ok(map)
    }

    /// The edge record and its orientation seen from germ `g`, assuming a
    /// prebuilt germ map.
    pub fn gluing_at<'a>(
        &'a self,
        map: &[[Option<(EdgeId, bool)>; 4]],
        g: Germ,
    ) -> (EdgeId, &'a EdgeRec) {
        let (ei, _) = map[g.vertex][g.slot as usize].expect("germ map complete");
        (ei, &self.edges[ei])
    }

    fn connectivity_ok(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (x, y) in [(e.a.vertex, e.b.vertex), (e.b.vertex, e.a.vertex)] {
                    if x == v && y < self.vertex_count && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn orientability_ok(&self) -> bool {
        self.edges.iter().all(|e| {
            if e.a.vertex >= self.vertex_count || e.b.vertex >= self.vertex_count {
                return false;
            }
            let sa = self.vertex_orientations[e.a.vertex];
            let sb = self.vertex_orientations[e.b.vertex];
            // Odd parity required with both signs positive; each negative
            // endpoint flips the requirement.
            let want_odd = (sa * sb) > 0;
            e.perm.apply(e.a.slot) == e.b.slot && (e.perm.is_odd() == want_odd)
        })
    }

    /// Full validation: perfect matching, connectivity, orientability
    /// parity, and disk regions.
    pub fn validate(&self) -> SpineDiagnostics {
        let mut d = SpineDiagnostics {
            matching_ok: true,
            connectivity_ok: true,
            orientability_ok: true,
            standardness_ok: true,
            failures: Vec::new(),
        };
        if self.vertex_count == 0 {
            d.matching_ok = false;
            d.failures.push("spine has no vertices".to_string());
            return d;
        }
        if self.edges.len() != 2 * self.vertex_count {
            d.matching_ok = false;
            d.failures.push(format!(
                "edge count {} != 2 * vertex count {}",
                self.edges.len(),
                self.vertex_count
            ));
        }
        if self.vertex_orientations.len() != self.vertex_count
            || self.vertex_orientations.iter().any(|&s| s != 1 && s != -1)
        {
            d.matching_ok = false;
            d.failures
                .push("vertex orientations must be one sign per vertex".to_string());
        }
        match self.germ_map() {
            Ok(map) => {
                if !self.connectivity_ok() {
                    d.connectivity_ok = false;
                    d.failures.push("singular graph is disconnected".to_string());
                }
                if !self.orientability_ok() {
                    d.orientability_ok = false;
                    d.failures
                        .push("OrientabilityFailure: a gluing violates the parity convention".to_string());
                }
                if d.matching_ok {
                    match crate::region::check_standardness(self, &map) {
                        Ok(()) => {}
                        Err(msg) => {
                            d.standardness_ok = false;
                            d.failures.push(format!("StandardnessFailure: {msg}"));
                        }
                    }
                }
            }
            Err(e) => {
                d.matching_ok = false;
                d.standardness_ok = false;
                d.failures.push(e.to_string());
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_count_must_be_twice_vertices() {
        let s = Spine::new(1, vec![]);
        let d = s.validate();
        assert!(!d.is_valid());
        assert!(!d.matching_ok);
    }
}
