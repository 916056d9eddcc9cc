//! Link diagrams drawn on a branched spine: per-region planar tangles glued
//! across spine edges, the diagram move engine with its pseudo-Legendrian
//! subset, transport through spine moves, and curl/winding bookkeeping.
//!
//! A diagram is a generic curve on the spine: inside each region it is a
//! planar tangle (crossings and arcs in a disk), and it meets the singular
//! set transversally at matched leg pairs along the edges. The branching
//! splits the three sheets along each edge into two smoothly continuing
//! sheets and one tangential sheet, which dictates the legal crossing types.

use thiserror::Error;

pub mod legality;
pub mod moves;
pub mod tangle;
pub mod trace;

pub use legality::{edge_sheets, legal_kind, EdgeSheets, PairKind};
pub use moves::{
    apply_diagram_move, find_diagram_sites, format_diagram_site, is_pseudo_legendrian_script,
    parse_diagram_site, DiagramMoveKind, DiagramMoveSite,
};
pub use tangle::{
    empty_diagram, validate_diagram, Dart, Diagram, DiagramDiagnostics, LegRef, MatchPair, Node,
    RegionTangle,
};
pub use trace::{components, homology_class, homology_classes, Component};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("invalid diagram site: {0}")]
    InvalidSite(String),
    #[error("diagram legality failure: {0}")]
    LegalityFailure(String),
    #[error("component {0} is not oriented")]
    UnorientedComponent(usize),
    #[error("clearing search exhausted: {0}")]
    ClearingFailed(String),
    #[error("script replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("diagram parse error: {0}")]
    Parse(String),
}
