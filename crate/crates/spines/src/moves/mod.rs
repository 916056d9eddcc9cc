//! The move calculus on branched spines: branched MP moves (positive and
//! negative), the snake moves, the sliding-vertex move, rigidity, and the
//! generators for the small rigid families.
//!
//! Moves are implemented dually as local rewrites of the vertex-gadget
//! encoding; region orientations are transferred through the rewrite and the
//! freshly created regions receive every orientation compatible with the
//! branching condition. Results are always sign-normalized.

use thiserror::Error;

pub mod mp;
pub(crate) mod pillow;
pub mod rigid;
pub(crate) mod rigid_family;
pub mod script;
pub mod sliding_vertex;
pub mod snake;
pub(crate) mod surgery;

pub use mp::{apply_mp_negative, apply_mp_positive};
pub use rigid::{is_rigid, make_rigid_spine, one_vertex_branched_spines};
pub use script::{apply_site, format_site, parse_site};
pub use sliding_vertex::{apply_sliding_vertex, apply_sliding_vertex_variant};
pub use snake::{apply_snake, SnakeMirror};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("invalid site: {0}")]
    InvalidSite(String),
    #[error("branching obstruction: {0}")]
    BranchingObstruction(String),
}

/// Move kinds of the spine calculus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SpineMoveKind {
    MpPos,
    MpNeg,
    SnakePos,
    SnakeNeg,
    SlidingVertex,
}

impl std::fmt::Display for SpineMoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpineMoveKind::MpPos => "MP_POS",
            SpineMoveKind::MpNeg => "MP_NEG",
            SpineMoveKind::SnakePos => "SNAKE_POS",
            SpineMoveKind::SnakeNeg => "SNAKE_NEG",
            SpineMoveKind::SlidingVertex => "SLIDING_VERTEX",
        })
    }
}

/// A move site: the anchor cell the rewrite is centered on.
///
/// Anchors are an edge id (`MP_POS`, `SNAKE_POS`, `SNAKE_NEG` handle), a
/// region id (`MP_NEG`), or a vertex id (`SLIDING_VERTEX`); `variant`
/// selects the mirror for snake moves and `orientation_choice` indexes into
/// the list of valid new-region orientations on replay.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SpineMoveSite {
    pub kind: SpineMoveKind,
    pub anchor: usize,
    pub variant: usize,
    pub orientation_choice: usize,
}

/// Enumerate all anchors whose local configuration matches `kind`, in
/// deterministic order.
pub fn find_sites(
    bs: &crate::branching::BranchedSpine,
    kind: SpineMoveKind,
) -> Vec<SpineMoveSite> {
    let mut out = Vec::new();
    match kind {
        SpineMoveKind::MpPos => {
            for (ei, e) in bs.spine.edges.iter().enumerate() {
                if e.a.vertex != e.b.vertex {
                    out.push(SpineMoveSite {
                        kind,
                        anchor: ei,
                        variant: 0,
                        orientation_choice: 0,
                    });
                }
            }
        }
        SpineMoveKind::MpNeg => {
            for r in &bs.regions {
                if r.orbit.len() == 3 {
                    let mut vs: Vec<usize> = r.orbit.iter().map(|s| s.vertex).collect();
                    vs.sort_unstable();
                    vs.dedup();
                    if vs.len() == 3 {
                        out.push(SpineMoveSite {
                            kind,
                            anchor: r.id,
                            variant: 0,
                            orientation_choice: 0,
                        });
                    }
                }
            }
        }
        SpineMoveKind::SnakePos => {
            for (ei, _) in bs.spine.edges.iter().enumerate() {
                for (variant, mirror) in [SnakeMirror::Left, SnakeMirror::Right]
                    .into_iter()
                    .enumerate()
                {
                    if apply_snake(bs, ei, true, mirror).is_ok() {
                        out.push(SpineMoveSite {
                            kind,
                            anchor: ei,
                            variant,
                            orientation_choice: 0,
                        });
                    }
                }
            }
        }
        SpineMoveKind::SnakeNeg => {
            out.extend(snake::find_negative_sites(bs));
        }
        SpineMoveKind::SlidingVertex => {
            for v in 0..bs.spine.vertex_count {
                for variant in 0..2 {
                    out.push(SpineMoveSite {
                        kind,
                        anchor: v,
                        variant,
                        orientation_choice: 0,
                    });
                }
            }
        }
    }
    out
}
