//! Branched standard spines of oriented 3-manifolds: core data structures,
//! validation, boundary patterns, calculus moves, search, and link diagrams
//! drawn on spines.
//!
//! A spine is encoded combinatorially by vertex gadgets: each true vertex
//! carries four germ slots, edges glue germ pairs together with a wing
//! bijection, and the two-dimensional regions are recovered by tracing wing
//! orbits. Everything downstream (boundary surfaces, branchings, homology,
//! the move calculus, diagrams) is computed from this one encoding.

pub mod perm;
pub mod spine;
pub mod region;
pub mod enumerate;
pub mod branching;
pub mod homology;
pub mod transform;
pub mod canon;
pub mod io;
pub mod boundary;
pub mod moves;
pub mod explore;
pub mod diagrams;
pub(crate) mod util;
