//! Combinatorial machinery for classifying splittings of a closed 3-manifold:
//! semi-simplicial triangulations, normal-coordinate algebra, transverse
//! surface patterns and their elementary moves, bounded compression searches,
//! a move graph over canonical surface classes, and the exact integer
//! combinatorics of sweepout cell complexes.
//!
//! All operations are deterministic: the same inputs produce byte-identical
//! outputs regardless of thread count or platform.

pub mod error;
pub mod io;
pub mod moves;
pub mod normal;
pub mod pattern;
pub mod tricomplex;
pub(crate) mod uf;

pub use error::{Error, Result};
pub use moves::{
    applicable_moves, apply_move, apply_move_with_inverse, convert_path, normalize, tube, EndRef,
    Move, MoveKind, NormalizeOutcome, Participants, Selector,
};
pub use pattern::{CanonicalClass, Grade, TransversePattern};
pub use tricomplex::{
    BallEvidence, EdgeLinkReport, FanEntry, GlueSpec, ManifoldReport, SimplexRef, StarRegion,
    Subdivision, Triangulation, VertexLinkReport,
};
