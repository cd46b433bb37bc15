use thiserror::Error;

/// Crate-wide error type. Operations that report "not found / not applicable"
/// as ordinary values (bounded searches, selection) do so through their result
/// types instead of this enum.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("gluing of tet {tet} face {face} is not involutive")]
    NonInvolutiveGluing { tet: usize, face: usize },

    #[error("tet {tet} face {face} is not glued (closed mode requires every face paired)")]
    UnpairedFace { tet: usize, face: usize },

    #[error("invalid simplex reference: dimension {dim}, index {index}")]
    InvalidSimplex { dim: u8, index: usize },

    #[error("coordinate bound {bound} exceeds the solver budget ({nodes} search nodes explored, cap {cap})")]
    BoundTooLargeForBudget { bound: u32, nodes: u64, cap: u64 },

    #[error("normal vector does not satisfy the matching equations (first failing row {row})")]
    NotMatched { row: usize },

    #[error("normal vector is not admissible: tet {tet} has more than one nonzero quad type")]
    NotAdmissible { tet: usize },

    #[error("pattern is not a closed surface: {reason}")]
    NotClosedSurface { reason: String },

    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u64 },

    #[error("move not applicable: {reason}")]
    MoveNotApplicable { reason: String },

    #[error("pieces are not parallel: {reason}")]
    NotParallel { reason: String },

    #[error("essential boundary curve: {witness}")]
    EssentialBoundaryCurve { witness: String },

    #[error("no genus-{genus} component after normalization")]
    GenusNotFound { genus: u32 },

    #[error("carrier map missing: {reason}")]
    CarrierMapMissing { reason: String },

    #[error("vertex {digest} is not in the graph")]
    VertexNotInGraph { digest: String },

    #[error("annulus family radii are not sorted (position {position})")]
    UnsortedRadii { position: usize },

    #[error("non-orientable part {part} has odd multiplicity {multiplicity}")]
    OddNonorientableMultiplicity { part: usize, multiplicity: u64 },

    #[error("parse error at line {line}, column {col}: {message}")]
    ParseError {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("validation error: {0}")]
    ValidationError(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
