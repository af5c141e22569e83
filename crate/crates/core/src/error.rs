use crate::Rat;
use thiserror::Error;

/// Errors shared by every module of the engine.
///
/// The CLI maps these onto process exit codes: geometry violations exit 3,
/// verification failures exit 4, degenerate paths exit 5.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("weight vectors do not span the dual space")]
    NotSpanning,
    #[error("moment map is not proper: the weights admit no half-space witness")]
    NotProper,
    #[error("parameter is a singular value of the moment map")]
    SingularParameter,
    #[error("torus action is not free on the level set")]
    NotFree,
    #[error("symplectic quotient is empty at this parameter")]
    EmptyQuotient,
    #[error("path start point lies inside the moment image cone")]
    NotOutside,
    #[error("degenerate path: retry budget exhausted while jittering")]
    DegeneratePath,
    #[error("degree vector does not lift to the lattice")]
    NoLift,
    #[error("leading coefficient of a residue factor is zero")]
    ZeroLeadingCoefficient,
    #[error("chain of spans violates the dimension condition")]
    InvalidChain,
    #[error("partition violates the dimension condition")]
    InvalidPartition,
    #[error("the two evaluation algorithms disagree: direct = {direct}, wallcross = {wallcross}")]
    AlgorithmMismatch { direct: Box<Rat>, wallcross: Box<Rat> },
    #[error("minimal Chern number is less than two")]
    ChernNumberTooSmall,
    #[error("parameter is not the monotone parameter (sum of the weights)")]
    NotMonotone,
    #[error("quantum relation construction failed: {0}")]
    ConstructionFailure(String),
    #[error("lattice vector is not a degree-two homology class of the quotient")]
    NotInH2,
    #[error("expected dimension is negative")]
    NegativeExpectedDimension,
    #[error("invalid input: {0}")]
    Parse(String),
}
