use std::fmt;

use thiserror::Error;

/// Why an ordered pair of maps failed to be an LR pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFailure {
    /// The kernel of the raising map is not one-dimensional.
    KernelDimension,
    /// Repeated lowering of the top line hit zero too early.
    ImageCollapse,
    /// The lines produced do not sum directly to the whole space.
    NotDirectSum,
    LoweringFails,
    RaisingFails,
}

impl fmt::Display for PairFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairFailure::KernelDimension => "KernelDimension",
            PairFailure::ImageCollapse => "ImageCollapse",
            PairFailure::NotDirectSum => "NotDirectSum",
            PairFailure::LoweringFails => "LoweringFails",
            PairFailure::RaisingFails => "RaisingFails",
        };
        f.write_str(s)
    }
}

/// One of the six ordered pairs drawn from a triple `(A, B, C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairLabel {
    AB,
    BC,
    CA,
    BA,
    CB,
    AC,
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairLabel::AB => "(A,B)",
            PairLabel::BC => "(B,C)",
            PairLabel::CA => "(C,A)",
            PairLabel::BA => "(B,A)",
            PairLabel::CB => "(C,B)",
            PairLabel::AC => "(A,C)",
        };
        f.write_str(s)
    }
}

/// Which hypothesis of an extension or recovery routine was not met.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precondition {
    ConditionI,
    ConditionII,
    TopLineMismatch,
    NotLrPair(PairFailure),
    NotLrTriple(PairLabel, PairFailure),
    DecompositionMismatch,
    WrongBipartiteness,
    DimensionTooSmall,
    Shape,
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::ConditionI => f.write_str("ConditionI"),
            Precondition::ConditionII => f.write_str("ConditionII"),
            Precondition::TopLineMismatch => f.write_str("TopLineMismatch"),
            Precondition::NotLrPair(r) => write!(f, "NotLRPair({r})"),
            Precondition::NotLrTriple(p, r) => write!(f, "NotLRTriple({p}, {r})"),
            Precondition::DecompositionMismatch => f.write_str("DecompositionMismatch"),
            Precondition::WrongBipartiteness => f.write_str("WrongBipartiteness"),
            Precondition::DimensionTooSmall => f.write_str("DimensionTooSmall"),
            Precondition::Shape => f.write_str("Shape"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    InvalidModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields (p = {0} and p = {1})")]
    FieldMismatch(u64, u64),
    #[error("cannot parse {0:?} as an integer")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("the line is not invariant under the map")]
    NotInvariant,
    #[error("vectors do not form a basis")]
    NotABasis,
    #[error("lines do not form a direct sum")]
    NotDirectSum,
    #[error("subspace sequence is not a flag")]
    NotAFlag,
    #[error("the zero vector does not span a line")]
    ZeroVector,
    #[error("flags are not opposite")]
    NotOpposite,
    #[error("not an LR pair: {0}")]
    NotLrPair(PairFailure),
    #[error("the map does not lower the decomposition")]
    NotLowering,
    #[error("anchor does not span the first basis line")]
    AnchorMismatch,
    #[error("action formula violated at index {0}")]
    FormulaViolated(usize),
    #[error("not upper-triangular Toeplitz: entry ({0}, {1})")]
    NotToeplitz(usize, usize),
    #[error("not an LR triple: {0} fails with {1}")]
    NotLrTriple(PairLabel, PairFailure),
    #[error("precondition failed: {0}")]
    PreconditionFailed(Precondition),
    #[error("triple is not bipartite")]
    NotBipartite,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("no scalar relation between the two maps")]
    NoScalarRelation,
    #[error("gave up after {0} attempts")]
    AttemptsExhausted(usize),
    #[error("bipartite triples need even d, got {0}")]
    OddD(usize),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
