use thiserror::Error;

use crate::lattice::Elem;

/// Errors raised by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a lattice needs at least two elements")]
    TooFewElements,
    #[error("duplicate element label {0:?}")]
    DuplicateElement(String),
    #[error("covers do not form a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("not a lattice: {a:?} and {b:?} have no unique {bound}")]
    NotALattice {
        a: String,
        b: String,
        bound: &'static str,
    },
    #[error("the order has no global minimum or no global maximum")]
    Unbounded,
    #[error("join/meet tables violate the lattice axioms: {0}")]
    InconsistentTables(String),
    #[error("the lattice is not distributive")]
    NotDistributive,
    #[error("the lattice is not a chain")]
    NotAChain,
    #[error("element {0} is not a join-irreducible of the host lattice")]
    UnknownOmega(Elem),
    #[error("element id {0} is out of range for the host lattice")]
    InvalidElement(Elem),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operands live over different lattices")]
    LatticeMismatch,
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{what} of size {size} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("search space of {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("the supplied element is not a two-sided identity")]
    NotAnIdentity,
    #[error("the supplied triple is associative")]
    NotAWitness,
    #[error("witness mode unavailable: {0}")]
    WitnessModeUnavailable(&'static str),
    #[error("the carrier cannot be enumerated")]
    CarrierNotEnumerable,

    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("relation is not a reduced idempotent")]
    NotReducedIdempotent,
    #[error("relations are not nested at position {0}")]
    NotNested(usize),
    #[error("relation {0} is not a pseudo-order")]
    NotPseudoOrder(usize),
    #[error("cut {0} is not a partial order on the whole vertex set")]
    CutNotPartialOrder(usize),
    #[error("cuts do not correspond to lattice elements")]
    CutsNotRealizable,
    #[error("neither is the bottom meet-irreducible nor the top join-irreducible")]
    IrreducibilityNotSatisfied,
    #[error("the bottom element is not meet-irreducible")]
    BottomNotMeetIrreducible,
    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("unknown element label {0:?}")]
    UnknownElement(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input.
    Input,
    /// The input is well formed but an operation's precondition fails.
    Precondition,
    /// A search space or size cap was exceeded.
    Budget,
    /// Two independent computations disagreed.
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            TooFewElements
            | DuplicateElement(_)
            | NotAPartialOrder(_)
            | NotALattice { .. }
            | Unbounded
            | InconsistentTables(_)
            | InvalidElement(_)
            | DimensionMismatch { .. }
            | LatticeMismatch
            | InvalidDimension(_)
            | InvalidPermutation(_)
            | Parse { .. }
            | UnknownElement(_)
            | UnknownOmega(_)
            | CutsNotRealizable => ErrorKind::Input,
            SizeLimit { .. } | BudgetExceeded { .. } => ErrorKind::Budget,
            Internal(_) => ErrorKind::Internal,
            NotDistributive
            | NotAChain
            | NotAnIdentity
            | NotAWitness
            | WitnessModeUnavailable(_)
            | CarrierNotEnumerable
            | NotIdempotent
            | NotReducedIdempotent
            | NotNested(_)
            | NotPseudoOrder(_)
            | CutNotPartialOrder(_)
            | IrreducibilityNotSatisfied
            | BottomNotMeetIrreducible
            | NotNilpotent => ErrorKind::Precondition,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
