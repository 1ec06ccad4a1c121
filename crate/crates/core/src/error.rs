use thiserror::Error;

use crate::simplex::SimplexError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("face {0} violates the triangle inequality")]
    TriangleInequality(String),
    #[error("complex is disconnected")]
    Disconnected,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("faces {0} and {1} do not share edge {2}")]
    NotAdjacent(String, String, String),
    #[error("point is not in the complex: {0}")]
    PointNotInComplex(String),
    #[error("complex is not CAT(0): {0}")]
    NotCat0(String),
    #[error("pair of directions at link distance at least pi")]
    PairAtLeastPi,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("splits {0} and {1} are incompatible")]
    IncompatibleSplits(String, String),
    #[error("linear program infeasible")]
    LpInfeasible,
    #[error("linear program unbounded")]
    LpUnbounded,
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("region budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("unknown location: {0}")]
    UnknownLocation(String),
    #[error("search depth of {0} faces exceeded")]
    DepthExceeded(usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "MalformedInput",
            Error::TriangleInequality(_) => "TriangleInequality",
            Error::Disconnected => "Disconnected",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::NotAdjacent(..) => "NotAdjacent",
            Error::PointNotInComplex(_) => "PointNotInComplex",
            Error::NotCat0(_) => "NotCat0",
            Error::PairAtLeastPi => "PairAtLeastPi",
            Error::Domain(_) => "DomainError",
            Error::IncompatibleSplits(..) => "IncompatibleSplits",
            Error::LpInfeasible => "LPInfeasible",
            Error::LpUnbounded => "LPUnbounded",
            Error::Simplex(SimplexError::NumericalBreakdown) => "NumericalBreakdown",
            Error::Simplex(_) => "SimplexError",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::UnknownLocation(_) => "UnknownLocation",
            Error::DepthExceeded(_) => "DepthExceeded",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
