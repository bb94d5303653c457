use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("pair intersection needs two distinct vertices, got ({0}, {0})")]
    SameVertex(usize),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("palette of {palette} colors is smaller than the {needed} colors the vector uses")]
    PaletteTooSmall { palette: u64, needed: u64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("instance exceeds guard rail: {0}")]
    GuardRail(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl Error {
    /// True for errors caused by a resource cap rather than by bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::GuardRail(_) | Error::BudgetExceeded(_))
    }
}
