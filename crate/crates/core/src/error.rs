use thiserror::Error;

/// Errors produced by geometry construction and the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point ({x}, {y}) is not strictly interior to the domain")]
    NotInterior { x: f64, y: f64 },

    #[error("operation requires a convex single-component domain")]
    NotConvex,

    #[error("domain is not symmetric about the x1-axis (defect {defect:.3e})")]
    NotAxisymmetric { defect: f64 },

    #[error("{what}: budget of {budget} exhausted (estimated error {error:.3e})")]
    BudgetExhausted {
        what: &'static str,
        budget: usize,
        error: f64,
    },

    #[error("theory violated: {0}")]
    TheoryViolation(String),
}

impl Error {
    /// True for failures of a numerical routine rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
