use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hurst parameter must lie in (0, 1), got {0}")]
    InvalidHurst(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("circulant embedding is not positive semi-definite: eigenvalue {eigenvalue:e} below -{tolerance:e}")]
    EmbeddingNotPsd { eigenvalue: f64, tolerance: f64 },

    #[error("Durbin-Levinson breakdown at step {step}: innovation variance {variance:e}")]
    NumericalBreakdown { step: usize, variance: f64 },

    #[error("covariance matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("scale exponent {k} too fine for grid size {n} (boxes must span at least 8 grid steps)")]
    ScaleTooFine { k: u32, n: usize },

    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),

    #[error("insufficient hits: {0}")]
    InsufficientHits(String),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EmbeddingNotPsd { .. }
                | Error::NumericalBreakdown { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::DegenerateRegression(_)
        )
    }
}
