use thiserror::Error;

/// Errors raised by the numerical kernels and the experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: requires {requirement} (got {value})")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is numerically rank deficient (pivot {pivot} vanished)")]
    RankDeficient { pivot: usize },
    #[error("{what} did not converge (achieved error bound {bound:e})")]
    NoConvergence { what: &'static str, bound: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("sample {sample} failed: {source}")]
    SampleFailure {
        sample: u64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, requirement: &'static str, value: f64) -> Error {
    Error::Domain {
        name,
        requirement,
        value,
    }
}
