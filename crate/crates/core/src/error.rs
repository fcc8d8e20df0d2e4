use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the region where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge after {subdivisions} subdivisions (value {value:e}, error estimate {error_estimate:e})")]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A required inequality between derived parameters failed.
    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("no member of P_{degree} found after {attempts} random draws with B = {bound}")]
    RetryCap {
        degree: usize,
        bound: f64,
        attempts: u64,
    },

    #[error("zeros table is empty")]
    EmptyZeroTable,

    #[error("line {line}: cannot parse {text:?} as an ordinate")]
    NonNumeric { line: usize, text: String },

    #[error("line {line}: ordinate {value} does not exceed the previous ordinate {previous}")]
    NonMonotone {
        line: usize,
        value: f64,
        previous: f64,
    },

    #[error("first ordinate {0} is not in (14, 15); not a table of zeta zeros")]
    ImplausibleFirstZero(f64),

    /// Zero data does not reach the requested height.
    #[error("zero data covers ordinates up to {covered}, but t0 = {t0} was requested")]
    Coverage { t0: f64, covered: f64 },

    #[error("polynomial file, line {line}: {message}")]
    PolyFormat { line: usize, message: String },

    /// The R0 iteration hit its round cap; `trace` holds the rows computed.
    #[error("iteration did not converge within {rounds} rounds")]
    IterationCap {
        rounds: usize,
        trace: Vec<crate::iterate::IterationRow>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
