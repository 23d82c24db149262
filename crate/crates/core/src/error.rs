use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument {x} is outside the accurate range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },

    #[error(
        "quadrature on [{a}, {b}] did not converge: best estimate {estimate} \
         with error estimate {error_estimate} after {evaluations} evaluations"
    )]
    QuadratureNotConverged {
        a: f64,
        b: f64,
        estimate: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("integrand is not finite at s = {at} (value {value})")]
    NonFiniteIntegrand { at: f64, value: f64 },

    #[error("tail bound {bound:e} still above {target:e} at the hard cutoff s = {cutoff}")]
    TailNotReached { cutoff: f64, bound: f64, target: f64 },

    #[error("[{lo}, {hi}] does not bracket a root: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root refinement stopped after {iterations} iterations with bracket [{lo}, {hi}]")]
    RootNotConverged { lo: f64, hi: f64, iterations: usize },

    #[error("wave function {value:e} at s = {s} is below the underflow guard {guard:e}")]
    WaveFunctionUnderflow { s: f64, value: f64, guard: f64 },

    #[error("potential is not finite at node {node} (s = {s}, value {value})")]
    NonFinitePotential { node: usize, s: f64, value: f64 },

    #[error(
        "box length {length} is too small: |Ai(L - a_{level})| = {amplitude:e} exceeds {limit:e}; \
         increase L"
    )]
    BoxTooSmall { length: f64, level: usize, amplitude: f64, limit: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
