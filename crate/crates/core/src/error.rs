use core::fmt;

use crate::expr::ExprError;

/// Everything that can go wrong while building or measuring a state.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `f(n)` is zero, negative, non-finite, or `n` lies past the model's safe cap.
    DegenerateNonlinearity { n: usize, value: f64 },
    /// `|alpha|` is outside the disk where the coherent-state series converges.
    Domain { modulus: f64, radius: f64 },
    /// Adaptive truncation hit the hard cap before the tail criterion was met.
    ConvergenceFailure { hard_cap: usize, tail: f64 },
    /// A state or quantity is undefined (all-zero coefficients, g2 at vacuum).
    DegenerateState(&'static str),
    /// The interference factor `1 + exp(i(phi + n pi/2))` vanishes at `n`.
    DegenerateCoefficient { n: usize },
    TruncationTooSmall { n_max: usize, required: usize },
    NoSignChange,
    QuadratureFailure { evaluations: usize },
    InvalidParameter(&'static str),
    Expr(ExprError),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateNonlinearity { n, value } => {
                write!(f, "degenerate nonlinearity: f({n}) = {value} is not finite and positive")
            }
            Error::Domain { modulus, radius } => write!(
                f,
                "domain error: |alpha| = {modulus} must be below the convergence radius {radius}"
            ),
            Error::ConvergenceFailure { hard_cap, tail } => write!(
                f,
                "truncation did not converge within hard cap {hard_cap} (tail estimate {tail:e})"
            ),
            Error::DegenerateState(what) => write!(f, "degenerate state: {what}"),
            Error::DegenerateCoefficient { n } => write!(
                f,
                "degenerate coefficient: superposition coefficient C_{n} vanishes, f_s({}) undefined",
                n + 1
            ),
            Error::TruncationTooSmall { n_max, required } => {
                write!(f, "truncation too small: n_max = {n_max}, need at least {required}")
            }
            Error::NoSignChange => f.write_str("no sign change in table"),
            Error::QuadratureFailure { evaluations } => {
                write!(f, "quadrature did not converge after {evaluations} evaluations")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::Expr(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<ExprError> for Error {
    fn from(e: ExprError) -> Self {
        Error::Expr(e)
    }
}
