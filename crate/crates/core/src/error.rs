use crate::expr::ExprError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("complex frequency: 1 + 2(alpha+beta) + (alpha-beta)^2 = {radicand} is not positive")]
    ComplexFrequency { radicand: f64 },

    #[error("coefficient A(x) is not positive at x = {x} (A = {value})")]
    NonPositiveMass { x: f64, value: f64 },

    #[error("quadrature failed on [{a}, {b}]: {reason}")]
    QuadratureFailure { a: f64, b: f64, reason: String },

    #[error("domain classification inconclusive on the {side} side: {detail}")]
    Inconclusive { side: &'static str, detail: String },

    #[error("z = {z} lies outside the map image ({zminus}, {zplus})")]
    OutOfRange { z: f64, zminus: f64, zplus: f64 },

    #[error("hypergeometric series did not converge after {terms} terms (a={a}, b={b}, y={y})")]
    SeriesNonConvergence { a: f64, b: f64, y: f64, terms: usize },

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("no root bracketed in [{lo}, {hi}]: {detail}")]
    RootBracketFailure { lo: f64, hi: f64, detail: String },

    #[error("computed energies are not strictly increasing: {0}")]
    ParityOrderViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParams(_) | Error::Json(_) => 2,
            Error::Expr(ExprError::Syntax { .. } | ExprError::UnknownIdentifier { .. } | ExprError::UnboundParameter(_)) => 2,
            Error::DomainMismatch(_) => 3,
            _ => 4,
        }
    }
}
