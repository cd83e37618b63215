use thiserror::Error;

/// Everything that can go wrong while parsing, differentiating or evaluating
/// the geometry of a fundamental relation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: expected {}", expected.join(" | "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
    },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error in `{subexpr}`: {reason}")]
    Domain { subexpr: String, reason: String },

    #[error("conformal factor is singular at ({q1}, {q2}): q2*Phi_2 = {value}")]
    SingularConformalFactor { q1: f64, q2: f64, value: f64 },

    #[error("metric is degenerate at ({q1}, {q2}): det = {det}")]
    DegenerateMetric { q1: f64, q2: f64, det: f64 },

    #[error("all {count} grid points are degenerate")]
    AllPointsDegenerate { count: usize },

    #[error("negative radicand {what} = {value} at ({q1}, {q2})")]
    NegativeRadicand {
        what: String,
        q1: f64,
        q2: f64,
        value: f64,
    },

    #[error("mixing constant c = {c} must satisfy |c| <= 1")]
    InvalidMixing { c: f64 },

    #[error("singular denominator {what} at ({q1}, {q2})")]
    SingularDenominator { what: String, q1: f64, q2: f64 },

    #[error("quadratic for x_1 has negative discriminant {value} at ({q1}, {q2})")]
    NegativeDiscriminant { q1: f64, q2: f64, value: f64 },

    #[error("third-order constraint violated at ({q1}, {q2}): c1 = {c1}, c2 = {c2}")]
    ConstraintViolated { q1: f64, q2: f64, c1: f64, c2: f64 },

    #[error("invalid family with alpha = {alpha}: {reason}")]
    InvalidFamily { alpha: f64, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid coordinate field: {0}")]
    InvalidField(String),

    #[error("quadrature on [{a}, {b}] did not reach tolerance (error estimate {estimate})")]
    QuadratureFailed { a: f64, b: f64, estimate: f64 },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownIdentifier { .. } => "UnknownIdentifier",
            Error::Domain { .. } => "DomainError",
            Error::SingularConformalFactor { .. } => "SingularConformalFactor",
            Error::DegenerateMetric { .. } => "DegenerateMetric",
            Error::AllPointsDegenerate { .. } => "AllPointsDegenerate",
            Error::NegativeRadicand { .. } => "NegativeRadicand",
            Error::InvalidMixing { .. } => "InvalidMixing",
            Error::SingularDenominator { .. } => "SingularDenominator",
            Error::NegativeDiscriminant { .. } => "NegativeDiscriminant",
            Error::ConstraintViolated { .. } => "ConstraintViolated",
            Error::InvalidFamily { .. } => "InvalidFamily",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidField(_) => "InvalidField",
            Error::QuadratureFailed { .. } => "QuadratureFailed",
        }
    }

    /// True for errors caused by malformed input rather than by the mathematics
    /// of the relation being examined.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownIdentifier { .. }
                | Error::InvalidGrid(_)
                | Error::InvalidMixing { .. }
                | Error::InvalidField(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
