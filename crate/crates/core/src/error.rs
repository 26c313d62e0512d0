use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator polynomial")]
    ZeroDenominator,

    #[error("polynomial vanishes at interval endpoint {point}; nudge the endpoint by 1/2^k and retry")]
    EndpointRoot { point: String },

    #[error("invalid root bracket: {0}")]
    InvalidBracket(String),

    #[error("pole at {point}")]
    Pole { point: String },

    #[error("phase-space integral diverges for gamma = {gamma} >= d/2 = {half_d}")]
    PhaseSpaceDiverges { gamma: String, half_d: String },

    #[error("theorem range is gamma >= 1 (got {0})")]
    BelowTheoremRange(String),

    #[error("Q_3 strictly decreasing on (-1, +inf): no interior maximizer")]
    StrictlyDecreasing,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("could not reach {precision} significant digits after {attempts} attempts")]
    PrecisionNotReached { precision: u32, attempts: u32 },

    #[error("cannot parse {input:?} as an exact rational")]
    Parse { input: String },
}
