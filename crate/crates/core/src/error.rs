use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A unit-norm input was required.
    #[error("input is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("field grids were sampled with different beam parameters or grid specs")]
    GridMismatch,

    #[error("both field amplitudes are zero")]
    ZeroField,

    /// Rules (a) and (b) only apply on the four principal meridians.
    #[error("rule ({rule}) requires phi in {{0, pi/2, pi, 3pi/2}}, got {phi}")]
    ForbiddenTransform { rule: char, phi: f64 },

    #[error("element kind mismatch: expected {expected} operator, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("truncation risk: {0}")]
    TruncationRisk(String),

    #[error("state is not pure: norm deficit {0}")]
    NotPure(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
