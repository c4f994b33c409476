use thiserror::Error;

pub type Result<T> = std::result::Result<T, DickeError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DickeError {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("coupling must be non-negative and finite, got {0}")]
    NegativeCoupling(f64),

    #[error("atomic displacement out of range: beta^2 = {beta_sq} must be below {limit}")]
    BetaOutOfRange { beta_sq: f64, limit: f64 },

    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error(
        "ground sector for N={n_atoms}, lambda={lambda} sits on the scan bound M={m_max}; \
         raise m_max_factor"
    )]
    ScanBoundaryHit {
        n_atoms: usize,
        lambda: f64,
        m_max: usize,
    },

    #[error("dense dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("loop step count {steps} too small; need at least {min}")]
    StepCountTooSmall { steps: usize, min: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("grid has {len} points, need at least {min}")]
    GridTooSmall { len: usize, min: usize },

    #[error("grid spacing is not uniform")]
    NonUniformGrid,

    #[error("grid is not strictly increasing")]
    GridNotIncreasing,

    #[error("grid does not bracket a critical point (no curvature peak)")]
    GridDoesNotBracket,

    #[error("atom-number ladder has {len} entries, need at least {min}")]
    LadderTooSmall { len: usize, min: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

impl DickeError {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            DickeError::NoConvergence(_) | DickeError::ScanBoundaryHit { .. }
        )
    }
}
