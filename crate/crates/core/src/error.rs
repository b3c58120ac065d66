use thiserror::Error;

/// Errors shared by every numeric layer of the crate.
#[derive(Debug, Clone, Error)]
pub enum ThermoError {
    /// An input left the domain on which an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or iteration hit its term cap before reaching tolerance.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// The metric is too ill-conditioned to invert reliably.
    #[error("singular metric: condition number {cond:.3e} exceeds {limit:.1e}")]
    SingularMetric { cond: f64, limit: f64 },

    /// A curve or grid is too coarse for the requested operation.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// An integration step left the valid chart.
    #[error("step error: {0}")]
    Step(String),

    /// A root bracket does not straddle a sign change.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// A scan over a trajectory grid failed to locate a required feature.
    #[error("grid error: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, ThermoError>;

impl ThermoError {
    pub fn domain(msg: impl Into<String>) -> Self {
        ThermoError::Domain(msg.into())
    }
}
