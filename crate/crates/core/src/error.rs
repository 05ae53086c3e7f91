use thiserror::Error;

/// Errors raised by the computational engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported group `{0}` (expected U1 or SU2)")]
    UnsupportedGroup(String),

    #[error("invalid irrep label {label} for group {group}")]
    InvalidIrrep { group: String, label: i64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge after {points} points (last estimate {estimate:e})")]
    QuadratureNonConvergence { points: usize, estimate: f64 },

    #[error(
        "character-sum truncation insufficient: tail bound {tail_bound:e} exceeds {tolerance:e}; \
         a casimir cutoff of at least {required_cutoff} is required"
    )]
    TruncationInsufficient {
        tail_bound: f64,
        tolerance: f64,
        required_cutoff: f64,
    },

    #[error("series did not reach its tail bound within {max_terms} terms")]
    SeriesTruncation { max_terms: usize },

    #[error("theta = {0} is not a regular element of the maximal torus")]
    NonRegularElement(f64),

    #[error("invalid surface map: {0}")]
    InvalidSurfaceMap(String),

    #[error(
        "effective sample size {ess:.1} is below 1% of {samples} samples; \
         reparametrize the map or increase face areas"
    )]
    LowEffectiveSampleSize { ess: f64, samples: usize },

    #[error("series order {order} exceeds the supported maximum {max}")]
    SeriesOrderTooHigh { order: usize, max: usize },

    #[error("perturbative order {0} is not supported (maximum 3)")]
    PertOrderTooHigh(usize),

    #[error("loop passes through the same point at t = {t} and s = {s}")]
    SelfIntersection { t: f64, s: f64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// True for errors caused by bad user input rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedGroup(_)
                | Error::InvalidIrrep { .. }
                | Error::InvalidInput(_)
                | Error::InvalidSurfaceMap(_)
                | Error::NonRegularElement(_)
                | Error::SeriesOrderTooHigh { .. }
                | Error::PertOrderTooHigh(_)
                | Error::SelfIntersection { .. }
        )
    }

    /// Short machine-readable tag for structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedGroup(_) => "unsupported_group",
            Error::InvalidIrrep { .. } => "invalid_irrep",
            Error::InvalidInput(_) => "invalid_input",
            Error::QuadratureNonConvergence { .. } => "quadrature_non_convergence",
            Error::TruncationInsufficient { .. } => "truncation_insufficient",
            Error::SeriesTruncation { .. } => "series_truncation",
            Error::NonRegularElement(_) => "non_regular_element",
            Error::InvalidSurfaceMap(_) => "invalid_surface_map",
            Error::LowEffectiveSampleSize { .. } => "low_effective_sample_size",
            Error::SeriesOrderTooHigh { .. } => "series_order_too_high",
            Error::PertOrderTooHigh(_) => "pert_order_too_high",
            Error::SelfIntersection { .. } => "self_intersection",
            Error::Consistency(_) => "consistency",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
