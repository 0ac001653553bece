use crate::model::ModelVariant;

/// Errors shared across the pricing, quadrature, verification and
/// simulation layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input violates a documented domain constraint. The message names
    /// the constraint that failed.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive quadrature exhausted its refinement budget before
    /// reaching the requested tolerance.
    #[error("quadrature did not converge: error estimate {err:.3e} > tol {tol:.3e} after {evals} evaluations")]
    Convergence { evals: usize, err: f64, tol: f64 },

    /// Parameters classify as a different model variant than requested.
    #[error("parameters classify as {actual}, not {expected}")]
    VariantMismatch {
        expected: ModelVariant,
        actual: ModelVariant,
    },

    /// The integrated variance came out negative, which signals an
    /// unusable correlation regime (only reachable with |rho| > 1).
    #[error("total variance is negative ({value:.3e}); correlation regime unusable")]
    NegativeVariance { value: f64 },

    /// The subordinator lattice hit its step cap before covering the
    /// requested horizon; decrease the horizon or coarsen the resolution.
    #[error("subordinator lattice cap of {cap} steps reached before covering t = {horizon}")]
    Resolution { cap: usize, horizon: f64 },

    /// A convergence-order fit is not meaningful (too few levels, or
    /// residuals saturated at the floating-point floor).
    #[error("cannot estimate convergence order: {0}")]
    DegenerateFit(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
