use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("constant term {modulus:e} is too close to zero to invert")]
    NearZeroConstantTerm { modulus: f64 },

    /// The dilatation at the origin disagrees with what the analytic
    /// combination h + c·g forces through h'(0) = 1.
    #[error("normalization mismatch: dilatation at 0 is {found}, the shear relation requires {required}")]
    NormalizationMismatch {
        found: Complex64,
        required: Complex64,
    },

    #[error("denominator vanishes near z = {at}")]
    DenominatorVanishes { at: Complex64 },

    #[error("inconclusive: |leading| = {leading:e} does not dominate |constant| = {constant:e}")]
    InconclusiveBoundary { leading: f64, constant: f64 },

    #[error("root finder did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("curve extent {extent:e} in the test direction is degenerate")]
    DegenerateCurve { extent: f64 },

    #[error("map spec: {0}")]
    MapSpec(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
