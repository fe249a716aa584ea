use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the special functions, the series kernels and the
/// physics layers built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {z}")]
    Pole { z: Complex64 },

    #[error("{what}: |Im z| = {im} exceeds the representable exponent range")]
    Overflow { what: &'static str, im: f64 },

    #[error("{what}: no convergence after {terms} terms (estimated error {estimate:e})")]
    Convergence {
        what: &'static str,
        terms: usize,
        estimate: f64,
    },

    #[error("summation kernel evaluated within {radius:e} of the integer pole at mu = {mu}")]
    NearPole { mu: Complex64, radius: f64 },

    #[error("{what}: fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error(
        "partial-fraction pole: Delta_tilde_eff - Delta_eff = {offset} coincides with +/- omega_m"
    )]
    DegenerateDetuning { offset: f64 },

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(what: &'static str, z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn finite_real(what: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}
