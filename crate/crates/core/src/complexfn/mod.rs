//! Complex Gamma, `sin(pi z)` and Bessel functions of the first kind.
//!
//! Complex-order Bessel functions are only defined here for real `x >= 0`;
//! callers that need negative arguments work through integer-order parity.

mod bessel;
mod bessel_int;
mod dd;
mod gamma;
mod trig;

pub use bessel::{
    besselj_complex_order, besselj_complex_order_asymptotic, besselj_complex_order_estimated,
    besselj_pair, BesselEstimate, SeriesControl,
};
pub use bessel_int::{besselj_int, besselj_int_seq};
pub use gamma::{gamma_complex, ln_gamma_complex, rgamma_complex};
pub use trig::{cospi_complex, sinpi_complex};

/// Complex scalar used for orders, detunings and summation results.
pub type ComplexValue = num_complex::Complex64;
