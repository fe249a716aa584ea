//! Closed-form Bessel-series expressions for a driven optomechanical cavity.
//!
//! `complexfn` evaluates complex-order Bessel functions, `besselsum` reduces
//! series of Bessel products onto three kernels, and `attractor` and `cycles`
//! build the classical and Fokker-Planck quantities on top of them. `verify`
//! holds the brute-force oracles and the validation suites.

pub mod attractor;
pub mod besselsum;
pub mod complexfn;
pub mod cycles;
pub mod error;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
