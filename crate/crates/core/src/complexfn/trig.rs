use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `pi |Im z|` for which `cosh` stays finite.
const EXP_BUDGET: f64 = 709.0;

/// `(sin(pi x), cos(pi x))` with exact zeros at the integers and
/// half-integers.
pub(crate) fn sincospi(x: f64) -> (f64, f64) {
    // Reduce to t in [-1/4, 1/4] around the nearest multiple of 1/2.
    let k = (2.0 * x).round();
    let t = x - 0.5 * k;
    let (s, c) = (PI * t).sin_cos();
    match (k as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// `sin(pi z)` for complex `z`.
///
/// The real reduction is exact, so integer and half-integer real parts give
/// clean zeros in the corresponding component.
pub fn sinpi_complex(z: Complex64) -> Result<Complex64> {
    cos_sin_guard(z)?;
    let (s, c) = sincospi(z.re);
    let y = PI * z.im;
    Ok(Complex64::new(s * y.cosh(), c * y.sinh()))
}

/// `cos(pi z)` for complex `z`.
pub fn cospi_complex(z: Complex64) -> Result<Complex64> {
    cos_sin_guard(z)?;
    let (s, c) = sincospi(z.re);
    let y = PI * z.im;
    Ok(Complex64::new(c * y.cosh(), -s * y.sinh()))
}

fn cos_sin_guard(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("sinpi"));
    }
    if PI * z.im.abs() > EXP_BUDGET {
        return Err(Error::Overflow {
            what: "sinpi",
            im: z.im.abs(),
        });
    }
    Ok(())
}
