use std::f64::consts::PI;

use num_complex::Complex64;

use super::trig::sinpi_complex;
use crate::error::{finite, Error, Result};

// Lanczos coefficients for g = 7, n = 9 (the set published with the GNU
// Scientific Library).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const POLE_RADIUS: f64 = 1e-14;

fn check_pole(z: Complex64) -> Result<()> {
    if z.re <= 0.5 {
        let k = z.re.round();
        if k <= 0.0 && (z - Complex64::new(k, 0.0)).norm() < POLE_RADIUS {
            return Err(Error::Pole { z });
        }
    }
    Ok(())
}

/// `ln Gamma(z)` for `Re z >= 1/2`, on an unspecified branch of the logarithm.
/// Callers only exponentiate it.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm + 0.5) * t.ln() - t + a.ln()
}

/// `ln Gamma(z)` for any non-pole `z`, branch unspecified.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        return finite("ln_gamma", ln_gamma_right(z));
    }
    // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
    let s = sinpi_complex(z)?;
    finite(
        "ln_gamma",
        Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z),
    )
}

/// Complex Gamma function.
///
/// Lanczos approximation on `Re z >= 1/2`, reflection below that line.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        return finite("gamma", ln_gamma_right(z).exp());
    }
    let s = sinpi_complex(z)?;
    finite("gamma", PI / (s * ln_gamma_right(1.0 - z).exp()))
}

/// `1 / Gamma(z)`, which is entire; returns zero at the poles of Gamma.
pub fn rgamma_complex(z: Complex64) -> Result<Complex64> {
    match gamma_complex(z) {
        Ok(g) => Ok(1.0 / g),
        Err(Error::Pole { .. }) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}
