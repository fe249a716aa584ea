use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::dd::{CDd, Dd};
use super::gamma::{ln_gamma_complex, rgamma_complex};
use crate::error::{finite, Error, Result};

/// Truncation and regime selection for [`besselj_complex_order`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    max_terms: usize,
    rel_tol: f64,
    arg_switch: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64, arg_switch: f64) -> Result<Self> {
        if max_terms < 16 {
            return Err(Error::InvalidInput(format!(
                "max_terms must be at least 16, got {max_terms}"
            )));
        }
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidInput(format!(
                "rel_tol must lie in (0, 1), got {rel_tol}"
            )));
        }
        if !(arg_switch > 0.0 && arg_switch.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "arg_switch must be positive, got {arg_switch}"
            )));
        }
        Ok(SeriesControl {
            max_terms,
            rel_tol,
            arg_switch,
        })
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn arg_switch(&self) -> f64 {
        self.arg_switch
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 500,
            rel_tol: 1e-14,
            arg_switch: 30.0,
        }
    }
}

/// A Bessel value with a bound on its absolute error.
#[derive(Debug, Clone, Copy)]
pub struct BesselEstimate {
    pub value: Complex64,
    pub err: f64,
}

/// Relative accuracy of the Lanczos Gamma on the series range.
const LANCZOS_REL: f64 = 2e-15;

/// Unit roundoff of double-double arithmetic.
const DD_EPS: f64 = 4.93e-32;

/// Power series in double-double.
///
/// With `M = max(0, ceil(-Re nu))` every `1/Gamma(nu + m + 1)` is written as
/// `w_m / Gamma(nu + M + 1)`, where `Re(nu + M + 1) >= 1`. For `m <= M`,
/// `w_m` is the finite product `prod_{k=m+1}^{M} (nu + k)`, which vanishes
/// exactly at negative integer orders.
fn series(nu: Complex64, x: f64, ctl: &SeriesControl) -> Result<BesselEstimate> {
    let shift = (-nu.re).ceil().max(0.0) as usize;
    let z0 = nu + (shift as f64 + 1.0);
    let ln_pow = nu * (0.5 * x).ln();
    let ln_gam = ln_gamma_complex(z0)?;
    let pref = finite("besselj", (ln_pow - ln_gam).exp())?;
    // Absolute rounding in the exponent is relative error in the prefactor.
    let pref_rel = 4.0 * f64::EPSILON * (ln_pow.norm() + ln_gam.norm() + 1.0) + LANCZOS_REL;

    let nu_dd = CDd::from_c64(nu);
    let shifted = |k: usize| nu_dd + CDd::from_c64(Complex64::new(k as f64, 0.0));

    // Products w_m for m < shift, built from the top.
    let mut w = vec![CDd::from_c64(Complex64::new(1.0, 0.0)); shift + 1];
    for m in (0..shift).rev() {
        w[m] = w[m + 1] * shifted(m + 1);
    }

    let neg_q = -(Dd::new(0.5 * x) * Dd::new(0.5 * x));
    let mut coef = Dd::new(1.0); // (-q)^m / m!
    let mut term = w[0];
    let mut sum = term;
    let mut peak = term.norm1();
    let mut m = 0usize;
    loop {
        m += 1;
        if m > ctl.max_terms {
            return Err(Error::Convergence {
                what: "besselj series",
                terms: m - 1,
                estimate: term.norm1() / sum.norm1().max(f64::MIN_POSITIVE),
            });
        }
        coef = coef * neg_q * Dd::new(m as f64).recip();
        term = if m <= shift {
            w[m].scale(coef)
        } else {
            term.scale(neg_q * Dd::new(m as f64).recip()) * shifted(m).recip()
        };
        sum = sum + term;
        peak = peak.max(term.norm1());
        let t = term.norm1();
        // Past the peak the terms fall off superexponentially.
        if m > shift && (m as f64) > 0.5 * x && t <= 1e-3 * ctl.rel_tol * sum.norm1() {
            break;
        }
        if sum.norm1() == 0.0 && t == 0.0 && m > shift {
            break;
        }
    }
    let s = sum.to_c64();
    let value = finite("besselj", pref * s)?;
    let rounding = 4.0 * DD_EPS * peak * (m as f64) + 1e-16 * s.norm();
    let trunc = term.norm1() * 2.0;
    Ok(BesselEstimate {
        value,
        err: pref.norm() * (rounding + trunc) + (pref_rel + 8.0 * f64::EPSILON) * value.norm(),
    })
}

/// Hankel large-argument expansion with optimal truncation.
fn hankel(nu: Complex64, x: f64, ctl: &SeriesControl) -> Result<BesselEstimate> {
    let mu4 = 4.0 * nu * nu;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev_mag = f64::INFINITY;
    let mut omitted = f64::INFINITY;
    let min_k = (nu.norm() + 1.0) as usize;
    for k in 1..=ctl.max_terms {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu4 - odd * odd) / (8.0 * k as f64 * x);
        let mag = next.norm();
        let scale = p.norm().max(q.norm());
        if k > min_k && mag > prev_mag {
            omitted = mag;
            break;
        }
        if mag <= 1e-3 * ctl.rel_tol * scale {
            omitted = mag;
            break;
        }
        // a_k / x^k enters P with sign (-1)^{k/2} for even k and Q with
        // (-1)^{(k-1)/2} for odd k.
        match k % 4 {
            0 => p += next,
            1 => q += next,
            2 => p -= next,
            _ => q -= next,
        }
        term = next;
        prev_mag = mag;
    }
    let theta = nu * FRAC_PI_2 + FRAC_PI_4;
    let (sx, cx) = x.sin_cos();
    let cos_chi = cx * theta.cos() + sx * theta.sin();
    let sin_chi = sx * theta.cos() - cx * theta.sin();
    let amp = (2.0 / (PI * x)).sqrt();
    let value = finite("besselj hankel", amp * (p * cos_chi - q * sin_chi))?;
    let envelope = amp * (cos_chi.norm() + sin_chi.norm());
    let err = envelope * omitted + 8.0 * f64::EPSILON * envelope;
    if !(omitted <= ctl.rel_tol) {
        return Err(Error::Convergence {
            what: "besselj hankel",
            terms: ctl.max_terms,
            estimate: omitted,
        });
    }
    Ok(BesselEstimate { value, err })
}

/// [`besselj_complex_order`] together with a bound on the absolute error of
/// the returned value.
pub fn besselj_complex_order_estimated(
    nu: Complex64,
    x: f64,
    ctl: &SeriesControl,
) -> Result<BesselEstimate> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "besselj_complex_order needs a finite x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        let value = if nu == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else if nu.re > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            return Err(Error::InvalidInput(format!(
                "J_nu(0) is unbounded for nu = {nu}"
            )));
        };
        return Ok(BesselEstimate { value, err: 0.0 });
    }
    if x <= ctl.arg_switch {
        series(nu, x, ctl)
    } else {
        hankel(nu, x, ctl)
    }
}

/// Bessel function of the first kind of complex order `nu` at real `x >= 0`.
///
/// Uses a double-double power series for `x <= arg_switch` and the Hankel
/// expansion beyond.
pub fn besselj_complex_order(nu: Complex64, x: f64, ctl: &SeriesControl) -> Result<Complex64> {
    besselj_complex_order_estimated(nu, x, ctl).map(|e| e.value)
}

/// Leading-order large-argument form `sqrt(2/(pi x)) cos(x - nu pi/2 - pi/4)`.
pub fn besselj_complex_order_asymptotic(nu: Complex64, x: f64) -> Complex64 {
    let chi = Complex64::new(x, 0.0) - nu * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * chi.cos()
}

/// The product `J_p(x) J_q(x)`, including the `x = 0` limit when `p + q = 0`.
pub fn besselj_pair(p: Complex64, q: Complex64, x: f64, ctl: &SeriesControl) -> Result<Complex64> {
    if x == 0.0 {
        let total = p + q;
        if total == Complex64::new(0.0, 0.0) {
            return finite(
                "besselj_pair",
                rgamma_complex(1.0 + p)? * rgamma_complex(1.0 + q)?,
            );
        }
        if total.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::InvalidInput(format!(
            "J_p(0) J_q(0) is unbounded for p + q = {total}"
        )));
    }
    let a = besselj_complex_order(p, x, ctl)?;
    let b = besselj_complex_order(q, x, ctl)?;
    finite("besselj_pair", a * b)
}
