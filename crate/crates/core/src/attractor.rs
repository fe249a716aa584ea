//! Time-averaged radiation force and power for a cavity whose mirror
//! oscillates as `x(t) = mean_position + amplitude cos(mech_freq t)`, plus
//! the attractor-diagram sweep built on them.
//!
//! Units are normalized with `hbar = 1`. Power is reported as
//! `<|alpha|^2 xdot>`; the mechanical power is `coupling` times that.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::besselsum::{pi_over_sin_pair, sum_s1};
use crate::complexfn::besselj_int;
use crate::error::{finite_real, Error, Result};

/// Parameters of the driven cavity with an oscillating mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractorParams {
    /// Cavity energy decay rate (kappa).
    pub cavity_decay: f64,
    /// Laser detuning from the bare cavity resonance.
    pub detuning: f64,
    /// Cavity frequency shift per unit displacement (G).
    pub coupling: f64,
    /// Mechanical frequency.
    pub mech_freq: f64,
    /// Intracavity photon number at resonance, `|alpha_max|^2`.
    pub max_photons: f64,
    /// Mechanical damping rate.
    pub mech_damping: f64,
    /// Mean mirror displacement.
    pub mean_position: f64,
    /// Oscillation amplitude.
    pub amplitude: f64,
    /// Stiffness scale in the force balance `mass * mech_freq^2 * xbar = <F>`.
    pub mass: f64,
}

impl Default for AttractorParams {
    fn default() -> Self {
        AttractorParams {
            cavity_decay: 1.0,
            detuning: 0.0,
            coupling: 1.0,
            mech_freq: 1.0,
            max_photons: 1.0,
            mech_damping: 0.0,
            mean_position: 0.0,
            amplitude: 0.0,
            mass: 1.0,
        }
    }
}

impl AttractorParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidInput(format!("{what}, got {v}")));
        if !(self.cavity_decay > 0.0 && self.cavity_decay.is_finite()) {
            return bad("cavity decay must be positive", self.cavity_decay);
        }
        if !(self.mech_freq > 0.0 && self.mech_freq.is_finite()) {
            return bad("mechanical frequency must be positive", self.mech_freq);
        }
        if !(self.max_photons >= 0.0 && self.max_photons.is_finite()) {
            return bad("photon number must be non-negative", self.max_photons);
        }
        if !(self.mech_damping >= 0.0) {
            return bad("mechanical damping must be non-negative", self.mech_damping);
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return bad("amplitude must be non-negative", self.amplitude);
        }
        if !(self.mass > 0.0) {
            return bad("mass must be positive", self.mass);
        }
        for (name, v) in [
            ("detuning", self.detuning),
            ("coupling", self.coupling),
            ("mean position", self.mean_position),
        ] {
            if !v.is_finite() {
                return bad(name, v);
            }
        }
        Ok(())
    }

    /// Effective detuning in units of the mechanical frequency (r).
    pub fn scaled_detuning(&self) -> f64 {
        (self.coupling * self.mean_position + self.detuning) / self.mech_freq
    }

    /// Half linewidth in units of the mechanical frequency (c).
    pub fn scaled_half_width(&self) -> f64 {
        self.cavity_decay / (2.0 * self.mech_freq)
    }

    /// Modulation index `-coupling * amplitude / mech_freq` (X), the Bessel
    /// argument of every series.
    pub fn modulation(&self) -> f64 {
        -self.coupling * self.amplitude / self.mech_freq
    }

    /// Complex order `r + i c` of the force closed form.
    pub fn force_order(&self) -> Complex64 {
        Complex64::new(self.scaled_detuning(), self.scaled_half_width())
    }

    /// Complex order `-r + i c` of the power closed form.
    pub fn power_order(&self) -> Complex64 {
        Complex64::new(-self.scaled_detuning(), self.scaled_half_width())
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_mean_position(mut self, xbar: f64) -> Self {
        self.mean_position = xbar;
        self
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }
}

/// Fourier coefficient `alpha_n` of the steady-state intracavity field,
/// `alpha(t) = e^{i phi(t)} sum_n alpha_n e^{i n mech_freq t}` with
/// `phi(t) = (G A / mech_freq) sin(mech_freq t)`.
pub fn fourier_coefficient(n: i64, p: &AttractorParams) -> Complex64 {
    let amp = 0.5 * p.max_photons.sqrt();
    let den = Complex64::new(
        0.5,
        n as f64 * p.mech_freq / p.cavity_decay
            - (p.coupling * p.mean_position + p.detuning) / p.cavity_decay,
    );
    amp * besselj_int(n, p.modulation()) / den
}

/// Time-averaged photon number `<|alpha|^2> = sum_n |alpha_n|^2`.
pub fn photon_number(p: &AttractorParams) -> Result<f64> {
    p.validate()?;
    let rho = p.force_order();
    let x = p.modulation().abs();
    let s = pi_over_sin_pair(rho, rho, -rho, x)?;
    let pref = p.cavity_decay * p.max_photons / (2.0 * p.mech_freq);
    finite_real("photon number", -pref * s.im)
}

/// Time-averaged radiation force `coupling * <|alpha|^2>`.
pub fn force_avg(p: &AttractorParams) -> Result<f64> {
    Ok(p.coupling * photon_number(p)?)
}

/// Time-averaged `<|alpha|^2 xdot> = A mech_freq Im sum_n alpha_n^* alpha_{n+1}`.
///
/// Splitting `1/((n - r + ic)(n + 1 - r - ic))` into simple fractions maps
/// the series onto two order-offset-one kernels at orders `nu - 1` and
/// `nu^*`, where `nu = -r + ic`.
pub fn power_input(p: &AttractorParams) -> Result<f64> {
    p.validate()?;
    if p.amplitude == 0.0 {
        return Ok(0.0);
    }
    let nu = p.power_order();
    let c = p.scaled_half_width();
    let x = p.modulation();
    let bracket = (sum_s1(nu - 1.0, x)? - sum_s1(nu.conj(), x)?) / Complex64::new(1.0, -2.0 * c);
    let pref = p.amplitude * p.cavity_decay.powi(2) * p.max_photons / (4.0 * p.mech_freq);
    finite_real("power input", pref * bracket.im)
}

/// `sinh(pi c) / (cosh(2 pi c) - cos(2 pi r))`.
pub fn oscillation_weight(r: f64, c: f64) -> f64 {
    (PI * c).sinh() / ((2.0 * PI * c).cosh() - (2.0 * PI * r).cos())
}

/// Large-amplitude force
/// `coupling * kappa |alpha_max|^2 / (mech_freq |X|) * b * (cosh(pi c) + cos(pi r) sin(2|X|))`.
pub fn force_avg_asymptotic(p: &AttractorParams) -> f64 {
    let r = p.scaled_detuning();
    let c = p.scaled_half_width();
    let x = p.modulation().abs();
    let b = oscillation_weight(r, c);
    p.coupling * p.cavity_decay * p.max_photons / (p.mech_freq * x)
        * b
        * ((PI * c).cosh() + (PI * r).cos() * (2.0 * x).sin())
}

/// Amplitude-independent coefficient
/// `8 c cosh(pi c) sin(pi r) / ((4c^2 + 1)(cosh(2 pi c) - cos(2 pi r)))`
/// of the large-amplitude power.
pub fn large_amplitude_power_coefficient(r: f64, c: f64) -> f64 {
    8.0 * c * (PI * c).cosh() * (PI * r).sin()
        / ((4.0 * c * c + 1.0) * ((2.0 * PI * c).cosh() - (2.0 * PI * r).cos()))
}

/// Large-amplitude power
/// `-(kappa^2 |alpha_max|^2 / (4 G)) * K(r, c) * cos(2X)`, with `K` from
/// [`large_amplitude_power_coefficient`].
pub fn power_input_asymptotic(p: &AttractorParams) -> f64 {
    let r = p.scaled_detuning();
    let c = p.scaled_half_width();
    let x = p.modulation();
    -(p.cavity_decay.powi(2) * p.max_photons / (4.0 * p.coupling))
        * large_amplitude_power_coefficient(r, c)
        * (2.0 * x).cos()
}

/// Small-amplitude ratio of radiation power to `pi A^2 mech_freq`,
/// `(2/pi) coupling c^3 r / ((r^2 + c^2)(c^2 + (r-1)^2)(c^2 + (r+1)^2))`,
/// where `coupling = G |alpha_max|^2 / mech_freq`. Positive on the blue side
/// `r > 0`, where the light amplifies the motion.
pub fn small_amp_ratio(r: f64, c: f64, coupling: f64) -> f64 {
    let c2 = c * c;
    2.0 / PI * coupling * c2 * c * r
        / ((r * r + c2) * (c2 + (r - 1.0).powi(2)) * (c2 + (r + 1.0).powi(2)))
}

/// Location and value of the maximum of [`small_amp_ratio`] over `r` at one
/// value of `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityExtremum {
    pub half_width: f64,
    pub r_max: f64,
    pub f_max: f64,
}

const INV_GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of `f` on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut x1 = b - INV_GOLDEN * (b - a);
    let mut x2 = a + INV_GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// For each `c`, the maximum of `|f(r)|` located by a coarse scan in `r`
/// refined with golden-section search.
pub fn stability_extrema_scan(coupling: f64, c_grid: &[f64]) -> Result<Vec<StabilityExtremum>> {
    c_grid
        .iter()
        .map(|&c| {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidInput(format!("c must be positive, got {c}")));
            }
            let g = |r: f64| small_amp_ratio(r, c, coupling).abs();
            let r_hi = 4.0 + 2.0 * c;
            let n = 4000;
            let step = r_hi / n as f64;
            let best = (1..=n)
                .map(|k| k as f64 * step)
                .max_by(|a, b| g(*a).total_cmp(&g(*b)))
                .unwrap_or(step);
            let r = golden_max(g, (best - step).max(0.0), best + step, 1e-12);
            Ok(StabilityExtremum {
                half_width: c,
                r_max: r,
                f_max: g(r),
            })
        })
        .collect()
}

/// Residual `mass * mech_freq^2 * xbar - <F>(xbar)` of the force balance.
pub fn force_balance_residual(p: &AttractorParams, xbar: f64) -> Result<f64> {
    let q = p.with_mean_position(xbar);
    Ok(p.mass * p.mech_freq.powi(2) * xbar - force_avg(&q)?)
}

const XBAR_TOL: f64 = 1e-10;
const XBAR_MAX_ITER: usize = 10_000;

/// Damped fixed-point iteration for the force balance at fixed drive.
fn iterate_xbar(p: &AttractorParams, start: f64) -> Result<f64> {
    let stiffness = p.mass * p.mech_freq.powi(2);
    let map = |x: f64| -> Result<f64> { Ok(force_avg(&p.with_mean_position(x))? / stiffness) };
    let mut x = start;
    let mut lambda = 1.0;
    let mut fx = map(x)?;
    let mut res = (fx - x).abs();
    for _ in 0..XBAR_MAX_ITER {
        if res * stiffness <= XBAR_TOL {
            return Ok(x);
        }
        let trial = (1.0 - lambda) * x + lambda * fx;
        let ft = map(trial)?;
        let rt = (ft - trial).abs();
        if rt < res {
            x = trial;
            fx = ft;
            res = rt;
            lambda = (lambda * 1.5).min(1.0);
        } else {
            lambda *= 0.5;
            if lambda < 1e-12 {
                break;
            }
        }
    }
    Err(Error::NoConvergence {
        what: "force balance",
        iterations: XBAR_MAX_ITER,
        residual: res * stiffness,
    })
}

/// Mean displacement solving `mass * mech_freq^2 * xbar = <F>(xbar, A)`.
///
/// The drive is ramped from zero so that the returned branch is the one
/// connected to `xbar = 0` in the undriven cavity.
pub fn solve_xbar(p: &AttractorParams, amplitude: f64) -> Result<f64> {
    let base = p.with_amplitude(amplitude);
    base.validate()?;
    if base.max_photons == 0.0 {
        return Ok(0.0);
    }
    let steps = 16;
    let mut x = 0.0;
    for k in 1..=steps {
        let mut q = base;
        q.max_photons = base.max_photons * k as f64 / steps as f64;
        x = iterate_xbar(&q, x)?;
    }
    Ok(x)
}

/// All force-balance solutions in `[lo, hi]`, located by sign changes of the
/// residual on `samples` points and refined by bisection.
pub fn enumerate_xbar(
    p: &AttractorParams,
    amplitude: f64,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Result<Vec<f64>> {
    let q = p.with_amplitude(amplitude);
    q.validate()?;
    if !(hi > lo) || samples < 2 {
        return Err(Error::InvalidInput(
            "enumerate_xbar needs lo < hi and samples >= 2".into(),
        ));
    }
    let grid: Vec<f64> = (0..samples)
        .map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64)
        .collect();
    let vals = grid
        .iter()
        .map(|&x| force_balance_residual(&q, x))
        .collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for k in 0..samples - 1 {
        let (mut a, mut b) = (grid[k], grid[k + 1]);
        let (mut fa, fb) = (vals[k], vals[k + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = force_balance_residual(&q, m)?;
            if fm.abs() <= XBAR_TOL || (b - a) < 1e-15 * (1.0 + m.abs()) {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    Ok(roots)
}

/// One cell of the attractor diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub amplitude: f64,
    pub detuning: f64,
    pub xbar: f64,
    /// Radiation power over frictional loss `mech_damping A^2 mech_freq^2 / 2`.
    pub ratio: f64,
    pub force: f64,
    pub power: f64,
    /// Set when the cell could not be evaluated; the numeric fields are NaN.
    pub failure: Option<Error>,
}

fn sweep_cell(p: &AttractorParams, amplitude: f64, detuning: f64, solve: bool) -> SweepRecord {
    let eval = || -> Result<(f64, f64, f64, f64)> {
        let base = p.with_detuning(detuning).with_amplitude(amplitude);
        let xbar = if solve {
            solve_xbar(&base, amplitude)?
        } else {
            base.mean_position
        };
        let q = base.with_mean_position(xbar);
        let force = force_avg(&q)?;
        let power = power_input(&q)?;
        let loss = q.mech_damping * amplitude * amplitude * q.mech_freq.powi(2) / 2.0;
        Ok((xbar, q.coupling * power / loss, force, power))
    };
    match eval() {
        Ok((xbar, ratio, force, power)) => SweepRecord {
            amplitude,
            detuning,
            xbar,
            ratio,
            force,
            power,
            failure: None,
        },
        Err(e) => SweepRecord {
            amplitude,
            detuning,
            xbar: f64::NAN,
            ratio: f64::NAN,
            force: f64::NAN,
            power: f64::NAN,
            failure: Some(e),
        },
    }
}

/// Attractor diagram over `amplitudes x detunings`, amplitude-major.
///
/// Cells are evaluated in parallel; the output order is the grid order.
pub fn attractor_sweep(
    amplitudes: &[f64],
    detunings: &[f64],
    p: &AttractorParams,
    self_consistent: bool,
) -> Vec<SweepRecord> {
    let cells: Vec<(f64, f64)> = amplitudes
        .iter()
        .flat_map(|&a| detunings.iter().map(move |&d| (a, d)))
        .collect();
    cells
        .par_iter()
        .map(|&(a, d)| sweep_cell(p, a, d, self_consistent))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_is_a_single_lorentzian() {
        let p = AttractorParams {
            detuning: 0.5,
            ..AttractorParams::default()
        };
        let a0 = fourier_coefficient(0, &p);
        assert_eq!(fourier_coefficient(1, &p), Complex64::new(0.0, 0.0));
        let n = photon_number(&p).unwrap();
        assert!((n - a0.norm_sqr()).abs() < 1e-14);
        assert_eq!(power_input(&p).unwrap(), 0.0);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let x = golden_max(|x| -(x - 0.3).powi(2), -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-9);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let p = AttractorParams {
            cavity_decay: 0.0,
            ..AttractorParams::default()
        };
        assert!(matches!(force_avg(&p), Err(Error::InvalidInput(_))));
    }
}
