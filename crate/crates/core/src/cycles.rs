//! Amplitude drift and diffusion of a self-oscillating optomechanical
//! resonator in the phase-averaged Fokker-Planck description, limit-cycle
//! detection, and the amplitude-dependent Kerr detuning.
//!
//! All Bessel functions are evaluated at `eta r` with `eta = 2 g0 / omega_m`.
//! The coefficients `h_n = kappa + i(n omega_m - Delta_eff)` enter only as
//! linear factors in `n`, so each series is reduced to the three kernels of
//! [`crate::besselsum`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::besselsum::{pi_over_sin_pair, sum_rational, sum_s0, sum_s1, LinearFactor};
use crate::complexfn::besselj_int;
use crate::error::{finite_real, Error, Result};

/// Parameters of the phase-averaged amplitude equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleParams {
    pub mech_freq: f64,
    /// Cavity amplitude decay rate.
    pub cavity_decay: f64,
    /// Bare laser detuning.
    pub detuning: f64,
    pub single_photon_coupling: f64,
    /// Drive strength; enters only through `g0 E^2` and `g0^2 E^2`.
    pub drive: f64,
    pub mech_damping: f64,
    pub thermal_occupation: f64,
    /// Kerr strength, nominally `g0^2 / omega_m`.
    pub kerr: f64,
    /// Detuning seen by the mean field.
    pub eff_detuning: f64,
    /// Detuning seen by the fluctuations.
    pub fluct_detuning: f64,
}

impl Default for CycleParams {
    fn default() -> Self {
        CycleParams {
            mech_freq: 1.0,
            cavity_decay: 0.6,
            detuning: 0.6,
            single_photon_coupling: 0.5,
            drive: 1.0,
            mech_damping: 0.0,
            thermal_occupation: 0.0,
            kerr: 0.25,
            eff_detuning: 0.6,
            fluct_detuning: 0.6,
        }
    }
}

/// How the effective detunings are obtained at each amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetuningMode {
    /// Use `eff_detuning` and `fluct_detuning` as given.
    #[default]
    Static,
    /// Solve the Kerr fixed point at every amplitude and set the fluctuation
    /// detuning to `2 Delta_eff - Delta`.
    Dynamical,
}

impl CycleParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidInput(format!("{what}, got {v}")));
        if !(self.mech_freq > 0.0 && self.mech_freq.is_finite()) {
            return bad("mechanical frequency must be positive", self.mech_freq);
        }
        if !(self.cavity_decay > 0.0 && self.cavity_decay.is_finite()) {
            return bad("cavity decay must be positive", self.cavity_decay);
        }
        if !(self.mech_damping >= 0.0) {
            return bad("mechanical damping must be non-negative", self.mech_damping);
        }
        if !(self.thermal_occupation >= 0.0) {
            return bad(
                "thermal occupation must be non-negative",
                self.thermal_occupation,
            );
        }
        for (name, v) in [
            ("detuning", self.detuning),
            ("single-photon coupling", self.single_photon_coupling),
            ("drive", self.drive),
            ("kerr", self.kerr),
            ("effective detuning", self.eff_detuning),
            ("fluctuation detuning", self.fluct_detuning),
        ] {
            if !v.is_finite() {
                return bad(name, v);
            }
        }
        Ok(())
    }

    /// Sets both effective detunings to `d`.
    pub fn with_eff_detuning(mut self, d: f64) -> Self {
        self.eff_detuning = d;
        self.fluct_detuning = d;
        self
    }

    pub fn with_detunings(mut self, eff: f64, fluct: f64) -> Self {
        self.eff_detuning = eff;
        self.fluct_detuning = fluct;
        self
    }

    /// `eta = 2 g0 / omega_m`.
    pub fn bessel_scale(&self) -> f64 {
        2.0 * self.single_photon_coupling / self.mech_freq
    }

    /// `(Delta_eff + i kappa) / omega_m`.
    pub fn order(&self) -> Complex64 {
        Complex64::new(self.eff_detuning, self.cavity_decay) / self.mech_freq
    }

    /// `(Delta_tilde_eff + i kappa) / omega_m`.
    pub fn fluct_order(&self) -> Complex64 {
        Complex64::new(self.fluct_detuning, self.cavity_decay) / self.mech_freq
    }

    /// `g0 E^2`, the drift prefactor.
    pub fn drift_strength(&self) -> f64 {
        self.single_photon_coupling * self.drive * self.drive
    }

    /// `g0^2 E^2`, the diffusion prefactor.
    pub fn diffusion_strength(&self) -> f64 {
        self.single_photon_coupling.powi(2) * self.drive * self.drive
    }

    /// Damping unit `g0 E^2 / omega_m^2`.
    pub fn damping_unit(&self) -> f64 {
        self.drift_strength() / self.mech_freq.powi(2)
    }

    /// `h_{n+shift}` as a linear factor `i omega (n - (nu - shift))`.
    fn h(&self, shift: i64) -> LinearFactor {
        LinearFactor::new(
            Complex64::new(0.0, self.mech_freq),
            self.order() - shift as f64,
        )
    }

    /// `h*_{n+shift} = -i omega (n - (nu* - shift))`.
    fn h_conj(&self, shift: i64) -> LinearFactor {
        LinearFactor::new(
            Complex64::new(0.0, -self.mech_freq),
            self.order().conj() - shift as f64,
        )
    }

    fn ht(&self, shift: i64) -> LinearFactor {
        LinearFactor::new(
            Complex64::new(0.0, self.mech_freq),
            self.fluct_order() - shift as f64,
        )
    }

    fn ht_conj(&self, shift: i64) -> LinearFactor {
        LinearFactor::new(
            Complex64::new(0.0, -self.mech_freq),
            self.fluct_order().conj() - shift as f64,
        )
    }

    /// Rejects `Delta_tilde_eff - Delta_eff = +/- omega_m`, where simple-fraction
    /// poles coincide.
    pub fn check_nondegenerate(&self) -> Result<()> {
        let offset = self.fluct_detuning - self.eff_detuning;
        let tol = 1e-10 * self.mech_freq;
        if (offset - self.mech_freq).abs() < tol || (offset + self.mech_freq).abs() < tol {
            return Err(Error::DegenerateDetuning { offset });
        }
        Ok(())
    }

    /// Parameters with the detunings resolved at amplitude `r`.
    pub fn resolve(&self, r: f64, mode: DetuningMode) -> Result<CycleParams> {
        match mode {
            DetuningMode::Static => Ok(*self),
            DetuningMode::Dynamical => {
                let d = solve_delta_eff(r, self)?;
                Ok(self.with_detunings(d, 2.0 * d - self.detuning))
            }
        }
    }
}

/// Simple-fraction constants of the diffusion and Wigner-diffusion series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialFractionConstants {
    pub b: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    /// `1 / (omega - Delta_eff + Delta_tilde_eff - 2 i kappa)`.
    pub a_w: Complex64,
    /// `omega - 2 i kappa`.
    pub beta: Complex64,
}

impl PartialFractionConstants {
    pub fn new(p: &CycleParams) -> Result<Self> {
        p.validate()?;
        p.check_nondegenerate()?;
        let w = p.mech_freq;
        let k = p.cavity_decay;
        let d = w + p.fluct_detuning - p.eff_detuning;
        let e = w - p.fluct_detuning + p.eff_detuning;
        let i = Complex64::i();
        let w_k = Complex64::new(w, -k);
        Ok(PartialFractionConstants {
            b: 1.0 / (d * (d - 2.0 * k * i)),
            c1: 1.0 / (2.0 * d * w_k),
            c2: 1.0 / (d * (e - 2.0 * k * i)),
            c3: 1.0 / (2.0 * w_k * (e - 2.0 * k * i)),
            a_w: 1.0 / (d - 2.0 * k * i),
            beta: Complex64::new(w, -2.0 * k),
        })
    }
}

fn check_amplitude(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "amplitude r must be >= 0, got {r}"
        )));
    }
    Ok(())
}

/// `J_p(x) J_q(x) / sin(pi s)`.
fn pair_over_sin(s: Complex64, p: Complex64, q: Complex64, x: f64) -> Result<Complex64> {
    Ok(pi_over_sin_pair(s, p, q, x)? / PI)
}

/// Optical part of the drift, `g0 E^2 sum_n Im[J_{n-1} J_n / (h_{n-1} h*_n)]`.
///
/// With `1/(h_{n-1} h*_n) = (1/h_{n-1} + 1/h*_n) / (2 kappa - i omega)` the
/// series becomes two order-offset-one kernels, equivalent to
/// `(pi g0 E^2 / omega) Re[(J_{nu*} J_{1-nu*} / sin(pi nu*) + J_{1+nu} J_{-nu} / sin(pi nu)) / (2 kappa - i omega)]`.
pub fn optical_drift(r: f64, p: &CycleParams) -> Result<f64> {
    p.validate()?;
    check_amplitude(r)?;
    let x = p.bessel_scale() * r;
    let w = p.mech_freq;
    let nu = p.order();
    let i = Complex64::i();
    let sum = -i / w * sum_s1(-1.0 - nu, x)? + i / w * sum_s1(-nu.conj(), x)?;
    let v = sum / Complex64::new(2.0 * p.cavity_decay, -w);
    finite_real("drift", p.drift_strength() * v.im)
}

/// Drift `mu(r) = -gamma r + optical_drift(r)`.
pub fn drift_mu(r: f64, p: &CycleParams) -> Result<f64> {
    Ok(-p.mech_damping * r + optical_drift(r, p)?)
}

/// Q-function diffusion `D(r) = gamma (nbar + 1)/2 + D_a + D_b`.
pub fn diffusion_d(r: f64, p: &CycleParams) -> Result<f64> {
    check_amplitude(r)?;
    let k = PartialFractionConstants::new(p)?;
    let x = p.bessel_scale() * r;
    let nu = p.order();
    let nus = nu.conj();
    let nut = p.fluct_order();
    let nuts = nut.conj();
    let one = Complex64::new(1.0, 0.0);
    let s = PI / (2.0 * p.mech_freq) * p.diffusion_strength();
    let da = -s
        * (k.b
            * (pair_over_sin(nu, nu, -nu, x)? + pair_over_sin(nuts, one + nuts, -one - nuts, x)?))
        .im;
    let db = s
        * (k.c1 * pair_over_sin(nu, nu, 2.0 - nu, x)?
            + k.c2 * pair_over_sin(nut, one + nut, one - nut, x)?
            + k.c3 * pair_over_sin(nus, 2.0 + nus, -nus, x)?)
        .im;
    finite_real(
        "diffusion",
        0.5 * p.mech_damping * (p.thermal_occupation + 1.0) + da + db,
    )
}

fn thermal_wigner(p: &CycleParams) -> f64 {
    0.25 * p.mech_damping * (2.0 * p.thermal_occupation + 1.0)
}

/// Wigner diffusion for `Delta_tilde_eff = Delta_eff`.
pub fn wigner_diffusion(r: f64, p: &CycleParams) -> Result<f64> {
    p.validate()?;
    check_amplitude(r)?;
    if p.fluct_detuning != p.eff_detuning {
        return Err(Error::ParameterMismatch(format!(
            "equal-detuning Wigner diffusion needs Delta_tilde_eff = Delta_eff, got {} and {}",
            p.fluct_detuning, p.eff_detuning
        )));
    }
    let x = p.bessel_scale() * r;
    let w = p.mech_freq;
    let kap = p.cavity_decay;
    let nu = p.order();
    let nus = nu.conj();
    let one = Complex64::new(1.0, 0.0);
    let beta = Complex64::new(w, -2.0 * kap);
    let w2 = w * w;
    let jj = pair_over_sin(nu, -nu, nu, x)?;
    let d1 = -PI / w2 * (jj / beta - pair_over_sin(nu, nu + one, -nu - one, x)? / beta.conj()).im;
    let d2 = -PI / w2 * (jj / beta.conj() - pair_over_sin(nu, nu - one, one - nu, x)? / beta).im;
    let d3 = PI / (2.0 * w2 * Complex64::new(w, 2.0 * kap))
        * (kap / Complex64::new(w, kap)
            * (pair_over_sin(nu, nu + 2.0, -nu, x)? - pair_over_sin(nus, nus, 2.0 - nus, x)?)
            - Complex64::i() * pair_over_sin(nu, nu + one, one - nu, x)?
            + Complex64::i() * pair_over_sin(nus, nus + one, one - nus, x)?);
    let optical = 0.25 * p.diffusion_strength() * (d1 + d2 + 2.0 * d3.re);
    finite_real("wigner diffusion", thermal_wigner(p) + optical)
}

/// Wigner diffusion for arbitrary `Delta_tilde_eff`, with every term of
/// `kappa / |h~_{n+1}|^2 |J_{n+2}/h_{n+2} - J_n/h_n|^2` split into simple
/// fractions in `n`.
pub fn wigner_diffusion_general(r: f64, p: &CycleParams) -> Result<f64> {
    p.validate()?;
    check_amplitude(r)?;
    p.check_nondegenerate()?;
    let x = p.bessel_scale() * r;
    let kap = p.cavity_decay;
    let outer = [p.ht(1), p.ht_conj(1)];
    let with = |extra: [LinearFactor; 2]| [outer[0], outer[1], extra[0], extra[1]];
    let upper = sum_rational(2, 2, &with([p.h(2), p.h_conj(2)]), x)?;
    let lower = sum_rational(0, 0, &with([p.h(0), p.h_conj(0)]), x)?;
    let cross = sum_rational(0, 2, &with([p.h(0), p.h_conj(2)]), x)?;
    let optical = 0.25 * p.diffusion_strength() * kap * (upper.re + lower.re - 2.0 * cross.re);
    finite_real("wigner diffusion", thermal_wigner(p) + optical)
}

/// Near-resonance approximation keeping only the `n = 0` term,
/// `gamma (2 nbar + 1)/4 + (kappa g0^2 E^2 / omega^4)(J_1^2 + omega^2 J_0^2 / (2 (kappa^2 + Delta_eff^2)))`.
pub fn wigner_diffusion_resonant_approx(r: f64, p: &CycleParams) -> f64 {
    let x = p.bessel_scale() * r;
    let w = p.mech_freq;
    let j0 = besselj_int(0, x);
    let j1 = besselj_int(1, x);
    let lorentz = 2.0 * (p.cavity_decay.powi(2) + p.eff_detuning.powi(2));
    thermal_wigner(p)
        + p.cavity_decay * p.diffusion_strength() / w.powi(4)
            * (j1 * j1 + w * w * j0 * j0 / lorentz)
}

/// Optical damping `gamma_opt(r) = -optical_drift(r) / r`.
pub fn gamma_opt(r: f64, p: &CycleParams) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!(
            "gamma_opt needs r > 0, got {r}"
        )));
    }
    Ok(-optical_drift(r, p)? / r)
}

/// Near-resonance optical damping
/// `-(2 g0 E^2 / omega^2)(2 kappa Delta_eff / (Delta_eff^2 + kappa^2)) J_0(eta r) J_1(eta r) / r`,
/// the leading term of [`gamma_opt`] for `kappa, Delta_eff << omega`.
pub fn gamma_opt_resonant_approx(r: f64, p: &CycleParams) -> f64 {
    let x = p.bessel_scale() * r;
    let k = p.cavity_decay;
    let d = p.eff_detuning;
    -2.0 * p.damping_unit()
        * (2.0 * k * d / (d * d + k * k))
        * besselj_int(0, x)
        * besselj_int(1, x)
        / r
}

/// Large-amplitude drift, with `Delta = Delta_eff`.
pub fn drift_mu_asymptotic(r: f64, p: &CycleParams) -> f64 {
    let w = p.mech_freq;
    let k = p.cavity_decay;
    let d = p.eff_detuning;
    let eta = p.bessel_scale();
    let num = 8.0
        * p.drive.powi(2)
        * p.single_photon_coupling
        * k
        * (PI * d / w).sin()
        * (PI * k / w).cosh()
        * (2.0 * eta * r).cos();
    let den = eta
        * r
        * w
        * (4.0 * k * k + w * w)
        * ((2.0 * PI * k / w).cosh() - (2.0 * PI * d / w).cos());
    -p.mech_damping * r - num / den
}

/// An amplitude where the total damping vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitCycle {
    pub r0: f64,
    /// Derivative of the total damping at `r0`.
    pub slope: f64,
    /// `slope > 0`.
    pub stable: bool,
}

const ROOT_TOL: f64 = 1e-10;

/// Options for [`find_limit_cycles_with`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CycleSearch {
    pub use_approx: bool,
    pub mode: DetuningMode,
}

/// Total damping `gamma + gamma_opt(r)` under the chosen approximation.
pub fn gamma_eff(r: f64, p: &CycleParams, search: CycleSearch) -> Result<f64> {
    let q = p.resolve(r, search.mode)?;
    let opt = if search.use_approx {
        gamma_opt_resonant_approx(r, &q)
    } else {
        gamma_opt(r, &q)?
    };
    Ok(q.mech_damping + opt)
}

/// Zeros of the total damping on `[r_min, r_max]` in static mode.
pub fn find_limit_cycles(
    p: &CycleParams,
    r_min: f64,
    r_max: f64,
    use_approx: bool,
) -> Result<Vec<LimitCycle>> {
    find_limit_cycles_with(
        p,
        r_min,
        r_max,
        CycleSearch {
            use_approx,
            mode: DetuningMode::Static,
        },
    )
}

/// Zeros of the total damping on `[r_min, r_max]`.
///
/// The scan step is at most `min(0.05, pi / (4 eta))` so that no Bessel
/// oscillation is skipped; each bracket is refined by bisection.
pub fn find_limit_cycles_with(
    p: &CycleParams,
    r_min: f64,
    r_max: f64,
    search: CycleSearch,
) -> Result<Vec<LimitCycle>> {
    p.validate()?;
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "limit-cycle search needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
        )));
    }
    let eta = p.bessel_scale().abs().max(f64::MIN_POSITIVE);
    let max_step = 0.05f64.min(PI / (4.0 * eta));
    let n = ((r_max - r_min) / max_step).ceil() as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|k| r_min + (r_max - r_min) * k as f64 / n as f64)
        .collect();
    let f = |r: f64| gamma_eff(r, p, search);
    let vals = grid.par_iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for k in 0..n {
        let (fa, fb) = (vals[k], vals[k + 1]);
        if fa == 0.0 {
            out.push(grid[k]);
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        out.push(bisect(&f, grid[k], grid[k + 1], fa)?);
    }
    if vals[n] == 0.0 {
        out.push(grid[n]);
    }
    out.into_iter()
        .map(|r0| {
            let h = 1e-5 * r0.max(1.0);
            let slope = (f(r0 + h)? - f(r0 - h)?) / (2.0 * h);
            Ok(LimitCycle {
                r0,
                slope,
                stable: slope > 0.0,
            })
        })
        .collect()
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm.abs() <= ROOT_TOL {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a <= f64::EPSILON * m.abs() {
            return Ok(m);
        }
    }
    Ok(0.5 * (a + b))
}

/// `Delta + 2 K E^2 sum_n J_n^2 / |kappa + i(n omega - d)|^2` evaluated at a
/// trial effective detuning `d`.
pub fn delta_eff_map(r: f64, d: f64, p: &CycleParams) -> Result<f64> {
    let x = p.bessel_scale() * r;
    let q = p.with_eff_detuning(d);
    let s = sum_s0(-q.order(), x)?;
    let sum = s.im / (p.cavity_decay * p.mech_freq);
    finite_real(
        "delta_eff",
        p.detuning + 2.0 * p.kerr * p.drive.powi(2) * sum,
    )
}

const DELTA_TOL: f64 = 1e-10;
const DELTA_MAX_ITER: usize = 10_000;

/// Self-consistent effective detuning at amplitude `r`, by damped fixed-point
/// iteration from `Delta_eff = Delta`.
///
/// A step is accepted when it lowers the residual; otherwise the damping is
/// halved. When the damping stalls the root is bracketed instead: every fixed
/// point lies between `Delta` and `Delta + 2 K E^2 / kappa^2`, and the first
/// sign change of `map(d) - d` away from `Delta` is refined by bisection.
pub fn solve_delta_eff(r: f64, p: &CycleParams) -> Result<f64> {
    p.validate()?;
    check_amplitude(r)?;
    let mut d = p.detuning;
    let mut md = delta_eff_map(r, d, p)?;
    let mut res = (md - d).abs();
    let mut lambda = 1.0;
    for _ in 0..DELTA_MAX_ITER {
        if res <= DELTA_TOL {
            return Ok(d);
        }
        let trial = (1.0 - lambda) * d + lambda * md;
        let mt = delta_eff_map(r, trial, p)?;
        let rt = (mt - trial).abs();
        if rt < res {
            d = trial;
            md = mt;
            res = rt;
            lambda = (2.0 * lambda).min(1.0);
        } else {
            lambda *= 0.5;
            if lambda < 1e-6 {
                break;
            }
        }
    }
    bracket_delta_eff(r, p).ok_or(Error::NoConvergence {
        what: "effective detuning",
        iterations: DELTA_MAX_ITER,
        residual: res,
    })
}

fn bracket_delta_eff(r: f64, p: &CycleParams) -> Option<f64> {
    let g = |d: f64| delta_eff_map(r, d, p).map(|m| m - d).ok();
    let span = 2.0 * p.kerr * p.drive.powi(2) / p.cavity_decay.powi(2);
    let end = p.detuning + span;
    let step = 0.05 * p.cavity_decay;
    let n = ((span.abs() / step).ceil() as usize).max(1);
    let mut a = p.detuning;
    let mut ga = g(a)?;
    for k in 1..=n {
        let b = p.detuning + (end - p.detuning) * k as f64 / n as f64;
        let gb = g(b)?;
        if ga == 0.0 {
            return Some(a);
        }
        if ga.signum() != gb.signum() {
            let (mut lo, mut hi, mut glo) = (a, b, ga);
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                let gm = g(m)?;
                if gm.abs() <= DELTA_TOL || (hi - lo).abs() <= f64::EPSILON * m.abs() {
                    return Some(m);
                }
                if gm.signum() == glo.signum() {
                    lo = m;
                    glo = gm;
                } else {
                    hi = m;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        a = b;
        ga = gb;
    }
    (ga.abs() <= DELTA_TOL).then_some(a)
}

/// Large-amplitude effective detuning.
///
/// The general form evaluates its right side at `Delta_eff = Delta`;
/// `small_delta` selects the `Delta_eff << omega` reduction.
pub fn delta_eff_asymptotic(r: f64, p: &CycleParams, small_delta: bool) -> f64 {
    let w = p.mech_freq;
    let k = p.cavity_decay / w;
    let d = p.detuning / w;
    let x = p.bessel_scale() * r;
    let ke2 = p.kerr * p.drive.powi(2);
    if small_delta {
        p.detuning
            + 2.0 * ke2 / (p.cavity_decay * w * x) * ((PI * k).cosh() + (2.0 * x).sin())
                / (PI * k).sinh()
    } else {
        p.detuning
            + 4.0 * ke2 / (p.cavity_decay * w * x) * (PI * k).sinh()
                / ((2.0 * PI * k).cosh() - (2.0 * PI * d).cos())
                * ((PI * k).cosh() + (PI * d).cos() * (2.0 * x).sin())
    }
}
