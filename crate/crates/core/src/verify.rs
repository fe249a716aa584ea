//! Independent checks of the closed forms: certified direct summation of the
//! original series, a time-domain integrator for the driven cavity, and the
//! standard validation suite that compares both against the closed forms.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::attractor::{self, AttractorParams};
use crate::besselsum::{direct_sum, oracle_sum, sum_closed, DirectTerm, SumKind, SumResult};
use crate::cycles::{self, CycleParams};
use crate::error::{Error, Result};

/// Series that have a direct-sum oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesQuantity {
    PhotonNumber,
    Force,
    Power,
    Drift,
    Diffusion,
    Wigner,
    DeltaEffRhs,
}

impl SeriesQuantity {
    pub const ALL: [SeriesQuantity; 7] = [
        SeriesQuantity::PhotonNumber,
        SeriesQuantity::Force,
        SeriesQuantity::Power,
        SeriesQuantity::Drift,
        SeriesQuantity::Diffusion,
        SeriesQuantity::Wigner,
        SeriesQuantity::DeltaEffRhs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesQuantity::PhotonNumber => "photon_number",
            SeriesQuantity::Force => "force",
            SeriesQuantity::Power => "power",
            SeriesQuantity::Drift => "drift",
            SeriesQuantity::Diffusion => "diffusion",
            SeriesQuantity::Wigner => "wigner",
            SeriesQuantity::DeltaEffRhs => "delta_eff_rhs",
        }
    }

    pub fn parse(s: &str) -> Option<SeriesQuantity> {
        SeriesQuantity::ALL.into_iter().find(|q| q.name() == s)
    }
}

/// Parameter set of either physics layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    Attractor(AttractorParams),
    Cycle(CycleParams),
}

/// Direct truncated sum of the original series for `quantity`.
///
/// `r_or_amplitude` is the mirror amplitude `A` for the attractor quantities
/// and the oscillator amplitude `r` for the cycle quantities. The returned
/// `err_estimate` bounds the absolute truncation error of the final value by
/// `tol`. For `DeltaEffRhs` the params' `eff_detuning` is the trial value.
pub fn direct_series(
    quantity: SeriesQuantity,
    params: &ModelParams,
    r_or_amplitude: f64,
    tol: f64,
) -> Result<SumResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tol must be positive, got {tol}"
        )));
    }
    use SeriesQuantity as Q;
    match (quantity, params) {
        (Q::PhotonNumber | Q::Force | Q::Power, ModelParams::Attractor(p)) => {
            let p = p.with_amplitude(r_or_amplitude);
            p.validate()?;
            attractor_series(quantity, &p, tol)
        }
        (Q::Drift | Q::Diffusion | Q::Wigner | Q::DeltaEffRhs, ModelParams::Cycle(p)) => {
            p.validate()?;
            if !(r_or_amplitude >= 0.0 && r_or_amplitude.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "amplitude r must be >= 0, got {r_or_amplitude}"
                )));
            }
            cycle_series(quantity, p, r_or_amplitude, tol)
        }
        (q, _) => Err(Error::ParameterMismatch(format!(
            "{} needs the other parameter set",
            q.name()
        ))),
    }
}

/// `sum` becomes `offset + pref * sum`, with the tolerance on the final value.
fn scaled(
    pref: f64,
    offset: f64,
    tol: f64,
    run: impl FnOnce(f64) -> Result<SumResult>,
) -> Result<SumResult> {
    if pref == 0.0 {
        return Ok(SumResult {
            value: Complex64::new(offset, 0.0),
            terms_used: 0,
            err_estimate: 0.0,
        });
    }
    let raw = run(tol / pref.abs())?;
    Ok(SumResult {
        value: offset + pref * raw.value,
        terms_used: raw.terms_used,
        err_estimate: pref.abs() * raw.err_estimate,
    })
}

fn attractor_series(quantity: SeriesQuantity, p: &AttractorParams, tol: f64) -> Result<SumResult> {
    let x = p.modulation();
    let delta = p.coupling * p.mean_position + p.detuning;
    let kap = p.cavity_decay;
    let w = p.mech_freq;
    // alpha_n = (kappa/2) alpha_max J_n / (kappa/2 + i(n w - delta)).
    let den = move |n: i64| Complex64::new(0.5 * kap, n as f64 * w - delta);
    // Lower bound on |den(n)| for |n| >= m.
    let lower = move |m: usize| (0.5 * kap).max(m as f64 * w - delta.abs());
    let amp = 0.5 * kap * p.max_photons.sqrt();
    match quantity {
        SeriesQuantity::PhotonNumber | SeriesQuantity::Force => {
            let g = if quantity == SeriesQuantity::Force {
                p.coupling
            } else {
                1.0
            };
            scaled(g * amp * amp, 0.0, tol, |t| {
                direct_sum(
                    x,
                    0,
                    t,
                    |n| lower(n + 1).powi(-2),
                    |n, j: &DirectTerm| Complex64::new(j.get(n).powi(2) / den(n).norm_sqr(), 0.0),
                )
            })
        }
        _ => {
            let pref = p.amplitude * w * amp * amp;
            scaled(pref, 0.0, tol, |t| {
                direct_sum(
                    x,
                    1,
                    t,
                    |n| lower(n).powi(-2),
                    |n, j: &DirectTerm| {
                        let v = j.get(n) * j.get(n + 1) / (den(n).conj() * den(n + 1));
                        Complex64::new(v.im, 0.0)
                    },
                )
            })
        }
    }
}

fn cycle_series(quantity: SeriesQuantity, p: &CycleParams, r: f64, tol: f64) -> Result<SumResult> {
    let x = p.bessel_scale() * r;
    let kap = p.cavity_decay;
    let w = p.mech_freq;
    let de = p.eff_detuning;
    let dt = p.fluct_detuning;
    let h = move |n: i64| Complex64::new(kap, n as f64 * w - de);
    let ht = move |n: i64| Complex64::new(kap, n as f64 * w - dt);
    let reach_shift = 2usize;
    // Lower bound on |h_{n+s}|, |h~_{n+s}| for |n| > m and |s| <= 2.
    let lower = move |m: usize| {
        kap.max((m + 1).saturating_sub(reach_shift) as f64 * w - de.abs().max(dt.abs()))
    };
    match quantity {
        SeriesQuantity::Drift => scaled(p.drift_strength(), -p.mech_damping * r, tol, |t| {
            direct_sum(
                x,
                1,
                t,
                |m| lower(m).powi(-2),
                |n, j: &DirectTerm| {
                    let v = j.get(n - 1) * j.get(n) / (h(n - 1) * h(n).conj());
                    Complex64::new(v.im, 0.0)
                },
            )
        }),
        SeriesQuantity::Diffusion => {
            let thermal = 0.5 * p.mech_damping * (p.thermal_occupation + 1.0);
            scaled(0.5 * p.diffusion_strength(), thermal, tol, |t| {
                direct_sum(
                    x,
                    2,
                    t,
                    |m| {
                        let l = lower(m);
                        kap / l.powi(4) + 1.0 / l.powi(3)
                    },
                    |n, j: &DirectTerm| {
                        let a = kap * j.get(n).powi(2) / (h(n).norm_sqr() * ht(n - 1).norm_sqr());
                        let b = j.get(n - 2) * j.get(n) / (ht(n - 1) * h(n - 2).conj() * h(n));
                        Complex64::new(a - b.re, 0.0)
                    },
                )
            })
        }
        SeriesQuantity::Wigner => {
            let thermal = 0.25 * p.mech_damping * (2.0 * p.thermal_occupation + 1.0);
            scaled(0.25 * p.diffusion_strength(), thermal, tol, |t| {
                direct_sum(
                    x,
                    2,
                    t,
                    |m| 4.0 * kap / lower(m).powi(4),
                    |n, j: &DirectTerm| {
                        let (a, b) = (j.get(n + 2), j.get(n));
                        let cross = a * b / (h(n) * h(n + 2).conj());
                        let v = kap / ht(n + 1).norm_sqr()
                            * (a * a / h(n + 2).norm_sqr() + b * b / h(n).norm_sqr()
                                - 2.0 * cross.re);
                        Complex64::new(v, 0.0)
                    },
                )
            })
        }
        _ => scaled(2.0 * p.kerr * p.drive.powi(2), p.detuning, tol, |t| {
            direct_sum(
                x,
                0,
                t,
                |m| lower(m).powi(-2),
                |n, j: &DirectTerm| Complex64::new(j.get(n).powi(2) / h(n).norm_sqr(), 0.0),
            )
        }),
    }
}

/// Fixed-step integration settings, in mechanical periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryConfig {
    pub periods_transient: usize,
    pub periods_average: usize,
    pub steps_per_period: usize,
}

impl TrajectoryConfig {
    /// Transient of `40 / kappa` periods in units of the mechanical frequency,
    /// at least 20.
    pub fn for_params(p: &AttractorParams) -> Self {
        let per_rate = 40.0 * p.mech_freq / p.cavity_decay;
        TrajectoryConfig {
            periods_transient: (per_rate.ceil() as usize).max(20),
            periods_average: 4,
            steps_per_period: 512,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_period < 256 || self.periods_average == 0 || self.periods_transient == 0 {
            return Err(Error::InvalidInput(format!(
                "trajectory needs steps_per_period >= 256 and positive period counts, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Period averages of the integrated steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityAverages {
    pub photon_number: f64,
    /// `<|alpha|^2 xdot>`.
    pub power: f64,
    /// `alpha_n` for `n = -nmax..=nmax`, projected after removing the global
    /// phase `(G A / mech_freq) sin(mech_freq t)`.
    pub coefficients: Vec<Complex64>,
}

/// Integrates `alpha' = -(kappa/2)(alpha - alpha_max) + i(Delta + G x(t)) alpha`
/// with `x(t) = xbar + A cos(mech_freq t)` by classical RK4 from
/// `alpha(0) = alpha_max`, and averages over whole periods after the transient.
pub fn integrate_cavity(p: &AttractorParams, cfg: &TrajectoryConfig) -> Result<(f64, f64)> {
    let r = integrate_cavity_with_coefficients(p, cfg, 0)?;
    Ok((r.photon_number, r.power))
}

/// [`integrate_cavity`] that also projects the Fourier coefficients
/// `|n| <= nmax`.
pub fn integrate_cavity_with_coefficients(
    p: &AttractorParams,
    cfg: &TrajectoryConfig,
    nmax: usize,
) -> Result<CavityAverages> {
    p.validate()?;
    cfg.validate()?;
    let w = p.mech_freq;
    let kap = p.cavity_decay;
    let drive = Complex64::new(0.5 * kap * p.max_photons.sqrt(), 0.0);
    let dt = 2.0 * std::f64::consts::PI / (w * cfg.steps_per_period as f64);
    let rhs = |t: f64, a: Complex64| -> Complex64 {
        let x = p.mean_position + p.amplitude * (w * t).cos();
        -0.5 * kap * a + drive + Complex64::new(0.0, p.detuning + p.coupling * x) * a
    };
    let mut a = Complex64::new(p.max_photons.sqrt(), 0.0);
    let mut step_index = 0usize;
    let advance = |a: Complex64, k: usize| {
        let t = k as f64 * dt;
        let k1 = rhs(t, a);
        let k2 = rhs(t + 0.5 * dt, a + 0.5 * dt * k1);
        let k3 = rhs(t + 0.5 * dt, a + 0.5 * dt * k2);
        let k4 = rhs(t + dt, a + dt * k3);
        a + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };
    for _ in 0..cfg.periods_transient * cfg.steps_per_period {
        a = advance(a, step_index);
        step_index += 1;
    }
    let samples = cfg.periods_average * cfg.steps_per_period;
    let mut photons = 0.0;
    let mut power = 0.0;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * nmax + 1];
    let phase_amp = p.coupling * p.amplitude / w;
    for _ in 0..samples {
        // Integer periods elapsed, so the phase of t matches the sample index.
        let t = step_index as f64 * dt;
        let n2 = a.norm_sqr();
        photons += n2;
        power += n2 * (-p.amplitude * w * (w * t).sin());
        if nmax > 0 {
            let base = a * Complex64::from_polar(1.0, -phase_amp * (w * t).sin());
            for (k, c) in coeffs.iter_mut().enumerate() {
                let n = k as f64 - nmax as f64;
                *c += base * Complex64::from_polar(1.0, -n * w * t);
            }
        }
        a = advance(a, step_index);
        step_index += 1;
    }
    let inv = 1.0 / samples as f64;
    Ok(CavityAverages {
        photon_number: photons * inv,
        power: power * inv,
        coefficients: coeffs.into_iter().map(|c| c * inv).collect(),
    })
}

/// One closed-form versus oracle comparison.
///
/// Complex quantities report moduli in `closed_form` and `oracle`; their
/// `rel_err` uses the complex difference. The denominator of `rel_err` is
/// never below the oracle's certified absolute tolerance, so quantities that
/// vanish exactly compare as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub point_id: usize,
    pub closed_form: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub terms_or_steps: usize,
    pub tolerance: f64,
    /// Evaluation error, if either side failed.
    pub failure: Option<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.rel_err <= self.tolerance
    }
}

/// Tolerance of series-oracle rows.
pub const SERIES_TOL: f64 = 1e-9;
/// Tolerance of time-domain rows.
pub const ODE_TOL: f64 = 1e-3;
/// Absolute residual tolerance of the effective-detuning rows.
pub const DELTA_EFF_TOL: f64 = 1e-8;
const ORACLE_SUM_TOL: f64 = 1e-15;

/// Named validation grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// All grids below.
    Standard,
    /// The 75 kernel points, each for the three kernels.
    Kernels,
    /// The 27 attractor points, force and power.
    Attractor,
    /// The 27 cycle points, every cycle coefficient.
    Cycles,
    /// Five attractor points against the time-domain integrator.
    Ode,
    Empty,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "standard" => Suite::Standard,
            "kernels" => Suite::Kernels,
            "attractor" => Suite::Attractor,
            "cycles" => Suite::Cycles,
            "ode" => Suite::Ode,
            "empty" => Suite::Empty,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Standard => "standard",
            Suite::Kernels => "kernels",
            Suite::Attractor => "attractor",
            Suite::Cycles => "cycles",
            Suite::Ode => "ode",
            Suite::Empty => "empty",
        }
    }
}

/// Kernel points `(mu, x)`: `Re mu` in `-2..=2`, `Im mu` in `0.05..=2`, three `x`.
pub fn kernel_grid() -> Vec<(Complex64, f64)> {
    let mut out = Vec::with_capacity(75);
    for i in 0..5 {
        for j in 0..5 {
            let mu = Complex64::new(-2.0 + i as f64, 0.05 + 0.4875 * j as f64);
            for x in [0.5, 5.0, 25.0] {
                out.push((mu, x));
            }
        }
    }
    out
}

/// Attractor points over `kappa`, scaled detuning and `|X|`, with unit
/// mechanical frequency and coupling.
pub fn attractor_grid() -> Vec<AttractorParams> {
    let mut out = Vec::with_capacity(27);
    for kap in [0.1, 1.0, 5.0] {
        for r in [-1.3, 0.0, 0.7] {
            for x in [0.5, 5.0, 25.0] {
                out.push(AttractorParams {
                    cavity_decay: kap,
                    detuning: r,
                    amplitude: x,
                    ..AttractorParams::default()
                });
            }
        }
    }
    out
}

/// Cycle points `(params, r)` over `kappa`, `Delta_eff` and `eta r`, with
/// `eta = 1`. The fluctuation detuning is offset by 0.15 so that the general
/// code paths see `Delta_tilde_eff != Delta_eff`.
pub fn cycle_grid() -> Vec<(CycleParams, f64)> {
    let mut out = Vec::with_capacity(27);
    for kap in [0.1, 0.6, 2.0] {
        for d in [0.1, 0.6, 1.5] {
            for r in [0.5, 3.0, 12.0] {
                let p = CycleParams {
                    cavity_decay: kap,
                    detuning: d,
                    ..CycleParams::default()
                }
                .with_detunings(d, d + 0.15);
                out.push((p, r));
            }
        }
    }
    out
}

/// Representative attractor points for the time-domain check.
pub fn ode_points() -> Vec<AttractorParams> {
    let base = AttractorParams::default();
    vec![
        AttractorParams {
            detuning: 0.3,
            amplitude: 2.0,
            ..base
        },
        AttractorParams {
            detuning: -0.5,
            amplitude: 1.5,
            ..base
        },
        AttractorParams {
            cavity_decay: 0.5,
            detuning: 1.0,
            amplitude: 3.0,
            ..base
        },
        AttractorParams {
            cavity_decay: 2.0,
            detuning: 0.7,
            amplitude: 0.8,
            mean_position: 0.1,
            ..base
        },
        AttractorParams {
            cavity_decay: 1.0,
            detuning: -1.2,
            amplitude: 5.0,
            max_photons: 2.0,
            ..base
        },
    ]
}

fn report(
    quantity: &str,
    point_id: usize,
    tolerance: f64,
    eval: impl FnOnce() -> Result<(Complex64, SumResult)>,
) -> OracleReport {
    match eval() {
        Ok((closed, o)) => OracleReport {
            quantity: quantity.to_string(),
            point_id,
            closed_form: if closed.im == 0.0 {
                closed.re
            } else {
                closed.norm()
            },
            oracle: if o.value.im == 0.0 {
                o.value.re
            } else {
                o.value.norm()
            },
            rel_err: (closed - o.value).norm()
                / o.value.norm().max(o.err_estimate).max(ORACLE_SUM_TOL),
            terms_or_steps: o.terms_used,
            tolerance,
            failure: None,
        },
        Err(e) => OracleReport {
            quantity: quantity.to_string(),
            point_id,
            closed_form: f64::NAN,
            oracle: f64::NAN,
            rel_err: f64::NAN,
            terms_or_steps: 0,
            tolerance,
            failure: Some(e.to_string()),
        },
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

type Check = Box<dyn Fn() -> OracleReport + Send + Sync>;

fn kernel_checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for (id, (mu, x)) in kernel_grid().into_iter().enumerate() {
        for kind in SumKind::ALL {
            out.push(Box::new(move || {
                report(kind.name(), id, SERIES_TOL, || {
                    let closed = sum_closed(kind, mu, x)?;
                    let o = oracle_sum(kind, mu, x, ORACLE_SUM_TOL)?;
                    Ok((closed, o))
                })
            }));
        }
    }
    out
}

fn attractor_checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for (id, p) in attractor_grid().into_iter().enumerate() {
        let tol = ORACLE_SUM_TOL * p.max_photons;
        out.push(Box::new(move || {
            report("force", id, SERIES_TOL, || {
                let o = direct_series(
                    SeriesQuantity::Force,
                    &ModelParams::Attractor(p),
                    p.amplitude,
                    tol,
                )?;
                Ok((real(attractor::force_avg(&p)?), o))
            })
        }));
        out.push(Box::new(move || {
            report("power", id, SERIES_TOL, || {
                let o = direct_series(
                    SeriesQuantity::Power,
                    &ModelParams::Attractor(p),
                    p.amplitude,
                    tol,
                )?;
                Ok((real(attractor::power_input(&p)?), o))
            })
        }));
    }
    out
}

fn cycle_checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for (id, (p, r)) in cycle_grid().into_iter().enumerate() {
        let equal = p.with_eff_detuning(p.eff_detuning);
        let series = move |q: SeriesQuantity, params: CycleParams| {
            direct_series(q, &ModelParams::Cycle(params), r, ORACLE_SUM_TOL)
        };
        out.push(Box::new(move || {
            report("drift", id, SERIES_TOL, || {
                let o = series(SeriesQuantity::Drift, p)?;
                Ok((real(cycles::drift_mu(r, &p)?), o))
            })
        }));
        out.push(Box::new(move || {
            report("diffusion", id, SERIES_TOL, || {
                let o = series(SeriesQuantity::Diffusion, p)?;
                Ok((real(cycles::diffusion_d(r, &p)?), o))
            })
        }));
        out.push(Box::new(move || {
            report("wigner", id, SERIES_TOL, || {
                let o = series(SeriesQuantity::Wigner, equal)?;
                Ok((real(cycles::wigner_diffusion(r, &equal)?), o))
            })
        }));
        out.push(Box::new(move || {
            report("wigner_general", id, SERIES_TOL, || {
                let o = series(SeriesQuantity::Wigner, p)?;
                Ok((real(cycles::wigner_diffusion_general(r, &p)?), o))
            })
        }));
        out.push(Box::new(move || {
            // Residual of the fixed point in the original sum form, relative to 1.
            let mut row = report("delta_eff", id, DELTA_EFF_TOL, || {
                let d = cycles::solve_delta_eff(r, &p)?;
                let o = series(SeriesQuantity::DeltaEffRhs, p.with_eff_detuning(d))?;
                Ok((real(d), o))
            });
            if row.failure.is_none() {
                row.rel_err = (row.closed_form - row.oracle).abs();
            }
            row
        }));
    }
    out
}

fn ode_checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for (id, p) in ode_points().into_iter().enumerate() {
        for power in [false, true] {
            let name = if power {
                "ode_power"
            } else {
                "ode_photon_number"
            };
            out.push(Box::new(move || {
                report(name, id, ODE_TOL, || {
                    let cfg = TrajectoryConfig::for_params(&p);
                    let steps =
                        cfg.steps_per_period * (cfg.periods_transient + cfg.periods_average);
                    let (n, w) = integrate_cavity(&p, &cfg)?;
                    let (closed, oracle) = if power {
                        (attractor::power_input(&p)?, w)
                    } else {
                        (attractor::photon_number(&p)?, n)
                    };
                    Ok((
                        real(closed),
                        SumResult {
                            value: real(oracle),
                            terms_used: steps,
                            err_estimate: 0.0,
                        },
                    ))
                })
            }));
        }
    }
    out
}

/// Closed forms against their oracles on the named grid, in a fixed order.
///
/// Every comparison is evaluated; failures are recorded in the report rows.
pub fn run_validation_suite(suite: Suite) -> Vec<OracleReport> {
    let checks: Vec<Check> = match suite {
        Suite::Empty => Vec::new(),
        Suite::Kernels => kernel_checks(),
        Suite::Attractor => attractor_checks(),
        Suite::Cycles => cycle_checks(),
        Suite::Ode => ode_checks(),
        Suite::Standard => {
            let mut all = kernel_checks();
            all.extend(attractor_checks());
            all.extend(cycle_checks());
            all.extend(ode_checks());
            all
        }
    };
    checks.par_iter().map(|c| c()).collect()
}
