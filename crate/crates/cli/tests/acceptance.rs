//! Acceptance criteria. Every criterion runs and prints one
//! `PASS`/`FAIL criterion N: ...` line; the process exits non-zero if any failed.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::panic;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use optobessel::attractor::{
    force_avg, force_avg_asymptotic, large_amplitude_power_coefficient, power_input,
    power_input_asymptotic, stability_extrema_scan, AttractorParams,
};
use optobessel::complexfn::{besselj_complex_order, gamma_complex, sinpi_complex, SeriesControl};
use optobessel::cycles::{
    drift_mu, find_limit_cycles, wigner_diffusion, wigner_diffusion_general,
    wigner_diffusion_resonant_approx, CycleParams,
};
use optobessel::verify::{cycle_grid, run_validation_suite, OracleReport, Suite};
use optobessel::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

mod tol {
    use std::time::Duration;

    pub const KERNEL_REL: f64 = 1e-9;
    pub const KERNEL_TIME: Duration = Duration::from_secs(10);
    pub const CROSS_PRODUCT_REL: f64 = 1e-8;
    pub const GAMMA_RECURRENCE_REL: f64 = 1e-11;
    pub const HALF_INTEGER: f64 = 1e-12;
    pub const SERIES_REL: f64 = 1e-9;
    pub const ODE_REL: f64 = 1e-3;
    pub const SUITE_TIME: Duration = Duration::from_secs(60);
    pub const ASYMPTOTIC_REL: f64 = 5e-2;
    pub const EXTREMUM: f64 = 1e-6;
    pub const SMALL_C_LOCATION: f64 = 1e-3;
    pub const LARGE_C_REL: f64 = 0.10;
    pub const RESONANT_CLOSE: f64 = 0.05;
    pub const RESONANT_FAR: f64 = 0.20;
    pub const CYCLE_LOCATION: f64 = 0.3;
    pub const DECAY_AT_GENERIC: (f64, f64) = (1.0, 0.1);
    pub const DECAY_AT_RESONANCE: (f64, f64) = (2.0, 0.2);
    pub const DELTA_EFF_RESIDUAL: f64 = 1e-8;
    pub const POSITIVITY: f64 = -1e-12;
}

static ANY_FAILED: AtomicBool = AtomicBool::new(false);

fn verdict(n: u32, ok: bool, detail: String) {
    println!(
        "{} criterion {n}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    if !ok {
        ANY_FAILED.store(true, Ordering::SeqCst);
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn worst(rows: &[OracleReport], quantity_prefix: &str) -> f64 {
    rows.iter()
        .filter(|r| r.quantity.starts_with(quantity_prefix))
        .map(|r| {
            if r.failure.is_some() {
                f64::INFINITY
            } else {
                r.rel_err
            }
        })
        .fold(0.0, f64::max)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn criterion_01_kernel_summation() {
    let (rows, elapsed) = timed(|| run_validation_suite(Suite::Kernels));
    let err = worst(&rows, "");
    let ok = rows.len() == 225 && err <= tol::KERNEL_REL && elapsed <= tol::KERNEL_TIME;
    verdict(
        1,
        ok,
        format!(
            "{} kernel rows, max rel {err:.2e}, {elapsed:.2?}",
            rows.len()
        ),
    );
}

fn criterion_02_special_function_identities() {
    let ctl = SeriesControl::default();
    let j = |o: Complex64, x: f64| besselj_complex_order(o, x, &ctl).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed);

    let mut cross = 0.0f64;
    let mut drawn = 0;
    while drawn < 100 {
        let nu = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-1.5..1.5));
        if (nu.re - nu.re.round()).abs() < 0.05 && nu.im.abs() < 0.05 {
            continue;
        }
        let x = rng.gen_range(0.05..30.0);
        let lhs = j(nu, x) * j(1.0 - nu, x) + j(-nu, x) * j(nu - 1.0, x);
        let rhs = 2.0 * sinpi_complex(nu).unwrap() / (PI * x);
        cross = cross.max(rel(lhs, rhs));
        drawn += 1;
    }

    let mut gamma = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::new(rng.gen_range(0.1..15.0), rng.gen_range(-15.0..15.0));
        gamma = gamma.max(rel(
            gamma_complex(z + 1.0).unwrap(),
            z * gamma_complex(z).unwrap(),
        ));
    }

    // Measured against the envelope sqrt(2 / (pi x)) so zeros are not singled out.
    let mut half = 0.0f64;
    for k in 1..=200 {
        let x = 0.15 * k as f64;
        let env = (2.0 / (PI * x)).sqrt();
        let cases = [
            (0.5, env * x.sin()),
            (-0.5, env * x.cos()),
            (1.5, env * (x.sin() / x - x.cos())),
        ];
        for (order, want) in cases {
            let got = j(Complex64::new(order, 0.0), x);
            half = half.max((got - want).norm() / env);
        }
    }

    let ok = cross <= tol::CROSS_PRODUCT_REL
        && gamma <= tol::GAMMA_RECURRENCE_REL
        && half <= tol::HALF_INTEGER;
    verdict(
        2,
        ok,
        format!("cross-product {cross:.2e}, Gamma recurrence {gamma:.2e}, half-integer {half:.2e}"),
    );
}

fn criterion_03_attractor_closed_forms() {
    let (series, t_series) = timed(|| run_validation_suite(Suite::Attractor));
    let (ode, t_ode) = timed(|| run_validation_suite(Suite::Ode));
    let s_err = worst(&series, "");
    let o_err = worst(&ode, "");
    let elapsed = t_series + t_ode;
    let ok = series.len() == 54
        && ode.len() == 10
        && s_err <= tol::SERIES_REL
        && o_err <= tol::ODE_REL
        && elapsed <= tol::SUITE_TIME;
    verdict(
        3,
        ok,
        format!("series max rel {s_err:.2e}, time-domain max rel {o_err:.2e}, {elapsed:.2?}"),
    );
}

/// Points with `|nu|^2 = r^2 + c^2 <= 4` and `|X|` from 20 to 60.
fn asymptotic_points() -> Vec<AttractorParams> {
    let mut out = Vec::new();
    for c in [0.05, 0.3, 0.6, 1.0] {
        for r in [-1.5, -0.8, -0.3, 0.25, 0.5, 1.2] {
            for k in 0..=80 {
                let x = 20.0 + 0.5 * k as f64;
                out.push(AttractorParams {
                    cavity_decay: 2.0 * c,
                    detuning: r,
                    amplitude: x,
                    ..AttractorParams::default()
                });
            }
        }
    }
    out
}

fn criterion_04_asymptotic_regime() {
    let mut force = 0.0f64;
    let mut power = 0.0f64;
    for p in asymptotic_points() {
        let f = force_avg(&p).unwrap();
        force = force.max(((f - force_avg_asymptotic(&p)) / f).abs());
        // The power oscillates through zero; it is compared on its envelope.
        let r = p.scaled_detuning();
        let c = p.scaled_half_width();
        let env = (p.cavity_decay.powi(2) * p.max_photons / (4.0 * p.coupling)
            * large_amplitude_power_coefficient(r, c))
        .abs();
        power = power.max(((power_input(&p).unwrap() - power_input_asymptotic(&p)) / env).abs());
    }

    // Sideband limits of the coefficient, read back through the asymptotic power
    // at a modulation index where cos(2X) = 1.
    let coefficient = |r: f64, c: f64| {
        let p = AttractorParams {
            cavity_decay: 2.0 * c,
            detuning: r,
            amplitude: 20.0 * PI,
            ..AttractorParams::default()
        };
        -power_input_asymptotic(&p) * 4.0 * p.coupling / (p.cavity_decay.powi(2) * p.max_photons)
    };
    let sqrt2 = 2f64.sqrt();
    let limits = [
        (0.25, 10.0, sqrt2 * (-PI * 10.0).exp() / 10.0),
        (0.25, 1e-3, 4.0 * sqrt2 * 1e-3),
        (0.5, 10.0, 2.0 * (-PI * 10.0).exp() / 10.0),
        (0.5, 1e-3, 4.0 * 1e-3),
    ];
    let sideband = limits
        .iter()
        .map(|&(r, c, want)| ((coefficient(r, c) - want) / want).abs())
        .fold(0.0, f64::max);

    let ok = force <= tol::ASYMPTOTIC_REL
        && power <= tol::ASYMPTOTIC_REL
        && sideband <= tol::ASYMPTOTIC_REL;
    verdict(
        4,
        ok,
        format!(
            "force max rel {force:.2e}, power max envelope rel {power:.2e}, sideband limits {sideband:.2e}"
        ),
    );
}

fn criterion_05_stability_extremum() {
    let coupling = 0.3;
    let at = stability_extrema_scan(coupling, &[FRAC_1_SQRT_2]).unwrap()[0];
    let peak = ((at.f_max - coupling / (4.0 * PI)) / (coupling / (4.0 * PI))).abs();
    let loc = (at.r_max - FRAC_1_SQRT_2).abs();

    let small = stability_extrema_scan(coupling, &[0.05]).unwrap()[0];
    let small_err = (small.r_max.powi(2) - (1.0 - 2.0 * 0.05f64.powi(2))).abs();

    let c = 10.0;
    let large = stability_extrema_scan(coupling, &[c]).unwrap()[0];
    let want = 25.0 * 2f64.sqrt() / 108.0 * coupling / (PI * c * c);
    let large_err = ((large.f_max - want) / want).abs();

    let ok = peak <= tol::EXTREMUM
        && loc <= tol::EXTREMUM
        && small_err <= tol::SMALL_C_LOCATION
        && large_err <= tol::LARGE_C_REL;
    verdict(
        5,
        ok,
        format!(
            "peak rel {peak:.2e} at r offset {loc:.2e}, small-c location {small_err:.2e}, large-c rel {large_err:.2e}"
        ),
    );
}

/// Largest deviation of the resonant approximation over `r in (0, 10]`,
/// relative to the largest exact value there.
fn resonant_deviation(kappa: f64, eff_detuning: f64) -> f64 {
    let p = CycleParams {
        cavity_decay: kappa,
        detuning: eff_detuning,
        ..CycleParams::default()
    }
    .with_eff_detuning(eff_detuning);
    let mut dev = 0.0f64;
    let mut scale = 0.0f64;
    for k in 1..=1000 {
        let r = 0.01 * k as f64;
        let exact = wigner_diffusion(r, &p).unwrap();
        dev = dev.max((wigner_diffusion_resonant_approx(r, &p) - exact).abs());
        scale = scale.max(exact.abs());
    }
    dev / scale
}

fn criterion_06_resonant_wigner_approximation() {
    let (close, far) = timed(|| (resonant_deviation(0.1, 0.1), resonant_deviation(0.1, 0.6))).0;
    let ok = close <= tol::RESONANT_CLOSE && far > tol::RESONANT_FAR;
    verdict(
        6,
        ok,
        format!("deviation {close:.3} at Delta_eff = 0.1, {far:.3} at Delta_eff = 0.6"),
    );
}

fn criterion_07_limit_cycles() {
    let mut p = CycleParams {
        cavity_decay: 0.6,
        detuning: 0.6,
        ..CycleParams::default()
    }
    .with_eff_detuning(0.6);
    p.mech_damping = 0.01 * p.damping_unit();
    let approx: Vec<f64> = find_limit_cycles(&p, 0.05, 10.0, true)
        .unwrap()
        .iter()
        .filter(|c| c.stable)
        .map(|c| c.r0)
        .collect();
    let located = approx.len() == 3
        && approx
            .iter()
            .zip([2.4, 5.3, 8.1])
            .all(|(got, want)| (got - want).abs() <= tol::CYCLE_LOCATION);
    let exact_late: Vec<f64> = find_limit_cycles(&p, 0.05, 10.0, false)
        .unwrap()
        .iter()
        .filter(|c| c.stable && (7.0..=9.5).contains(&c.r0))
        .map(|c| c.r0)
        .collect();
    verdict(
        7,
        located && exact_late.is_empty(),
        format!("approximate stable cycles {approx:.3?}, exact stable cycles in [7, 9.5] {exact_late:.3?}"),
    );
}

/// Least-squares slope of `log |mu|` at its local maxima against `log(eta r)`.
fn envelope_exponent(detuning: f64) -> f64 {
    let p = CycleParams {
        cavity_decay: 1.0,
        detuning,
        mech_damping: 0.0,
        ..CycleParams::default()
    }
    .with_eff_detuning(detuning);
    let eta = p.bessel_scale();
    let n = 18001;
    let xs: Vec<f64> = (0..n)
        .map(|k| 20.0 + 180.0 * k as f64 / (n - 1) as f64)
        .collect();
    let mu: Vec<f64> = xs
        .iter()
        .map(|x| drift_mu(x / eta, &p).unwrap().abs())
        .collect();
    let peaks: Vec<(f64, f64)> = (1..n - 1)
        .filter(|&k| mu[k] > mu[k - 1] && mu[k] >= mu[k + 1])
        .map(|k| (xs[k].ln(), mu[k].ln()))
        .collect();
    let m = peaks.len() as f64;
    let (sx, sy) = peaks
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = peaks.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx).powi(2))
    });
    -sxy / sxx
}

fn criterion_08_drift_envelope_decay() {
    let generic = envelope_exponent(0.8);
    let resonant = envelope_exponent(1.0);
    let within = |v: f64, (want, band): (f64, f64)| (v - want).abs() <= band;
    let ok = within(generic, tol::DECAY_AT_GENERIC) && within(resonant, tol::DECAY_AT_RESONANCE);
    verdict(
        8,
        ok,
        format!("decay exponent {generic:.4} at Delta = 0.8, {resonant:.4} at Delta = 1"),
    );
}

fn criterion_09_cycle_closed_forms() {
    let (rows, elapsed) = timed(|| run_validation_suite(Suite::Cycles));
    let series = ["drift", "diffusion", "wigner", "wigner_general"]
        .iter()
        .map(|q| {
            rows.iter()
                .filter(|r| r.quantity == *q)
                .map(|r| {
                    if r.failure.is_some() {
                        f64::INFINITY
                    } else {
                        r.rel_err
                    }
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let residual = worst(&rows, "delta_eff");
    let ok = rows.len() == 135
        && series <= tol::SERIES_REL
        && residual <= tol::DELTA_EFF_RESIDUAL
        && elapsed <= tol::SUITE_TIME;
    verdict(
        9,
        ok,
        format!("series max rel {series:.2e}, Delta_eff residual {residual:.2e}, {elapsed:.2?}"),
    );
}

fn criterion_10_wigner_positivity() {
    let mut lowest = f64::INFINITY;
    for (p, r) in cycle_grid() {
        lowest = lowest.min(wigner_diffusion_general(r, &p).unwrap());
        let equal = p.with_eff_detuning(p.eff_detuning);
        lowest = lowest.min(wigner_diffusion(r, &equal).unwrap());
    }
    for kap in [0.05, 0.1, 0.3, 0.6, 1.0, 2.0] {
        for d in [-1.5, -0.6, 0.0, 0.1, 0.4, 0.6, 1.0, 1.5] {
            let p = CycleParams {
                cavity_decay: kap,
                detuning: d,
                ..CycleParams::default()
            }
            .with_eff_detuning(d);
            for k in 0..=200 {
                lowest = lowest.min(wigner_diffusion(0.1 * k as f64, &p).unwrap());
            }
        }
    }
    verdict(
        10,
        lowest >= tol::POSITIVITY,
        format!("smallest optical Wigner diffusion {lowest:.3e}"),
    );
}

fn criterion_11_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    let codes: Vec<i32> = paths
        .iter()
        .map(|p| {
            optobessel_cli::run([
                "optobessel",
                "validate",
                "--suite",
                "standard",
                "--output",
                p.to_str().unwrap(),
            ])
        })
        .collect();
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    let ok = codes == [0, 0] && !a.is_empty() && a == b;
    verdict(
        11,
        ok,
        format!(
            "exit codes {codes:?}, report sizes {} and {} bytes, identical: {}",
            a.len(),
            b.len(),
            a == b
        ),
    );
}

fn main() {
    let criteria: [(u32, fn()); 11] = [
        (1, criterion_01_kernel_summation),
        (2, criterion_02_special_function_identities),
        (3, criterion_03_attractor_closed_forms),
        (4, criterion_04_asymptotic_regime),
        (5, criterion_05_stability_extremum),
        (6, criterion_06_resonant_wigner_approximation),
        (7, criterion_07_limit_cycles),
        (8, criterion_08_drift_envelope_decay),
        (9, criterion_09_cycle_closed_forms),
        (10, criterion_10_wigner_positivity),
        (11, criterion_11_deterministic_report),
    ];
    for (n, check) in criteria {
        if panic::catch_unwind(check).is_err() {
            verdict(n, false, "evaluation panicked".to_string());
        }
    }
    if ANY_FAILED.load(Ordering::SeqCst) {
        std::process::exit(1);
    }
}
