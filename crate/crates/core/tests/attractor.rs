use optobessel::attractor::{
    attractor_sweep, enumerate_xbar, force_avg, force_balance_residual, fourier_coefficient,
    photon_number, power_input, small_amp_ratio, solve_xbar, stability_extrema_scan,
    AttractorParams,
};
use optobessel::verify::{direct_series, ModelParams, SeriesQuantity};
use optobessel::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn point(kappa: f64, detuning: f64, amplitude: f64) -> AttractorParams {
    AttractorParams {
        cavity_decay: kappa,
        detuning,
        amplitude,
        ..AttractorParams::default()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// mpmath direct sums at 30 digits.
#[test]
fn reference_values() {
    let a1 = fourier_coefficient(1, &point(1.0, 0.3, 2.0));
    let want = Complex64::new(-0.194_839_462_080_024_792_97, 0.272_775_246_912_036_910_16);
    assert!((a1 - want).norm() < 1e-14);
    assert!(
        rel(
            force_avg(&point(1.0, 0.3, 2.0)).unwrap(),
            0.208_580_392_529_055_279_37
        ) < 1e-12
    );
    assert!(
        rel(
            power_input(&point(1.0, -0.5, 1.5)).unwrap(),
            -0.189_401_562_421_163_856_68
        ) < 1e-12
    );
    let weak = AttractorParams {
        max_photons: 1e-3,
        ..point(1.0, 0.3, 0.0)
    };
    assert!(
        rel(
            photon_number(&weak).unwrap(),
            0.000_735_294_117_647_058_823_53
        ) < 1e-12
    );
}

#[test]
fn zero_amplitude_is_a_lorentzian() {
    for d in [-1.3, 0.0, 0.4, 2.0] {
        let p = point(0.8, d, 0.0);
        let n = photon_number(&p).unwrap();
        let lorentz = 0.16 / (0.16 + d * d);
        assert!(rel(n, lorentz) < 1e-13, "d={d}");
        assert_eq!(power_input(&p).unwrap(), 0.0);
    }
}

#[test]
fn small_amplitude_power_scales_quadratically() {
    for (k, d) in [(0.4, 0.3), (1.0, -0.7), (2.0, 1.1)] {
        let p1 = point(k, d, 1e-3);
        let p2 = point(k, d, 2e-3);
        let w1 = power_input(&p1).unwrap();
        let w2 = power_input(&p2).unwrap();
        assert!((w2 / w1 - 4.0).abs() < 1e-5, "k={k} d={d}");
        // The normalized ratio approaches the small-amplitude form.
        let r = p1.scaled_detuning();
        let c = p1.scaled_half_width();
        let f = small_amp_ratio(r, c, p1.coupling * p1.max_photons / p1.mech_freq);
        let got = p1.coupling * w1 / (PI * 1e-6 * p1.mech_freq);
        assert!(rel(got, f) < 1e-4, "k={k} d={d}: {got} vs {f}");
        assert_eq!(w1.signum(), d.signum());
    }
}

#[test]
fn stability_extremum() {
    let g = 0.3;
    let ex = stability_extrema_scan(g, &[std::f64::consts::FRAC_1_SQRT_2]).unwrap();
    assert!((ex[0].r_max - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    assert!(rel(ex[0].f_max, g / (4.0 * PI)) < 1e-6);
    let small = stability_extrema_scan(g, &[0.05]).unwrap();
    assert!((small[0].r_max.powi(2) - (1.0 - 2.0 * 0.05f64.powi(2))).abs() < 1e-3);
    assert!(stability_extrema_scan(g, &[0.0]).is_err());
}

#[test]
fn force_balance_solutions() {
    let p = AttractorParams {
        detuning: -0.5,
        max_photons: 0.5,
        ..point(1.0, -0.5, 0.0)
    };
    let x = solve_xbar(&p, 1.2).unwrap();
    assert!(
        force_balance_residual(&p.with_amplitude(1.2), x)
            .unwrap()
            .abs()
            <= 1e-10
    );
    let roots = enumerate_xbar(&p, 1.2, -1.0, 2.0, 400).unwrap();
    assert!(roots.iter().any(|r| (r - x).abs() < 1e-8), "{roots:?} {x}");
    let dark = AttractorParams {
        max_photons: 0.0,
        ..p
    };
    assert_eq!(solve_xbar(&dark, 1.0).unwrap(), 0.0);
}

#[test]
fn sweep_is_ordered_and_reports_failures() {
    let p = AttractorParams {
        mech_damping: 0.01,
        ..AttractorParams::default()
    };
    let amps = [0.5, 1.0, 2.0];
    let dets = [-0.5, 0.0, 0.5, 1.0];
    let rows = attractor_sweep(&amps, &dets, &p, false);
    assert_eq!(rows.len(), 12);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row.amplitude, amps[k / 4]);
        assert_eq!(row.detuning, dets[k % 4]);
        assert!(row.failure.is_none());
        let q = p.with_amplitude(row.amplitude).with_detuning(row.detuning);
        assert_eq!(row.power, power_input(&q).unwrap());
        let loss = 0.01 * row.amplitude.powi(2) / 2.0;
        assert!((row.ratio - row.power / loss).abs() <= 1e-14 * (row.power / loss).abs().max(1.0));
    }
    let bad = AttractorParams {
        cavity_decay: -1.0,
        ..p
    };
    let rows = attractor_sweep(&[1.0], &[0.0], &bad, true);
    assert!(rows[0].failure.is_some() && rows[0].ratio.is_nan());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_forms_match_direct_series(k in 0.1f64..5.0, d in -2.0f64..2.0, a in 0.0f64..25.0) {
        let p = point(k, d, a);
        let m = ModelParams::Attractor(p);
        let f = direct_series(SeriesQuantity::Force, &m, a, 1e-15).unwrap().value.re;
        let w = direct_series(SeriesQuantity::Power, &m, a, 1e-15).unwrap().value.re;
        prop_assert!((force_avg(&p).unwrap() - f).abs() <= 1e-9 * f.abs().max(1e-6));
        prop_assert!((power_input(&p).unwrap() - w).abs() <= 1e-9 * w.abs().max(1e-6));
    }

    #[test]
    fn photon_number_is_bounded(k in 0.1f64..5.0, d in -2.0f64..2.0, a in 0.0f64..25.0) {
        let n = photon_number(&point(k, d, a)).unwrap();
        prop_assert!(n > 0.0 && n <= 1.0 + 1e-12);
    }
}
