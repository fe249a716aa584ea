use optobessel::besselsum::{
    oracle_rational, oracle_sum, sum_closed, sum_rational, sum_s0, sum_s1, sum_s2, LinearFactor,
    SumKind,
};
use optobessel::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

// Direct sums over |n| <= x + 60 at 30 significant digits.
#[test]
fn reference_values() {
    let cases = [
        (
            SumKind::S0,
            c(0.7, 0.05),
            3.0,
            c(
                -0.320_550_371_015_156_840_53,
                -0.080_973_312_661_875_242_102,
            ),
        ),
        (
            SumKind::S0,
            c(-1.6, 0.5),
            12.0,
            c(
                -0.023_887_672_254_900_597_435,
                -0.072_532_088_881_430_356_742,
            ),
        ),
        (
            SumKind::S1,
            c(0.25, 0.1),
            5.0,
            c(
                -0.018_989_882_558_585_919_854,
                0.076_096_230_155_274_183_044,
            ),
        ),
        (
            SumKind::S1,
            c(2.2, 1.0),
            20.0,
            c(
                0.044_605_112_294_012_263_348,
                0.009_560_029_548_892_677_698_2,
            ),
        ),
        (
            SumKind::S2,
            c(0.5, 0.2),
            4.0,
            c(-0.327_391_301_446_710_037_76, 0.112_318_023_769_938_433_58),
        ),
        (
            SumKind::S2,
            c(-0.9, 0.05),
            25.0,
            c(-0.122_261_389_618_485_268_96, 0.064_599_506_097_882_050_944),
        ),
    ];
    for (kind, mu, x, expect) in cases {
        let v = sum_closed(kind, mu, x).unwrap();
        assert!(rel(v, expect) < 1e-11, "{kind:?} mu={mu} x={x}: {v}");
        let o = oracle_sum(kind, mu, x, 1e-12).unwrap();
        assert!(
            rel(o.value, expect) < 1e-11,
            "oracle {kind:?} mu={mu} x={x}"
        );
    }
}

#[test]
fn oracle_limits_and_agreement() {
    let mu = c(0.4, 0.3);
    let o = oracle_sum(SumKind::S0, mu, 0.001, 1e-12).unwrap();
    assert!(rel(o.value, 1.0 / mu) < 1e-5);
    assert!(o.err_estimate <= 1e-12 && o.terms_used > 0);
    assert_eq!(sum_s1(c(1.3, 0.2), 0.0).unwrap(), c(0.0, 0.0));
    assert_eq!(sum_s2(c(1.3, 0.2), 0.0).unwrap(), c(0.0, 0.0));
    assert!((sum_s0(mu, 1e-4).unwrap() - 1.0 / mu).norm() <= 1e-6);
}

#[test]
fn closed_forms_match_oracle_on_grid() {
    for i in 0..5 {
        for j in 0..5 {
            let mu = c(-2.0 + i as f64, 0.05 + 0.4875 * j as f64);
            for x in [0.5, 5.0, 25.0] {
                for kind in SumKind::ALL {
                    let closed = sum_closed(kind, mu, x).unwrap();
                    let o = oracle_sum(kind, mu, x, 1e-14).unwrap();
                    assert!(rel(closed, o.value) <= 1e-9, "{kind:?} mu={mu} x={x}");
                }
            }
        }
    }
}

#[test]
fn parity_in_the_argument() {
    let mu = c(0.35, 0.4);
    for x in [0.7, 6.0, 19.0] {
        for kind in SumKind::ALL {
            let plus = oracle_sum(kind, mu, x, 1e-14).unwrap().value;
            let minus = oracle_sum(kind, mu, -x, 1e-14).unwrap().value;
            let s = if kind == SumKind::S1 { -1.0 } else { 1.0 };
            assert!(rel(minus, s * plus) < 1e-13);
            assert!(rel(sum_closed(kind, mu, -x).unwrap(), minus) < 1e-9);
        }
    }
}

#[test]
fn oracle_is_stable_under_larger_truncation() {
    let mu = c(-0.6, 0.3);
    let a = oracle_sum(SumKind::S2, mu, 14.0, 1e-12).unwrap();
    let b = oracle_sum(SumKind::S2, mu, 14.0, 1e-200).unwrap();
    assert!(b.terms_used > a.terms_used);
    assert!((a.value - b.value).norm() < 1e-12);
}

#[test]
fn rational_weights_reduce_to_kernels() {
    let nu = c(0.45, 0.3);
    let i = c(0.0, 1.0);
    // 1 / (h_{n-1} h*_n) with h_n = i (n - nu) and h*_n = -i (n - nu*).
    let f = [
        LinearFactor::new(i, nu - 1.0),
        LinearFactor::new(-i, nu.conj()),
    ];
    for x in [0.5, 3.0, 11.0] {
        let closed = sum_rational(-1, 0, &f, x).unwrap();
        let o = oracle_rational(-1, 0, &f, x, 1e-14).unwrap();
        assert!(rel(closed, o.value) < 1e-10, "x={x}");
    }
    let g = [
        LinearFactor::new(i, nu - 2.0),
        LinearFactor::new(c(0.3, -2.0), c(0.1, -0.5)),
        LinearFactor::new(-i, nu.conj() + 1.0),
        LinearFactor::new(c(1.0, 0.0), c(-2.2, 0.9)),
    ];
    let closed = sum_rational(2, 0, &g, 7.5).unwrap();
    let o = oracle_rational(2, 0, &g, 7.5, 1e-14).unwrap();
    assert!(rel(closed, o.value) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_equals_direct(re in -2.0f64..2.0, im in 0.05f64..2.0, x in -25.0f64..25.0, k in 0usize..3) {
        let mu = c(re, im);
        let kind = SumKind::from_offset(k).unwrap();
        let closed = sum_closed(kind, mu, x).unwrap();
        let o = oracle_sum(kind, mu, x, 1e-14).unwrap();
        prop_assert!((closed - o.value).norm() <= 1e-9 * o.value.norm().max(1e-6));
    }
}
