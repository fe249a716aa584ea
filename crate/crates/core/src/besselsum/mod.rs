//! Closed forms for `sum_n J_{n-k}(x) J_n(x) / (n + mu)` with `k = 0, 1, 2`,
//! a partial-fraction reduction of rational weights onto those kernels, and
//! certified brute-force summation used as the validation oracle.

mod direct;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complexfn::{besselj_pair, sinpi_complex, SeriesControl};
use crate::error::{finite, Error, Result};

pub use direct::{direct_sum, tail_bound, DirectTerm};

/// Distance from an integer inside which the kernels refuse to evaluate.
pub const NEAR_POLE_RADIUS: f64 = 1e-12;

/// Selects `sum J_{n-k} J_n / (n + mu)` for `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumKind {
    S0,
    S1,
    S2,
}

impl SumKind {
    pub const ALL: [SumKind; 3] = [SumKind::S0, SumKind::S1, SumKind::S2];

    /// The order offset `k`.
    pub fn offset(self) -> usize {
        match self {
            SumKind::S0 => 0,
            SumKind::S1 => 1,
            SumKind::S2 => 2,
        }
    }

    pub fn from_offset(k: usize) -> Option<SumKind> {
        match k {
            0 => Some(SumKind::S0),
            1 => Some(SumKind::S1),
            2 => Some(SumKind::S2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SumKind::S0 => "S0",
            SumKind::S1 => "S1",
            SumKind::S2 => "S2",
        }
    }
}

/// Value of a series together with how it was obtained.
///
/// `terms_used` is zero for closed forms. For direct sums it is the
/// truncation order `N` of the range `-N..=N`, and `err_estimate` bounds the
/// absolute truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumResult {
    pub value: Complex64,
    pub terms_used: usize,
    pub err_estimate: f64,
}

fn guard_pole(mu: Complex64) -> Result<()> {
    let k = mu.re.round();
    if (mu - Complex64::new(k, 0.0)).norm() < NEAR_POLE_RADIUS {
        return Err(Error::NearPole {
            mu,
            radius: NEAR_POLE_RADIUS,
        });
    }
    Ok(())
}

/// `pi / sin(pi s) * J_p(x) J_q(x)` for real `x >= 0`.
pub fn pi_over_sin_pair(s: Complex64, p: Complex64, q: Complex64, x: f64) -> Result<Complex64> {
    guard_pole(s)?;
    let ctl = SeriesControl::default();
    let pair = besselj_pair(p, q, x, &ctl)?;
    finite("pi_over_sin_pair", PI / sinpi_complex(s)? * pair)
}

/// Closed form of `sum_n J_{n-k}(x) J_n(x) / (n + mu)`, any real `x`.
pub fn sum_closed(kind: SumKind, mu: Complex64, x: f64) -> Result<Complex64> {
    guard_pole(mu)?;
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("x must be finite, got {x}")));
    }
    let k = kind.offset();
    let v = pi_over_sin_pair(mu, -mu, mu + k as f64, x.abs())?;
    // Integer-order products J_{n-k} J_n have parity (-1)^k in x.
    let sign = match kind {
        SumKind::S1 => -1.0,
        _ => 1.0,
    };
    let parity = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    Ok(sign * parity * v)
}

/// `sum_n J_n(x)^2 / (n + mu) = pi / sin(pi mu) J_{-mu}(x) J_mu(x)`.
pub fn sum_s0(mu: Complex64, x: f64) -> Result<Complex64> {
    sum_closed(SumKind::S0, mu, x)
}

/// `sum_n J_{n-1}(x) J_n(x) / (n + mu) = -pi / sin(pi mu) J_{-mu}(x) J_{mu+1}(x)`.
pub fn sum_s1(mu: Complex64, x: f64) -> Result<Complex64> {
    sum_closed(SumKind::S1, mu, x)
}

/// `sum_n J_{n-2}(x) J_n(x) / (n + mu) = pi / sin(pi mu) J_{-mu}(x) J_{mu+2}(x)`.
pub fn sum_s2(mu: Complex64, x: f64) -> Result<Complex64> {
    sum_closed(SumKind::S2, mu, x)
}

/// Direct summation of the same series with a certified tail bound.
pub fn oracle_sum(kind: SumKind, mu: Complex64, x: f64, tol: f64) -> Result<SumResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tol must be positive, got {tol}"
        )));
    }
    guard_pole(mu)?;
    let k = kind.offset() as i64;
    let weight_tail = |n: usize| {
        let m = n as f64 + 1.0;
        1.0 / (m - mu.re.abs()).max(mu.im.abs()).max(f64::MIN_POSITIVE)
    };
    direct_sum(x, 2, tol, weight_tail, |n, j: &DirectTerm| {
        Complex64::new(j.get(n - k) * j.get(n), 0.0) / (n as f64 + mu)
    })
}

/// One factor `scale * (n - pole)` of a rational weight in the summation
/// index `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFactor {
    pub scale: Complex64,
    pub pole: Complex64,
}

impl LinearFactor {
    pub fn new(scale: Complex64, pole: Complex64) -> Self {
        LinearFactor { scale, pole }
    }

    pub fn eval(&self, n: f64) -> Complex64 {
        self.scale * (n - self.pole)
    }
}

/// Relative separation below which two poles count as coincident.
const COINCIDENT_POLES: f64 = 1e-10;

/// Residues `R_j` of `1 / prod_j scale_j (n - pole_j)` at each simple pole.
pub fn partial_fractions(factors: &[LinearFactor]) -> Result<Vec<Complex64>> {
    let scale: Complex64 = factors.iter().map(|f| f.scale).product();
    if scale.norm() == 0.0 {
        return Err(Error::InvalidInput("zero scale in rational weight".into()));
    }
    let mut out = Vec::with_capacity(factors.len());
    for (j, fj) in factors.iter().enumerate() {
        let mut den = scale;
        for (k, fk) in factors.iter().enumerate() {
            if k != j {
                let d = fj.pole - fk.pole;
                if d.norm() <= COINCIDENT_POLES * (1.0 + fj.pole.norm()) {
                    return Err(Error::InvalidInput(format!(
                        "coincident poles {} and {} in rational weight",
                        fj.pole, fk.pole
                    )));
                }
                den *= d;
            }
        }
        out.push(1.0 / den);
    }
    Ok(out)
}

/// Closed form of `sum_n J_{n+a}(x) J_{n+b}(x) / prod_j scale_j (n - pole_j)`
/// for `|a - b| <= 2` and at least one factor.
pub fn sum_rational(a: i64, b: i64, factors: &[LinearFactor], x: f64) -> Result<Complex64> {
    if factors.is_empty() {
        return Err(Error::InvalidInput("rational weight needs a factor".into()));
    }
    let hi = a.max(b);
    let kind = SumKind::from_offset((a - b).unsigned_abs() as usize)
        .ok_or_else(|| Error::InvalidInput(format!("order offset |{a} - {b}| exceeds 2")))?;
    let residues = partial_fractions(factors)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (f, r) in factors.iter().zip(residues) {
        // With m = n + hi: J_{m-k} J_m / (m - hi - pole).
        total += r * sum_closed(kind, -(hi as f64) - f.pole, x)?;
    }
    finite("sum_rational", total)
}

/// Direct counterpart of [`sum_rational`].
pub fn oracle_rational(
    a: i64,
    b: i64,
    factors: &[LinearFactor],
    x: f64,
    tol: f64,
) -> Result<SumResult> {
    let reach = a.unsigned_abs().max(b.unsigned_abs()) as usize;
    let weight = |n: f64| -> Complex64 {
        factors
            .iter()
            .map(|f| f.eval(n))
            .product::<Complex64>()
            .inv()
    };
    let weight_tail = |n: usize| {
        let m = n as f64 + 1.0;
        weight(m).norm().max(weight(-m).norm())
    };
    direct_sum(x, reach, tol, weight_tail, |n, j: &DirectTerm| {
        weight(n as f64) * (j.get(n + a) * j.get(n + b))
    })
}
