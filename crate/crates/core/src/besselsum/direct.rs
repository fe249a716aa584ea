use num_complex::Complex64;

use super::SumResult;
use crate::complexfn::besselj_int_seq;
use crate::error::{Error, Result};

/// Integer-order Bessel values `J_n(x)` for `|n| <= len`, signed `x`.
pub struct DirectTerm {
    seq: Vec<f64>,
    negative: bool,
}

impl DirectTerm {
    pub fn new(x: f64, nmax: usize) -> Self {
        DirectTerm {
            seq: besselj_int_seq(nmax, x.abs()),
            negative: x < 0.0,
        }
    }

    /// `J_n(x)`; zero beyond the stored range.
    pub fn get(&self, n: i64) -> f64 {
        let m = n.unsigned_abs() as usize;
        let Some(&v) = self.seq.get(m) else {
            return 0.0;
        };
        let odd = m % 2 == 1;
        let flip = odd && ((n < 0) != self.negative);
        if flip {
            -v
        } else {
            v
        }
    }
}

/// Upper bound on `sum_{m >= m0} (|x|/2)^m / m!`, which dominates
/// `sum_{m >= m0} |J_m(x)|`.
///
/// Infinite unless `m0 + 1 > |x|/2`, where the ratio of consecutive terms is
/// below one and the sum is geometric.
pub fn tail_bound(x: f64, m0: usize) -> f64 {
    let h = 0.5 * x.abs();
    if h == 0.0 {
        return if m0 == 0 { 1.0 } else { 0.0 };
    }
    let ratio = h / (m0 as f64 + 1.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let ln_first = m0 as f64 * h.ln() - ln_factorial(m0);
    ln_first.exp() / (1.0 - ratio)
}

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct Accumulator {
    sum: Complex64,
    comp: Complex64,
}

impl Accumulator {
    fn add(&mut self, v: Complex64) {
        self.sum.re = neumaier(self.sum.re, v.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, v.im, &mut self.comp.im);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn neumaier(sum: f64, v: f64, comp: &mut f64) -> f64 {
    let t = sum + v;
    if sum.abs() >= v.abs() {
        *comp += (sum - t) + v;
    } else {
        *comp += (v - t) + sum;
    }
    t
}

/// Sums `term(n, J)` over `n` in `-N..=N` with `N` certified by a tail bound.
///
/// `reach` is the largest order shift `|a|` appearing in any `J_{n+a}` used
/// by `term`. `weight_tail(N)` must bound the weight magnitude for all
/// `|n| > N`. Each term is assumed to be a weight times a product of two
/// Bessel values.
pub fn direct_sum<W, T>(
    x: f64,
    reach: usize,
    tol: f64,
    weight_tail: W,
    term: T,
) -> Result<SumResult>
where
    W: Fn(usize) -> f64,
    T: Fn(i64, &DirectTerm) -> Complex64,
{
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("x must be finite, got {x}")));
    }
    let ax = x.abs().ceil() as usize;
    let cap = 10 * ax + 500;
    let mut n = ax + 60;
    let bound = |n: usize| 2.0 * weight_tail(n) * tail_bound(x, (n + 1).saturating_sub(reach));
    let mut err = bound(n);
    while !(err <= tol) {
        n *= 2;
        if n > cap {
            return Err(Error::Convergence {
                what: "direct sum",
                terms: n,
                estimate: err,
            });
        }
        err = bound(n);
    }
    let j = DirectTerm::new(x, n + reach);
    let mut acc = Accumulator::default();
    for k in -(n as i64)..=(n as i64) {
        acc.add(term(k, &j));
    }
    Ok(SumResult {
        value: acc.total(),
        terms_used: n,
        err_estimate: err,
    })
}
