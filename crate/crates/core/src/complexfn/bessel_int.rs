/// Overflow guard for the unnormalized backward recurrence. Squares of the
/// stored values must stay finite, so the bound sits well below `sqrt(MAX)`.
const RESCALE_AT: f64 = 1e100;
const RESCALE_BY: f64 = 1e-100;

/// Starting order for the backward recurrence.
fn miller_start(nmax: usize, x: f64) -> usize {
    let base = (nmax as f64).max(x.ceil());
    (base + 20.0 * x.cbrt() + 50.0) as usize
}

/// `J_0(x), ..., J_nmax(x)` for `x > 0` by Miller's backward recurrence.
///
/// The unnormalized sequence is fixed by `J_0^2 + 2 sum J_k^2 = 1`, and the
/// overall sign by `J_0 + 2 sum J_2k = 1`.
fn miller(x: f64, nmax: usize) -> Vec<f64> {
    let start = miller_start(nmax, x);
    let mut out = vec![0.0; nmax + 1];
    let two_over_x = 2.0 / x;
    let mut next = 0.0_f64; // j_{k+1}
    let mut cur = 1.0_f64; // j_k
    let mut sumsq = 0.0_f64;
    let mut even = 0.0_f64;
    let mut k = start;
    loop {
        if k <= nmax {
            out[k] = cur;
        }
        if k == 0 {
            sumsq += cur * cur;
            even += cur;
            break;
        }
        sumsq += 2.0 * cur * cur;
        if k % 2 == 0 {
            even += 2.0 * cur;
        }
        let prev = (k as f64) * two_over_x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if cur.abs() > RESCALE_AT {
            cur *= RESCALE_BY;
            next *= RESCALE_BY;
            sumsq *= RESCALE_BY * RESCALE_BY;
            even *= RESCALE_BY;
            for v in out.iter_mut().skip(k + 1) {
                *v *= RESCALE_BY;
            }
        }
    }
    let norm = sumsq.sqrt().copysign(even);
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Integer-order Bessel function `J_n(x)` for any sign of `n` and `x`.
///
/// Values smaller than about `1e-300` underflow to zero.
pub fn besselj_int(n: i64, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x).
    let flips = (n < 0) as u32 + (x < 0.0) as u32;
    let sign = if m % 2 == 1 && flips % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    let ax = x.abs();
    if ax == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    sign * miller(ax, m)[m]
}

/// `J_0(x), ..., J_nmax(x)` for `x >= 0` in one backward sweep.
pub fn besselj_int_seq(nmax: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0, "besselj_int_seq expects x >= 0");
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    miller(x, nmax)
}
