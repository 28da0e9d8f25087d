//! Small float helpers shared by the solvers.

use crate::error::{Error, Result};

/// `log(e^a + e^b)` without overflow; either argument may be `-inf`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `log(sum e^x_i)`.
pub fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let hi = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log(xs.map(|x| libm::exp(x - hi)).sum::<f64>())
}

/// `ln x` with `ln 0 = -inf`.
pub fn ln(x: f64) -> f64 {
    if x > 0.0 {
        libm::log(x)
    } else {
        f64::NEG_INFINITY
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

pub fn logit(p: f64) -> f64 {
    libm::log(p) - libm::log1p(-p)
}

/// `log(1 + e^x)`.
pub fn softplus(x: f64) -> f64 {
    log_add_exp(0.0, x)
}

/// Sign-change bracket of an increasing function, grown by doubling from `[-1, 1]`.
pub fn bracket_increasing(f: &impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (-1.0, 1.0);
    for _ in 0..64 {
        if f(lo) <= 0.0 {
            break;
        }
        hi = lo;
        lo *= 2.0;
    }
    for _ in 0..64 {
        if f(hi) >= 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if f(lo) > 0.0 || f(hi) < 0.0 {
        return Err(Error::NoConvergence { iterations: 128 });
    }
    Ok((lo, hi))
}

/// Outcome of a bracketing root search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracketed {
    pub root: f64,
    /// Half-width of the final bracket.
    pub half_width: f64,
    pub iterations: usize,
}

/// Bisection of an increasing function until the bracket half-width is at most `tol`.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, tol: f64, max_iter: usize) -> Result<Bracketed> {
    let (mut lo, mut hi) = bracket_increasing(&f)?;
    for it in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let v = f(mid);
        if v == 0.0 {
            return Ok(Bracketed {
                root: mid,
                half_width: 0.0,
                iterations: it + 1,
            });
        }
        if half <= tol || mid == lo || mid == hi {
            return Ok(Bracketed {
                root: mid,
                half_width: half,
                iterations: it + 1,
            });
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lae_limits() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 1.5), 1.5);
        assert!((log_add_exp(0.0, 0.0) - core::f64::consts::LN_2).abs() < 1e-16);
        assert!((log_add_exp(1000.0, 1000.0) - 1000.0 - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn bisect_cubic() {
        let r = bisect_increasing(|x| x * x * x - 2.0, 1e-12, 200).unwrap();
        assert!((r.root - libm::cbrt(2.0)).abs() <= r.half_width + 1e-15);
    }
}
