use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;

/// An interval known to enclose a sign change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        let valid = lo < hi && f_lo.is_finite() && f_hi.is_finite() && f_lo * f_hi <= 0.0;
        if valid {
            Ok(Bracket { lo, hi, f_lo, f_hi })
        } else {
            Err(Error::InvalidBracket { lo, hi, f_lo, f_hi })
        }
    }

    /// Evaluate `f` at both ends and validate.
    pub fn from_fn(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Self> {
        Bracket::new(lo, hi, f(lo), f(hi))
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Safeguarded Newton iteration inside `bracket`.
///
/// `f` returns the value and the derivative. Newton steps that leave the
/// current bracket, or fail to halve it, fall back to bisection, so the
/// iteration always converges. Returns once the enclosing bracket is no
/// wider than `tol`, certifying a Newton-converged point by probing
/// `tol / 2` on either side.
pub fn refine_root(f: impl Fn(f64) -> (f64, f64), bracket: Bracket, tol: f64) -> Result<f64> {
    let Bracket { mut lo, mut hi, f_lo, f_hi } = Bracket::new(bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("root tolerance must be positive"));
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    let lo_sign = f_lo.signum();
    let mut x = 0.5 * (lo + hi);
    let mut last_width = hi - lo;

    for _ in 0..MAX_ITERATIONS {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= tol {
            return Ok(x);
        }

        let newton = x - fx / dfx;
        let in_bracket = newton.is_finite() && newton > lo && newton < hi;
        let shrinking = (newton - x).abs() < 0.5 * last_width;
        last_width = hi - lo;
        if !(in_bracket && shrinking) {
            x = 0.5 * (lo + hi);
            continue;
        }
        if (newton - x).abs() < 0.25 * tol {
            let left = (newton - 0.5 * tol).max(lo);
            let right = (newton + 0.5 * tol).min(hi);
            let (f_left, _) = f(left);
            let (f_right, _) = f(right);
            if f_left == 0.0 {
                return Ok(left);
            }
            if f_right == 0.0 {
                return Ok(right);
            }
            if f_left.signum() != f_right.signum() {
                return Ok(newton);
            }
        }
        x = newton;
    }
    Err(Error::RootNotConverged { lo, hi, iterations: MAX_ITERATIONS })
}
