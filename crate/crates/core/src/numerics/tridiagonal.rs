//! Lowest eigenvalues of a symmetric tridiagonal matrix by Sturm-sequence
//! bisection. Only eigenvalues are computed; cost is O(N) per bisection step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalSystem {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::invalid("tridiagonal system needs at least one row"));
        }
        if off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::invalid(format!(
                "off-diagonal length {} does not match diagonal length {}",
                off_diagonal.len(),
                diagonal.len()
            )));
        }
        if diagonal.iter().chain(&off_diagonal).any(|v| !v.is_finite()) {
            return Err(Error::invalid("tridiagonal entries must be finite"));
        }
        Ok(TridiagonalSystem { diagonal, off_diagonal })
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    /// Number of eigenvalues strictly below `x` (Sturm count of negative
    /// pivots in the LDL^T factorization of `T - x I`).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diagonal[0] - x;
        for i in 0..self.diagonal.len() {
            if i > 0 {
                let e = self.off_diagonal[i - 1];
                q = self.diagonal[i] - x - e * e / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn pivot_floor(&self) -> f64 {
        let max_e2 = self.off_diagonal.iter().map(|e| e * e).fold(1.0, f64::max);
        f64::MIN_POSITIVE * max_e2
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diagonal.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }
}

/// The `k` smallest eigenvalues in nondecreasing order.
pub fn eigenvalues_tridiagonal(system: &TridiagonalSystem, k: usize) -> Result<Vec<f64>> {
    let n = system.len();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("requested {k} eigenvalues of a {n}x{n} system")));
    }
    if system.off_diagonal.iter().all(|&e| e == 0.0) {
        let mut d = system.diagonal.clone();
        d.sort_by(f64::total_cmp);
        d.truncate(k);
        return Ok(d);
    }

    let (g_lo, g_hi) = system.gershgorin();
    let scale = g_lo.abs().max(g_hi.abs());
    let slack = 2.0 * f64::EPSILON * scale + f64::MIN_POSITIVE;
    let (g_lo, g_hi) = (g_lo - slack, g_hi + slack);

    let mut out = Vec::with_capacity(k);
    let mut floor = g_lo;
    for index in 0..k {
        // Find the smallest x with count_below(x) > index.
        let (mut lo, mut hi) = (floor, g_hi);
        while hi - lo > 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if system.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let value = 0.5 * (lo + hi);
        out.push(value);
        floor = lo;
    }
    Ok(out)
}
