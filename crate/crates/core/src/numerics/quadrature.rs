//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |value|)`. Per-panel errors use the
//! QUADPACK heuristic, which is realistic for the smooth integrands here.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kronrod abscissae on [0, 1]; odd indices are the Gauss points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Hard cutoff for semi-infinite integrals.
pub const HARD_CUTOFF: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Result of [`integrate_to_infinity`]: the truncated integral plus where it
/// was truncated and the tail bound that justified it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiInfiniteResult {
    pub result: QuadratureResult,
    pub cutoff: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Maximum number of panels before giving up.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { max_panels: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval_checked(f: &impl Fn(f64) -> f64, s: f64) -> Result<f64> {
    let value = f(s);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteIntegrand { at: s, value })
    }
}

/// One Gauss–Kronrod 15 panel.
pub(crate) fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_checked(f, center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval_checked(f, center - dx)?;
        let f2 = eval_checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let width = half.abs();
    let value = res_k * half;
    res_abs *= width;
    res_asc *= width;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    error = error.max(2.0 * f64::EPSILON * res_abs);
    Ok((value, error))
}

/// Adaptive integral of `f` over `[a, b]` with the default panel budget.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    integrate_with(&QuadratureConfig::default(), f, a, b, abs_tol, rel_tol)
}

pub fn integrate_with(
    config: &QuadratureConfig,
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(format!("integration limits must be finite, got [{a}, {b}]")));
    }
    if a > b {
        return Err(Error::invalid(format!("integration limits out of order: [{a}, {b}]")));
    }
    if !(abs_tol > 0.0 && rel_tol > 0.0) {
        return Err(Error::invalid("quadrature tolerances must be positive"));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, abs_error_estimate: 0.0, evaluations: 0 });
    }

    let (value, error) = gauss_kronrod_15(&f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_error = error;

    loop {
        if total_error <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= config.max_panels {
            return Err(Error::QuadratureNotConverged {
                a,
                b,
                estimate: total,
                error_estimate: total_error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            heap.push(worst);
            return Err(Error::QuadratureNotConverged {
                a,
                b,
                estimate: total,
                error_estimate: total_error,
                evaluations,
            });
        }
        let (v1, e1) = gauss_kronrod_15(&f, worst.a, mid)?;
        let (v2, e2) = gauss_kronrod_15(&f, mid, worst.b)?;
        evaluations += 30;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        total += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
    }

    // Resum to shed the drift of the running totals.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let abs_error_estimate = panels.iter().map(|p| p.error).sum();
    Ok(QuadratureResult { value, abs_error_estimate, evaluations })
}

/// Integral of `f` over `[a, inf)` by truncation.
///
/// The cutoff `c` advances in unit steps from `a` until the tail bound
/// `|f(c)| / (1 - r)`, with `r = |f(c+1)| / |f(c)|`, drops below
/// `abs_tol / 10`. The bound is valid when `|f|` is decreasing beyond `c`
/// with non-increasing unit-step ratios, which holds for exponential and
/// Airy-type decay. A third sample at `c + 2` guards against stopping at
/// an isolated node. The bound is folded into the reported error estimate.
pub fn integrate_to_infinity(
    f: impl Fn(f64) -> f64,
    a: f64,
    abs_tol: f64,
) -> Result<SemiInfiniteResult> {
    if !a.is_finite() {
        return Err(Error::invalid(format!("lower limit must be finite, got {a}")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }
    let target = abs_tol / 10.0;
    let mut cutoff = a + 1.0;
    let mut bound;
    loop {
        let f0 = eval_checked(&f, cutoff)?.abs();
        let f1 = eval_checked(&f, cutoff + 1.0)?.abs();
        let f2 = eval_checked(&f, cutoff + 2.0)?.abs();
        bound = if f0 == 0.0 && f1 == 0.0 && f2 == 0.0 {
            0.0
        } else if f1 < f0 && f2 <= f1 && f2 * f0 <= f1 * f1 {
            f0 / (1.0 - f1 / f0)
        } else {
            f64::INFINITY
        };
        if bound < target {
            break;
        }
        cutoff += 1.0;
        if cutoff > HARD_CUTOFF {
            return Err(Error::TailNotReached { cutoff: HARD_CUTOFF, bound, target });
        }
    }
    let mut result = integrate(&f, a, cutoff, 0.9 * abs_tol, 4.0 * f64::EPSILON)?;
    result.evaluations += 3 * (cutoff - a) as usize;
    result.abs_error_estimate += bound;
    Ok(SemiInfiniteResult { result, cutoff, tail_bound: bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_linear() {
        let r = integrate(|_| 1.0, 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.evaluations >= 1);
        let r = integrate(|s| s, 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert!(r.abs_error_estimate >= 0.0);
    }

    #[test]
    fn degenerate_interval_is_zero() {
        let r = integrate(|s| s * s, 2.0, 2.0, 1e-12, 1e-12).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.evaluations, 0);
    }

    #[test]
    fn rejects_bad_limits_and_tolerances() {
        assert!(integrate(|s| s, 1.0, 0.0, 1e-9, 1e-9).is_err());
        assert!(integrate(|s| s, 0.0, f64::INFINITY, 1e-9, 1e-9).is_err());
        assert!(integrate(|s| s, 0.0, 1.0, 0.0, 1e-9).is_err());
    }

    #[test]
    fn nan_reports_abscissa() {
        let err = integrate(|s| if s > 0.5 { f64::NAN } else { s }, 0.0, 1.0, 1e-9, 1e-9)
            .unwrap_err();
        match err {
            Error::NonFiniteIntegrand { at, value } => {
                assert!(at > 0.5);
                assert!(value.is_nan());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_convergence_carries_best_estimate() {
        let config = QuadratureConfig { max_panels: 3 };
        let err = integrate_with(&config, |s: f64| s.sqrt().sin() / s.sqrt(), 1e-12, 100.0, 1e-15, 1e-15)
            .unwrap_err();
        match err {
            Error::QuadratureNotConverged { estimate, evaluations, .. } => {
                assert!(estimate.is_finite());
                assert!(evaluations > 15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exponential_tail() {
        let r = integrate_to_infinity(|s: f64| (-s).exp(), 0.0, 1e-10).unwrap();
        assert!((r.result.value - 1.0).abs() < 1e-10);
        assert!(r.tail_bound < 1e-11);
        assert!(r.cutoff < HARD_CUTOFF);
    }

    #[test]
    fn zero_integrand_to_infinity() {
        let r = integrate_to_infinity(|_| 0.0, 0.0, 1e-10).unwrap();
        assert_eq!(r.result.value, 0.0);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn slow_tail_hits_hard_cutoff() {
        let err = integrate_to_infinity(|s| 1.0 / (1.0 + s * s), 0.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::TailNotReached { .. }));
    }
}
