//! Airy functions Ai, Bi and their derivatives for real argument, and the
//! zeros of Ai.
//!
//! Evaluation regions:
//!
//! * `x < -10`: oscillatory asymptotic expansions.
//! * `-10 <= x < 0`: Taylor-stepping the Airy equation `y'' = x y` outward
//!   from the closed-form values at the origin. Both solutions oscillate
//!   there, so the stepping is stable and has no interior seams.
//! * `0 <= x <= 2`: Maclaurin series of the two standard solutions.
//! * `2 < x < 8`: Bi from the Maclaurin series (all terms positive); Ai by
//!   Taylor-stepping backwards from `x = 8`.
//!   Ai is the growing solution in that direction, so the stepping keeps
//!   full relative accuracy where the series would cancel.
//! * `x >= 8`: exponential asymptotic expansions, optionally scaled by
//!   `exp(-+zeta)` with `zeta = 2/3 x^{3/2}` so Bi can be combined without
//!   overflow.
//!
//! Accuracy target on [-25, 35]: 1e-10 absolute for values of magnitude at
//! most one and 1e-10 relative otherwise. Ai and Ai' are also relatively
//! accurate on the whole positive axis.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{refine_root, Bracket};

/// Lower end of the documented accurate range.
pub const RANGE_MIN: f64 = -25.0;
/// Upper end of the documented accurate range.
pub const RANGE_MAX: f64 = 35.0;
/// Largest zero index served by [`airy_zero`].
pub const MAX_ZERO_INDEX: usize = 50;

/// Ai(0) = 3^{-2/3} / Gamma(2/3).
pub const AI_0: f64 = 0.355_028_053_887_817_2;
/// Ai'(0) = -3^{-1/3} / Gamma(1/3).
pub const AI_PRIME_0: f64 = -0.258_819_403_792_806_8;

const SQRT_3: f64 = 1.732_050_807_568_877_2;
const SQRT_PI: f64 = 1.772_453_850_905_516;

const OSCILLATORY_BELOW: f64 = -10.0;
const SERIES_UP_TO: f64 = 2.0;
const EXPONENTIAL_FROM: f64 = 8.0;
const TAYLOR_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryValues {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

impl AiryValues {
    /// `Ai Bi' - Ai' Bi`, which is `1/pi` for exact values.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

/// Airy values with the exponential behaviour factored out.
///
/// For `x > 0`, `values.ai` and `values.ai_prime` hold `Ai(x) e^zeta` and
/// `Ai'(x) e^zeta`, `values.bi` and `values.bi_prime` hold `Bi(x) e^-zeta`
/// and `Bi'(x) e^-zeta`, with `zeta = 2/3 x^{3/2}`. For `x <= 0`, `zeta` is
/// zero and the values are unscaled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledAiry {
    pub values: AiryValues,
    pub zeta: f64,
}

impl ScaledAiry {
    pub fn unscaled(&self) -> AiryValues {
        let grow = self.zeta.exp();
        let decay = (-self.zeta).exp();
        AiryValues {
            ai: self.values.ai * decay,
            ai_prime: self.values.ai_prime * decay,
            bi: self.values.bi * grow,
            bi_prime: self.values.bi_prime * grow,
        }
    }
}

fn check_range(x: f64) -> Result<()> {
    if (RANGE_MIN..=RANGE_MAX).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange { x, lo: RANGE_MIN, hi: RANGE_MAX })
    }
}

/// Ai, Bi, Ai', Bi' at `x`, restricted to the documented accurate range.
pub fn airy_eval(x: f64) -> Result<AiryValues> {
    check_range(x)?;
    Ok(eval(x))
}

/// Exponentially scaled variant of [`airy_eval`].
pub fn airy_eval_scaled(x: f64) -> Result<ScaledAiry> {
    check_range(x)?;
    Ok(eval_scaled(x))
}

/// Unchecked evaluation for any finite `x`. Beyond the documented range
/// the asymptotic forms still apply; Bi overflows near `x = 104`.
pub(crate) fn eval(x: f64) -> AiryValues {
    if x >= EXPONENTIAL_FROM {
        eval_scaled(x).unscaled()
    } else if x > SERIES_UP_TO {
        let (ai, ai_prime) = ai_by_stepping(x);
        let series = maclaurin(x);
        AiryValues { ai, ai_prime, bi: series.bi, bi_prime: series.bi_prime }
    } else if x >= 0.0 {
        maclaurin(x)
    } else if x >= OSCILLATORY_BELOW {
        negative_by_stepping(x)
    } else {
        oscillatory(-x)
    }
}

pub(crate) fn eval_scaled(x: f64) -> ScaledAiry {
    if x <= 0.0 {
        return ScaledAiry { values: eval(x), zeta: 0.0 };
    }
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let values = if x >= EXPONENTIAL_FROM {
        exponential_scaled(x, zeta)
    } else {
        let v = eval(x);
        let grow = zeta.exp();
        let decay = (-zeta).exp();
        AiryValues {
            ai: v.ai * grow,
            ai_prime: v.ai_prime * grow,
            bi: v.bi * decay,
            bi_prime: v.bi_prime * decay,
        }
    };
    ScaledAiry { values, zeta }
}

fn maclaurin(x: f64) -> AiryValues {
    let x2 = x * x;
    let x3 = x2 * x;
    let (mut f, mut g, mut fp, mut gp) = (1.0, x, 0.0, 1.0);
    let (mut f_term, mut g_term, mut fp_term, mut gp_term) = (1.0, x, 0.0, 1.0);
    for k in 1..300 {
        let k3 = 3.0 * k as f64;
        f_term *= x3 / ((k3 - 1.0) * k3);
        g_term *= x3 / (k3 * (k3 + 1.0));
        fp_term = if k == 1 { 0.5 * x2 } else { fp_term * x3 / ((k3 - 1.0) * (k3 - 3.0)) };
        gp_term *= x3 / (k3 * (k3 - 2.0));
        f += f_term;
        g += g_term;
        fp += fp_term;
        gp += gp_term;
        let small = |t: f64, s: f64| t.abs() <= 1e-17 * s.abs();
        if small(f_term, f) && small(g_term, g) && small(fp_term, fp) && small(gp_term, gp) {
            break;
        }
    }
    let (c1, c2) = (AI_0, -AI_PRIME_0);
    AiryValues {
        ai: c1 * f - c2 * g,
        ai_prime: c1 * fp - c2 * gp,
        bi: SQRT_3 * (c1 * f + c2 * g),
        bi_prime: SQRT_3 * (c1 * fp + c2 * gp),
    }
}

/// Coefficients u_k of the Airy asymptotic series and the companion
/// v_k = -(6k+1)/(6k-1) u_k, paired.
struct AsymptoticCoefficients {
    k: usize,
    u: f64,
}

impl AsymptoticCoefficients {
    fn new() -> Self {
        AsymptoticCoefficients { k: 0, u: 1.0 }
    }
}

impl Iterator for AsymptoticCoefficients {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        let k = self.k as f64;
        let out = if self.k == 0 {
            (1.0, 1.0)
        } else {
            (self.u, -(6.0 * k + 1.0) / (6.0 * k - 1.0) * self.u)
        };
        let k1 = k + 1.0;
        self.u *= (6.0 * k1 - 5.0) * (6.0 * k1 - 3.0) * (6.0 * k1 - 1.0) / (216.0 * k1 * (2.0 * k1 - 1.0));
        self.k += 1;
        Some(out)
    }
}

const MAX_ASYMPTOTIC_TERMS: usize = 40;

/// Sum of `sign^k c_k / zeta^k` over the u and v coefficients, truncated at
/// convergence or at the smallest term.
fn asymptotic_sums(zeta: f64, sign: f64) -> (f64, f64) {
    let (mut su, mut sv) = (0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut power = 1.0;
    for (u, v) in AsymptoticCoefficients::new().take(MAX_ASYMPTOTIC_TERMS) {
        let tu = u * power;
        let tv = v * power;
        let size = tu.abs().max(tv.abs());
        if size > prev {
            break;
        }
        su += tu;
        sv += tv;
        if size < 1e-17 * su.abs().min(sv.abs()) {
            break;
        }
        prev = size;
        power *= sign / zeta;
    }
    (su, sv)
}

fn exponential_scaled(x: f64, zeta: f64) -> AiryValues {
    let root4 = x.sqrt().sqrt();
    let (su_minus, sv_minus) = asymptotic_sums(zeta, -1.0);
    let (su_plus, sv_plus) = asymptotic_sums(zeta, 1.0);
    AiryValues {
        ai: su_minus / (2.0 * SQRT_PI * root4),
        ai_prime: -root4 * sv_minus / (2.0 * SQRT_PI),
        bi: su_plus / (SQRT_PI * root4),
        bi_prime: root4 * sv_plus / SQRT_PI,
    }
}

/// Ai, Bi and derivatives at `-z` for large positive `z`.
fn oscillatory(z: f64) -> AiryValues {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let root4 = z.sqrt().sqrt();
    // Even-index terms carry (-1)^k in k/2, odd-index ones likewise.
    let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut power = 1.0;
    for (k, (u, v)) in AsymptoticCoefficients::new().take(MAX_ASYMPTOTIC_TERMS).enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let tu = sign * u * power;
        let tv = sign * v * power;
        let size = tu.abs().max(tv.abs());
        if size > prev {
            break;
        }
        if k % 2 == 0 {
            pu += tu;
            pv += tv;
        } else {
            qu += tu;
            qv += tv;
        }
        if size < 1e-17 {
            break;
        }
        prev = size;
        power /= zeta;
    }
    let (sin_z, cos_z) = zeta.sin_cos();
    let cos_t = FRAC_1_SQRT_2 * (cos_z + sin_z);
    let sin_t = FRAC_1_SQRT_2 * (sin_z - cos_z);
    AiryValues {
        ai: (cos_t * pu + sin_t * qu) / (SQRT_PI * root4),
        ai_prime: root4 * (sin_t * pv - cos_t * qv) / SQRT_PI,
        bi: (-sin_t * pu + cos_t * qu) / (SQRT_PI * root4),
        bi_prime: root4 * (cos_t * pv + sin_t * qv) / SQRT_PI,
    }
}

/// One Taylor step of `y'' = x y` from `x0` by `h`.
fn taylor_step(x0: f64, y0: f64, yp0: f64, h: f64) -> (f64, f64) {
    if h == 0.0 {
        return (y0, yp0);
    }
    // Coefficients c_k of y(x0 + t) = sum c_k t^k, tracked as c_k h^k.
    let (mut cm3, mut cm2, mut cm1) = (0.0, y0, yp0 * h);
    let mut y = cm2 + cm1;
    let mut yp = yp0;
    let scale = y0.abs() + (yp0 * h).abs();
    let h2 = h * h;
    for k in 2..80 {
        let kf = k as f64;
        let ck = (x0 * cm2 * h2 + cm3 * h2 * h) / (kf * (kf - 1.0));
        y += ck;
        yp += kf * ck / h;
        if ck.abs() < 1e-18 * scale && cm1.abs() < 1e-18 * scale {
            break;
        }
        cm3 = cm2;
        cm2 = cm1;
        cm1 = ck;
    }
    (y, yp)
}

fn negative_by_stepping(x: f64) -> AiryValues {
    let steps = (-x / TAYLOR_STEP).ceil().max(1.0);
    let h = x / steps;
    let (mut ai, mut ai_prime) = (AI_0, AI_PRIME_0);
    let (mut bi, mut bi_prime) = (SQRT_3 * AI_0, -SQRT_3 * AI_PRIME_0);
    let mut x0 = 0.0;
    for _ in 0..steps as usize {
        (ai, ai_prime) = taylor_step(x0, ai, ai_prime, h);
        (bi, bi_prime) = taylor_step(x0, bi, bi_prime, h);
        x0 += h;
    }
    AiryValues { ai, bi, ai_prime, bi_prime }
}

fn ai_by_stepping(x: f64) -> (f64, f64) {
    let anchor = EXPONENTIAL_FROM;
    let start = eval_scaled(anchor);
    let decay = (-start.zeta).exp();
    let (mut y, mut yp) = (start.values.ai * decay, start.values.ai_prime * decay);
    let steps = ((anchor - x) / TAYLOR_STEP).ceil().max(1.0);
    let h = (x - anchor) / steps;
    let mut x0 = anchor;
    for _ in 0..steps as usize {
        (y, yp) = taylor_step(x0, y, yp, h);
        x0 += h;
    }
    (y, yp)
}

/// The n-th zero of Ai sits at `-a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryZero {
    pub n: usize,
    pub a_n: f64,
}

/// Leading-order asymptotic estimate `a_n ~ (3 pi (4n - 1) / 8)^{2/3}`.
pub fn zero_seed(n: usize) -> f64 {
    (3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0).powf(2.0 / 3.0)
}

/// Refine the n-th zero of Ai (1 <= n <= 50) from its asymptotic seed.
pub fn airy_zero(n: usize) -> Result<AiryZero> {
    if !(1..=MAX_ZERO_INDEX).contains(&n) {
        return Err(Error::invalid(format!("Airy zero index {n} outside 1..={MAX_ZERO_INDEX}")));
    }
    let seed = zero_seed(n);
    let ai_neg = |s: f64| eval(-s).ai;
    let bracket = Bracket::from_fn(ai_neg, seed - 0.05, seed + 0.05)?;
    let a_n = refine_root(
        |s| {
            let v = eval(-s);
            (v.ai, -v.ai_prime)
        },
        bracket,
        1e-12,
    )?;
    Ok(AiryZero { n, a_n })
}
