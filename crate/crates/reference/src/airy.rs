//! Airy functions from the Maclaurin series in 640-bit fixed point.
//!
//! With `y'' = x y` the two standard power-series solutions are
//!
//! ```text
//!   f(x) = sum_k a_k x^{3k},      a_0 = 1, a_k = a_{k-1} / ((3k-1) 3k)
//!   g(x) = sum_k b_k x^{3k+1},    b_0 = 1, b_k = b_{k-1} / (3k (3k+1))
//! ```
//!
//! and `Ai = c1 f - c2 g`, `Bi = sqrt(3) (c1 f + c2 g)` with
//! `c1 = Ai(0) = 3^{-2/3} / Gamma(2/3)` and `c2 = -Ai'(0) = 3^{-1/3} / Gamma(1/3)`.
//! The constants are carried to 160 decimal digits, so the series keeps
//! well over 40 significant digits after cancellation anywhere in [-25, 35].

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

const FRAC_BITS: u64 = 640;

const AI_0: &str = "0.355028053887817239260063186004183176397979174199177240583326510300810042450126712957174246054040271688420448730349495839758292670446161937105040240022585386384";
const NEG_AI_PRIME_0: &str = "0.258819403792806798405183560189203963479091138354934582210001813856102772676790280654196405827275384313371193211789133381275035952167626014785050989848419446632";
const SQRT_3: &str = "1.732050807568877293527446341505872366942805253810380628055806979451933016908800037081146186757248575675626141415406703029969945094998952478811655512094373648528";

/// Ai, Ai', Bi, Bi' at one argument, rounded to the nearest `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceAiry {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

fn one() -> BigInt {
    BigInt::from(1) << FRAC_BITS
}

fn parse_decimal(text: &str) -> BigInt {
    let (int_part, frac_part) = text.split_once('.').expect("decimal point");
    let digits: BigInt = format!("{int_part}{frac_part}").parse().expect("digits");
    let scale = BigInt::from(10).pow(frac_part.len() as u32);
    (digits << FRAC_BITS) / scale
}

fn from_f64(x: f64) -> BigInt {
    assert!(x.is_finite(), "reference Airy needs a finite argument");
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, exp2) = if exponent == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    };
    let shift = FRAC_BITS as i64 + exp2;
    let magnitude = BigInt::from(mantissa);
    let magnitude = if shift >= 0 {
        magnitude << shift as u64
    } else {
        magnitude >> (-shift) as u64
    };
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

fn to_f64(value: &BigInt) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    let magnitude = value.abs();
    let bits = magnitude.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (&magnitude >> shift as u64).to_u64().expect("64 bits") as f64;
    let exp2 = shift - FRAC_BITS as i64;
    // Two steps keep the scale factor inside the f64 exponent range.
    let half = exp2 / 2;
    let out = top * 2f64.powi(half as i32) * 2f64.powi((exp2 - half) as i32);
    if value.sign() == Sign::Minus {
        -out
    } else {
        out
    }
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FRAC_BITS
}

/// Evaluate Ai, Ai', Bi, Bi' at `x` by brute-force series summation.
pub fn reference_airy(x: f64) -> ReferenceAiry {
    let x_fixed = from_f64(x);
    let x2 = mul(&x_fixed, &x_fixed);
    let x3 = mul(&x2, &x_fixed);

    // Running terms of f, g, f', g'.
    let mut f_term = one();
    let mut g_term = x_fixed.clone();
    let mut fp_term = BigInt::zero();
    let mut gp_term = one();
    let mut f = f_term.clone();
    let mut g = g_term.clone();
    let mut fp = BigInt::zero();
    let mut gp = gp_term.clone();

    let mut k: i64 = 1;
    loop {
        f_term = mul(&f_term, &x3) / ((3 * k - 1) * (3 * k));
        g_term = mul(&g_term, &x3) / ((3 * k) * (3 * k + 1));
        fp_term = if k == 1 {
            &x2 / 2
        } else {
            mul(&fp_term, &x3) / ((3 * k - 1) * (3 * k - 3))
        };
        gp_term = mul(&gp_term, &x3) / ((3 * k) * (3 * k - 2));
        f += &f_term;
        g += &g_term;
        fp += &fp_term;
        gp += &gp_term;
        let exhausted =
            f_term.is_zero() && g_term.is_zero() && fp_term.is_zero() && gp_term.is_zero();
        if exhausted && k > 2 {
            break;
        }
        k += 1;
        assert!(k < 5000, "series did not terminate for x = {x}");
    }

    let c1 = parse_decimal(AI_0);
    let c2 = parse_decimal(NEG_AI_PRIME_0);
    let sqrt3 = parse_decimal(SQRT_3);
    let (c1f, c2g) = (mul(&c1, &f), mul(&c2, &g));
    let (c1fp, c2gp) = (mul(&c1, &fp), mul(&c2, &gp));
    ReferenceAiry {
        ai: to_f64(&(&c1f - &c2g)),
        ai_prime: to_f64(&(&c1fp - &c2gp)),
        bi: to_f64(&mul(&sqrt3, &(&c1f + &c2g))),
        bi_prime: to_f64(&mul(&sqrt3, &(&c1fp + &c2gp))),
    }
}

/// The n-th zero of Ai, returned as the positive number `a_n` with
/// `Ai(-a_n) = 0`, by bisection inside `[lo, hi]` down to width `1e-13`.
///
/// Panics when `Ai(-s)` does not change sign on the bracket.
pub fn reference_airy_zero(lo: f64, hi: f64) -> f64 {
    let ai = |s: f64| reference_airy(-s).ai;
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = ai(lo);
    assert!(f_lo * ai(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let f_mid = ai(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
