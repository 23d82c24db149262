use qbounce::airy::{airy_eval, airy_zero, zero_seed, AiryValues};
use qbounce::numerics::{derivative, DerivativeOrder};
use qbounce_reference::{reference_airy, reference_airy_zero};

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Absolute error when the reference is at most one in magnitude,
/// relative error otherwise.
fn mixed_error(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

fn components(v: &AiryValues) -> [f64; 4] {
    [v.ai, v.ai_prime, v.bi, v.bi_prime]
}

#[test]
fn matches_series_oracle_on_grid() {
    let mut worst = (0.0, 0.0);
    for x in grid(-20.0, 30.0, 1000) {
        let got = airy_eval(x).unwrap();
        let want = reference_airy(x);
        let want = [want.ai, want.ai_prime, want.bi, want.bi_prime];
        for (g, w) in components(&got).into_iter().zip(want) {
            let e = mixed_error(g, w);
            if e > worst.0 {
                worst = (e, x);
            }
        }
    }
    assert!(worst.0 <= 1e-10, "worst mixed error {:e} at x = {}", worst.0, worst.1);
}

#[test]
fn ai_relatively_accurate_on_positive_axis() {
    for x in grid(0.0, 30.0, 301) {
        let got = airy_eval(x).unwrap();
        let want = reference_airy(x);
        assert!((got.ai - want.ai).abs() <= 1e-12 * want.ai.abs(), "Ai({x})");
        assert!((got.ai_prime - want.ai_prime).abs() <= 1e-12 * want.ai_prime.abs(), "Ai'({x})");
    }
}

#[test]
fn spot_values() {
    let v = airy_eval(0.0).unwrap();
    assert!((v.ai - 0.355_028_05).abs() < 1e-8);
    assert!((v.bi - 0.614_926_63).abs() < 1e-8);
    assert!((v.ai_prime + 0.258_819_40).abs() < 1e-8);
    assert!((v.bi_prime - 0.448_288_36).abs() < 1e-8);
    let v = airy_eval(1.0).unwrap();
    let r = reference_airy(1.0);
    assert!((v.ai - r.ai).abs() < 1e-15);
    assert!((v.bi - r.bi).abs() < 1e-14);
    assert!((v.ai - 0.135_292_42).abs() < 1e-8);
    assert!((v.bi - 1.207_423_59).abs() < 1e-8);
}

#[test]
fn wronskian_on_dense_grid() {
    for x in grid(-20.0, 30.0, 1000) {
        let w = airy_eval(x).unwrap().wronskian();
        assert!((w - std::f64::consts::FRAC_1_PI).abs() <= 1e-10, "x = {x}: {w}");
    }
}

#[test]
fn monotone_on_positive_axis() {
    let values: Vec<AiryValues> = grid(0.0, 30.0, 600).map(|x| airy_eval(x).unwrap()).collect();
    for pair in values.windows(2) {
        assert!(pair[0].ai > 0.0 && pair[1].ai > 0.0);
        assert!(pair[1].ai < pair[0].ai);
        assert!(pair[0].bi > 0.0);
        assert!(pair[1].bi > pair[0].bi);
    }
}

#[test]
fn satisfies_airy_equation() {
    for x in grid(-10.0, 10.0, 201) {
        let step = DerivativeOrder::Second.default_step();
        let ai2 = derivative(|t| airy_eval(t).unwrap().ai, x, DerivativeOrder::Second, step);
        let bi2 = derivative(|t| airy_eval(t).unwrap().bi, x, DerivativeOrder::Second, step);
        let v = airy_eval(x).unwrap();
        assert!((ai2 - x * v.ai).abs() < 1e-6, "Ai residual at {x}");
        // Bi reaches ~1e8 at x = 10; compare relative to its size there.
        assert!((bi2 - x * v.bi).abs() < 1e-6 * v.bi.abs().max(1.0), "Bi residual at {x}");
    }
}

#[test]
fn zeros_match_bisection_oracle() {
    for n in 1..=10 {
        let z = airy_zero(n).unwrap();
        let seed = zero_seed(n);
        let want = reference_airy_zero(seed - 0.05, seed + 0.05);
        assert!((z.a_n - want).abs() < 1e-9, "a_{n}: {} vs {}", z.a_n, want);
        assert!(airy_eval(-z.a_n).unwrap().ai.abs() < 1e-9);
    }
    assert!((airy_zero(1).unwrap().a_n - 2.338_107_41).abs() < 1e-8);
    assert!((airy_zero(2).unwrap().a_n - 4.087_949_44).abs() < 1e-8);
}

#[test]
fn zeros_increase_and_stay_near_seed() {
    let zeros: Vec<f64> = (1..=50).map(|n| airy_zero(n).unwrap().a_n).collect();
    assert!(zeros.windows(2).all(|w| w[0] < w[1]));
    for (i, z) in zeros.iter().enumerate() {
        assert!((z - zero_seed(i + 1)).abs() <= 0.05);
    }
    let gap = zeros[0] - zero_seed(1);
    assert!((gap - 0.017_86).abs() < 1e-4, "WKB seed offset {gap}");
}
