use proptest::prelude::*;
use qbounce::bouncer::{Eigenmode, ModeConstants};
use qbounce::numerics::integrate_to_infinity;
use qbounce::susy::{deformed_norm, witten_superpotential, IsospectralPotential};
use qbounce_reference::{reference_airy, simpson_richardson};

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn exact(lambda: f64) -> IsospectralPotential {
    IsospectralPotential::new(lambda, ModeConstants::Exact).unwrap()
}

#[test]
fn witten_superpotential_spot_values() {
    let mode = Eigenmode::ground(ModeConstants::Exact);
    let r = reference_airy(0.0);
    let at_turning = witten_superpotential(&mode, mode.energy).unwrap();
    assert!((at_turning + r.ai_prime / r.ai).abs() < 1e-12);
    assert!((at_turning - 0.729_01).abs() < 1e-5);
    // Pole at the wall with residue -1.
    for s in [1e-3, 1e-4, 1e-5] {
        assert!((s * witten_superpotential(&mode, s).unwrap() + 1.0).abs() < 2.0 * s);
    }
}

#[test]
fn witten_superpotential_grows_like_root_s() {
    // Asymptotically w_p ~ sqrt(s - S_1) + 1/(4 (s - S_1)); at s = 25 the
    // ratio to sqrt(s) itself is still ~0.955.
    let mode = Eigenmode::ground(ModeConstants::Exact);
    let s = 25.0;
    let w = witten_superpotential(&mode, s).unwrap();
    let x = s - mode.energy;
    assert!((w / x.sqrt() - 1.0).abs() < 3e-3);
    assert!((w - x.sqrt() - 0.25 / x).abs() < 1e-3);
    let ratios: Vec<f64> = [5.0, 10.0, 25.0].iter().map(|&s| witten_superpotential(&mode, s).unwrap() / s.sqrt()).collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn bernoulli_equation() {
    for lambda in [0.1, 1.0, 10.0] {
        let pot = exact(lambda);
        for s in grid(0.2, 10.0, 99) {
            let r = pot.bernoulli_residual(s).unwrap();
            assert!(r.relative().abs() < 1e-6, "lambda = {lambda}, s = {s}: {r:?}");
            // Absolute while v is moderate; beyond that roundoff in v dominates.
            if r.scale < 1e3 {
                assert!(r.raw.abs() < 1e-6, "lambda = {lambda}, s = {s}: {r:?}");
            }
        }
    }
}

#[test]
fn bernoulli_large_lambda() {
    let pot = exact(1e9);
    for s in [0.5, 2.0, 5.0] {
        let psi = pot.ground_mode().psi(s).unwrap();
        let ratio = pot.bernoulli_v(s).unwrap() / pot.lambda();
        assert!((ratio * psi * psi - 1.0).abs() < 1e-8);
    }
}

#[test]
fn riccati_consistency() {
    for lambda in [0.1, 1.0, 10.0] {
        let pot = exact(lambda);
        for s in grid(0.2, 10.0, 99) {
            let r = pot.riccati_residual(s).unwrap();
            assert!(r.abs() < 1e-6, "lambda = {lambda}, s = {s}: {r}");
        }
    }
}

#[test]
fn witten_superpotential_satisfies_its_riccati_equation() {
    // w_p^2 - w_p' = s - S_1, derivative from oracle values.
    let mode = Eigenmode::ground(ModeConstants::Exact);
    let h = 1e-5;
    let oracle_w = |s: f64| {
        let r = reference_airy(s - mode.energy);
        -r.ai_prime / r.ai
    };
    for s in grid(0.2, 10.0, 50) {
        let w = witten_superpotential(&mode, s).unwrap();
        let slope = (oracle_w(s + h) - oracle_w(s - h)) / (2.0 * h);
        assert!((w * w - slope - (s - mode.energy)).abs() < 1e-6, "s = {s}");
    }
}

#[test]
fn two_forms_of_the_family_agree() {
    for lambda in [0.1, 1.0, 10.0] {
        let pot = exact(lambda);
        for s in grid(0.2, 10.0, 99) {
            let expanded = pot.family_potential(s).unwrap();
            let log_form = pot.family_potential_log_form(s).unwrap();
            assert!((expanded - log_form).abs() < 1e-6, "lambda = {lambda}, s = {s}: {expanded} {log_form}");
        }
    }
}

#[test]
fn family_from_general_superpotential() {
    // V = w_g^2 - w_g' + S_1, with w_g' by differences.
    let pot = exact(1.0);
    let h = 1e-5;
    for s in grid(0.3, 8.0, 40) {
        let wg = pot.general_superpotential(s).unwrap();
        let slope = (pot.general_superpotential(s + h).unwrap() - pot.general_superpotential(s - h).unwrap()) / (2.0 * h);
        let v = wg * wg - slope + pot.ground_mode().energy;
        assert!((v - pot.family_potential(s).unwrap()).abs() < 1e-6, "s = {s}");
    }
}

#[test]
fn deformed_ground_state_is_normalized() {
    for lambda in [0.5, 1.0, 5.0] {
        let pot = exact(lambda);
        let total = integrate_to_infinity(|s| pot.deformed_ground_state(s).unwrap().powi(2), 0.0, 1e-12).unwrap();
        assert!((total.result.value - 1.0).abs() < 1e-8, "lambda = {lambda}: {}", total.result.value);
    }
}

#[test]
fn normalization_against_independent_quadrature() {
    // int psi^2 / (I0 + lambda)^2 = 1 / (lambda (lambda + 1)), with both
    // psi and I0 built from the multiprecision series.
    let a1 = Eigenmode::ground(ModeConstants::Exact).energy;
    let norm = 1.0 / reference_airy(-a1).ai_prime.abs();
    let density = |s: f64| (norm * reference_airy(s - a1).ai).powi(2);
    let lambda = 1.0;
    let step = 0.05;
    let mut i0 = 0.0;
    let mut total = 0.0;
    for k in 0..300 {
        let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
        let mid = 0.5 * (a + b);
        let i_mid = i0 + simpson_richardson(density, a, mid, 8);
        let i_end = i0 + simpson_richardson(density, a, b, 8);
        let f = |s: f64, i: f64| density(s) / (i + lambda).powi(2);
        total += step / 6.0 * (f(a, i0) + 4.0 * f(mid, i_mid) + f(b, i_end));
        i0 = i_end;
    }
    assert!((deformed_norm(lambda).powi(2) * total - 1.0).abs() < 1e-6, "{total}");
}

#[test]
fn deformed_ground_state_is_nodeless() {
    for lambda in [0.01, 0.5, 1.0, 5.0, 100.0] {
        let pot = exact(lambda);
        assert!(grid(1e-3, 15.0, 3000).all(|s| pot.deformed_ground_state(s).unwrap() > 0.0), "{lambda}");
    }
}

#[test]
fn schrodinger_residual_at_the_original_energy() {
    let pot = exact(1.0);
    for s in grid(0.2, 10.0, 99) {
        let r = pot.schrodinger_residual(s).unwrap();
        assert!(r.abs() < 1e-5, "s = {s}: {r}");
    }
}

#[test]
fn paper_constants_leave_a_residual_floor() {
    // psi_1 with WKB constants misses the wall, so the deformation is not
    // exactly isospectral; the residual is small but reported, not zero.
    let pot = IsospectralPotential::new(1.0, ModeConstants::PaperWkb).unwrap();
    let worst = grid(0.2, 10.0, 99).map(|s| pot.schrodinger_residual(s).unwrap().abs()).fold(0.0, f64::max);
    assert!(worst.is_finite());
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn large_lambda_limits() {
    let pot = exact(1e6);
    let dev = grid(0.0, 12.0, 1201).map(|s| (pot.family_potential(s).unwrap() - s).abs()).fold(0.0, f64::max);
    assert!(dev < 5e-6, "{dev}");

    let pot = exact(1e3);
    let dist = grid(0.0, 12.0, 1201)
        .map(|s| (pot.deformed_ground_state(s).unwrap() - pot.ground_mode().psi(s).unwrap()).abs())
        .fold(0.0, f64::max);
    assert!(dist < 1e-3, "{dist}");

    let base = Eigenmode::ground(ModeConstants::Exact);
    let pot = exact(1e6);
    for s in [0.5, 3.0, 7.0] {
        let d = pot.schrodinger_residual(s).unwrap();
        let second = qbounce::numerics::derivative(
            |t| base.psi(t).unwrap(),
            s,
            qbounce::numerics::DerivativeOrder::Second,
            1e-4,
        );
        let undeformed = -second + (s - base.energy) * base.psi(s).unwrap();
        assert!((d - undeformed).abs() < 1e-6, "s = {s}");
    }
}

#[test]
fn deformation_decays_with_lambda() {
    let sup = |lambda: f64| {
        let pot = exact(lambda);
        grid(0.0, 12.0, 1201).map(|s| (pot.family_potential(s).unwrap() - s).abs()).fold(0.0, f64::max)
    };
    let values: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0].into_iter().map(sup).collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]), "{values:?}");
}

#[test]
fn family_reverts_to_the_line() {
    let pot = exact(1.0);
    for s in grid(7.0, 12.0, 51) {
        assert!((pot.family_potential(s).unwrap() - s).abs() < 1e-3, "s = {s}");
    }
    let bulk = grid(0.5, 4.0, 36).map(|s| (pot.family_potential(s).unwrap() - s).abs()).fold(0.0, f64::max);
    assert!(bulk > 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn general_superpotential_dominates(lambda in 0.01f64..100.0, s in 0.05f64..12.0) {
        let pot = exact(lambda);
        prop_assert!(pot.general_superpotential(s).unwrap() >= pot.witten_superpotential(s).unwrap());
    }

    #[test]
    fn deformed_state_is_positive(lambda in 0.01f64..100.0, s in 0.01f64..15.0) {
        prop_assert!(exact(lambda).deformed_ground_state(s).unwrap() > 0.0);
    }
}
