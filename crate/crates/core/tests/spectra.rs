use qbounce::numerics::eigenvalues_tridiagonal;
use qbounce::spectra::{compare_spectra, discretize};
use qbounce_reference::reference_airy_zero;

/// Zeros of Ai by bisection on the multiprecision series.
fn oracle_zeros(k: usize) -> Vec<f64> {
    let brackets = [
        (2.3, 2.4),
        (4.0, 4.2),
        (5.4, 5.6),
        (6.7, 6.9),
        (7.9, 8.0),
        (9.0, 9.1),
        (10.0, 10.1),
        (11.0, 11.1),
    ];
    brackets[..k].iter().map(|&(lo, hi)| reference_airy_zero(lo, hi)).collect()
}

#[test]
fn default_comparison_is_isospectral() {
    let cmp = compare_spectra(1.0, 40.0, 4000, 6).unwrap();
    assert!(cmp.max_pairwise_gap < 5e-4, "{}", cmp.max_pairwise_gap);
    let zeros = oracle_zeros(6);
    for (n, z) in zeros.iter().enumerate() {
        assert!((cmp.airy_reference[n] - z).abs() < 1e-9);
        assert!((cmp.eigenvalues_qbb[n] - z).abs() < 5e-4, "n = {n}");
        assert!((cmp.eigenvalues_lambda[n] - z).abs() < 5e-4, "n = {n}");
    }
    assert!(cmp.eigenvalues_qbb.windows(2).all(|w| w[0] < w[1]));
    assert!(cmp.eigenvalues_lambda.windows(2).all(|w| w[0] < w[1]));
    assert!((cmp.eigenvalues_qbb[0] - 2.338_11).abs() < 2e-4);
}

#[test]
fn huge_lambda_makes_the_matrices_coincide() {
    let cmp = compare_spectra(1e6, 40.0, 4000, 6).unwrap();
    assert!(cmp.max_pairwise_gap < 1e-8, "{}", cmp.max_pairwise_gap);
}

#[test]
fn second_order_convergence() {
    // points + 1 doubles, so the spacing halves exactly.
    let a1 = oracle_zeros(1)[0];
    let error = |points: usize| {
        let sys = discretize(|s| s, 40.0, points).unwrap();
        (eigenvalues_tridiagonal(&sys, 1).unwrap()[0] - a1).abs()
    };
    let (coarse, fine, finer) = (error(999), error(1999), error(3999));
    for ratio in [coarse / fine, fine / finer] {
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }
}

#[test]
fn gap_does_not_grow_under_refinement() {
    let gaps: Vec<f64> = [999, 1999, 3999].iter().map(|&p| compare_spectra(1.0, 40.0, p, 6).unwrap().max_pairwise_gap).collect();
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
    for p in [999, 3999] {
        let cmp = compare_spectra(1.0, 40.0, p, 6).unwrap();
        let bound = cmp.eigenvalues_qbb.iter().zip(&cmp.eigenvalues_lambda).zip(&cmp.airy_reference);
        for ((q, l), a) in bound {
            assert!((q - l).abs() <= (q - a).abs() + (l - a).abs() + 1e-12);
        }
    }
}

#[test]
fn no_spurious_or_missing_levels() {
    let zeros = oracle_zeros(8);
    let family = qbounce::susy::IsospectralPotential::new(1.0, qbounce::bouncer::ModeConstants::Exact).unwrap();
    let qbb = discretize(|s| s, 40.0, 4000).unwrap();
    let deformed = discretize(|s| family.family_potential(s).unwrap(), 40.0, 4000).unwrap();
    for energy in [1.0, 3.0, 5.0, 6.0, 7.5, 9.5, 10.5] {
        let want = zeros.iter().filter(|&&a| a < energy).count();
        assert_eq!(qbb.count_below(energy), want, "E = {energy}");
        assert_eq!(deformed.count_below(energy), want, "E = {energy}");
    }
}
