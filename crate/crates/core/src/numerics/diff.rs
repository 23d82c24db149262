use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivativeOrder {
    First,
    Second,
}

impl DerivativeOrder {
    /// Default central-difference step for this order.
    pub fn default_step(self) -> f64 {
        match self {
            DerivativeOrder::First => 1e-5,
            DerivativeOrder::Second => 1e-4,
        }
    }
}

/// Central difference of `f` at `s`, O(step^2) accurate.
pub fn derivative(f: impl Fn(f64) -> f64, s: f64, order: DerivativeOrder, step: f64) -> f64 {
    match order {
        DerivativeOrder::First => (f(s + step) - f(s - step)) / (2.0 * step),
        DerivativeOrder::Second => (f(s + step) - 2.0 * f(s) + f(s - step)) / (step * step),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_for_quadratics_with_dyadic_step() {
        let sq = |s: f64| s * s;
        assert_eq!(derivative(sq, 3.0, DerivativeOrder::First, 0.5), 6.0);
        assert_eq!(derivative(sq, 3.0, DerivativeOrder::Second, 0.5), 2.0);
    }

    #[test]
    fn default_steps_on_quadratic() {
        let sq = |s: f64| s * s;
        let d1 = derivative(sq, 3.0, DerivativeOrder::First, DerivativeOrder::First.default_step());
        let d2 = derivative(sq, 3.0, DerivativeOrder::Second, DerivativeOrder::Second.default_step());
        assert!((d1 - 6.0).abs() < 1e-9);
        assert!((d2 - 2.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn constant_and_linear_annihilated(c in -1e3f64..1e3, m in -1000i32..1000, b in -1000i32..1000, s in -100i32..100) {
            prop_assert_eq!(derivative(|_| c, s as f64 * 0.1, DerivativeOrder::First, 1e-3), 0.0);
            let line = |x: f64| m as f64 * x + b as f64;
            prop_assert_eq!(derivative(line, s as f64, DerivativeOrder::Second, 0.25), 0.0);
        }
    }
}
