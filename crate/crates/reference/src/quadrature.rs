//! Fixed-order composite Simpson, independent of the adaptive kernel.

/// Composite Simpson on `panels` equal panels (rounded up to even).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = (panels.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Simpson at `panels` and at double resolution, combined with one
/// Richardson step (the O(h^4) error term cancels).
pub fn simpson_richardson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let coarse = simpson(&f, a, b, panels);
    let fine = simpson(&f, a, b, 2 * panels);
    fine + (fine - coarse) / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn richardson_on_exponential() {
        let v = simpson_richardson(f64::exp, 0.0, 1.0, 64);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }
}
