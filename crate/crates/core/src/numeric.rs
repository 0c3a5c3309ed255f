//! Small numeric helpers shared across modules.

/// Golden-section search for a local maximum of `f` on `[a, b]`.
///
/// Deterministic, derivative-free, and robust for the unimodal brackets we
/// feed it (a grid cell around an argmax). Returns `(x, f(x))` for the best
/// point seen, including the bracket endpoints.
pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    debug_assert!(a <= b);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iters {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        let (xc, fc) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if fc > best.1 {
            best = (xc, fc);
        }
    }
    for (xe, fe) in [(a, f(a)), (b, f(b))] {
        if fe > best.1 {
            best = (xe, fe);
        }
    }
    best
}

/// Uniform grid of `n` samples covering `[a, b]` inclusive (`n >= 2`).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    debug_assert!(n >= 2);
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|k| if k + 1 == n { b } else { a + step * k as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_max_finds_parabola_peak() {
        let (x, fx) = golden_max(|t| 1.0 - (t - 0.3).powi(2), 0.0, 1.0, 60);
        // Near a quadratic peak the function is flat to rounding within
        // ~sqrt(eps) of the argmax, so that is the localization limit.
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn golden_max_keeps_endpoint_maxima() {
        let (x, _) = golden_max(|t| t, 0.0, 1.0, 40);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn linspace_hits_both_ends() {
        let g = linspace(0.0, 2.0, 5);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[4], 2.0);
        assert!((g[2] - 1.0).abs() < 1e-15);
    }
}
