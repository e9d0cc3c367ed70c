//! Gauss–Legendre rules and a globally adaptive 1-D integrator.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Fixed n-point Gauss–Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are found by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        s * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Result of [`adaptive_gauss_legendre`].
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Globally adaptive Gauss–Legendre integration of `f` over `[a, b]`.
///
/// Each panel is integrated with the `order`-point rule and once more on its
/// two halves; the difference is the panel's error estimate. The panel with
/// the largest estimate is bisected until the summed estimate falls below
/// `rel_tol * |I| + abs_tol`.
pub fn adaptive_gauss_legendre<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<AdaptiveResult> {
    const ORDER: usize = 15;
    const MAX_PANELS: usize = 20_000;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration bounds must be finite"));
    }
    if a == b {
        return Ok(AdaptiveResult {
            value: 0.0,
            error_estimate: 0.0,
            panels: 0,
        });
    }
    let rule = GaussLegendre::new(ORDER);
    let make = |a: f64, b: f64| {
        let whole = rule.integrate(&f, a, b);
        let m = 0.5 * (a + b);
        let halves = rule.integrate(&f, a, m) + rule.integrate(&f, m, b);
        Panel {
            a,
            b,
            value: halves,
            error: (whole - halves).abs(),
        }
    };

    // Start from a few equal panels so narrow features near `a` are seen.
    let mut panels: Vec<Panel> = (0..8)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / 8.0;
            let hi = a + (b - a) * (i + 1) as f64 / 8.0;
            make(lo, hi)
        })
        .collect();

    loop {
        let value: f64 = crate::summation::compensated(panels.iter().map(|p| p.value));
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= rel_tol * value.abs() + abs_tol {
            return Ok(AdaptiveResult {
                value,
                error_estimate: error,
                panels: panels.len(),
            });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Quadrature(format!(
                "error estimate {error:.3e} after {MAX_PANELS} panels"
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty panel list");
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        panels.push(make(p.a, m));
        panels.push(make(m, p.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 15, 32, 64] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights().iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let g = GaussLegendre::new(6);
        for deg in 0..12 {
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            let v = g.integrate(|x| x.powi(deg), -1.0, 1.0);
            assert!((v - exact).abs() < 1e-14, "degree {deg}: {v} vs {exact}");
        }
    }

    #[test]
    fn adaptive_gaussian_moment() {
        // ∫_0^∞ k^3 e^{-k^2} dk = 1/2
        let r = adaptive_gauss_legendre(|k| k.powi(3) * (-k * k).exp(), 0.0, 12.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn adaptive_handles_kink() {
        let r = adaptive_gauss_legendre(|x| (x - 0.3).abs(), 0.0, 1.0, 1e-12, 1e-15).unwrap();
        assert_relative_eq!(r.value, 0.5 * (0.09 + 0.49), max_relative = 1e-11);
    }

    #[test]
    fn empty_interval() {
        let r = adaptive_gauss_legendre(|x| x, 2.0, 2.0, 1e-10, 0.0).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
