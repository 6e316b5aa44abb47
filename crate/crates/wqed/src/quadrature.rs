//! Composite Gauss–Legendre quadrature.
//!
//! One engine for every real-space and spectral integral in the crate:
//! panels are summed in a fixed order so results are bit-reproducible.

use num_complex::Complex64 as C64;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; converges to machine
/// precision in a handful of steps for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
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
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A reusable composite rule over `[a, b]` split into `panels` panels with a
/// 16-point Gauss–Legendre rule per panel.
#[derive(Debug, Clone)]
pub struct PanelRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelRule {
    pub fn new(a: f64, b: f64, panels: usize) -> Self {
        Self::with_order(a, b, panels, 16)
    }

    pub fn with_order(a: f64, b: f64, panels: usize, order: usize) -> Self {
        assert!(panels >= 1 && b > a);
        let (gx, gw) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        Self { nodes, weights }
    }

    /// Rule sized for an integrand whose fastest oscillation has angular
    /// frequency `max_freq`: at least 16 nodes per period.
    pub fn oscillatory(a: f64, b: f64, max_freq: f64) -> Self {
        let periods = (b - a) * max_freq.abs() / (2.0 * std::f64::consts::PI);
        let panels = (periods.ceil() as usize).max(8);
        Self::new(a, b, panels)
    }

    /// Oscillatory rule on `[-l, l]` with a panel boundary at the origin, for
    /// integrands with a kink there (`|x|`-type profiles).
    pub fn symmetric_oscillatory(l: f64, max_freq: f64) -> Self {
        let mut left = Self::oscillatory(-l, 0.0, max_freq);
        let right = Self::oscillatory(0.0, l, max_freq);
        left.nodes.extend_from_slice(&right.nodes);
        left.weights.extend_from_slice(&right.weights);
        left
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(x);
        }
        acc
    }

    pub fn integrate_c64<F: FnMut(f64) -> C64>(&self, mut f: F) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x) * w;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn low_order_nodes_match_known_values() {
        let (x, w) = gauss_legendre(2);
        assert_relative_eq!(x[1], 1.0 / 3.0f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(w[0], 1.0, max_relative = 1e-14);
        let (x, w) = gauss_legendre(3);
        assert_relative_eq!(x[1], 0.0, epsilon = 1e-15);
        assert_relative_eq!(x[2], (3.0f64 / 5.0).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(w[1], 8.0 / 9.0, max_relative = 1e-14);
        assert_relative_eq!(w[0], 5.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn exact_for_polynomials() {
        // 16-point rule integrates x^31 exactly
        let rule = PanelRule::new(-1.0, 2.0, 1);
        let exact = (2.0f64.powi(32) - 1.0) / 32.0;
        assert_relative_eq!(rule.integrate(|x| x.powi(31)), exact, max_relative = 1e-12);
    }

    #[test]
    fn oscillatory_integral() {
        let rule = PanelRule::oscillatory(0.0, 20.0 * PI, 13.0);
        let val = rule.integrate(|x| (13.0 * x).cos().powi(2));
        assert_relative_eq!(val, 10.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_integral() {
        let rule = PanelRule::new(-40.0, 40.0, 32);
        let val = rule.integrate(|x| (-x * x / 2.0).exp());
        assert_relative_eq!(val, (2.0 * PI).sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn complex_integrand() {
        let rule = PanelRule::oscillatory(0.0, 2.0 * PI, 1.0);
        let val = rule.integrate_c64(|x| (C64::i() * x).exp());
        assert!(val.norm() < 1e-13);
    }
}
