//! Composite Gauss–Legendre quadrature.
//!
//! Nodes and weights of the reference rule on `[-1, 1]` are computed once in
//! `f64` by Newton iteration on the Legendre polynomial and then cast to the
//! working scalar. A composite rule splits `[a, b]` into equal panels and maps
//! the reference rule onto each.

use crate::scalar::{Complex, Real};

/// Default number of nodes per panel.
pub const DEFAULT_ORDER: usize = 16;
/// Default number of panels.
pub const DEFAULT_PANELS: usize = 64;

/// Reference Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..(order + 1) / 2 {
            // Tricomi initial guess for the i-th root, descending from +1.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule with a fixed panel count.
#[derive(Debug, Clone)]
pub struct Composite<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    panels: usize,
}

impl<T: Real> Composite<T> {
    pub fn new(order: usize, panels: usize) -> Self {
        assert!(panels >= 1, "panel count must be positive");
        let rule = GaussLegendre::new(order);
        Self {
            nodes: rule.nodes.iter().map(|&x| T::lit(x)).collect(),
            weights: rule.weights.iter().map(|&w| T::lit(w)).collect(),
            panels,
        }
    }

    pub fn with_panels(panels: usize) -> Self {
        Self::new(DEFAULT_ORDER, panels)
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Same rule with twice as many panels.
    pub fn refined(&self) -> Self {
        Self {
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            panels: self.panels * 2,
        }
    }

    /// All `(x, w)` pairs of the composite rule on `[a, b]`.
    pub fn points(&self, a: T, b: T) -> Vec<(T, T)> {
        let h = (b - a) / T::from_usize_lossy(self.panels);
        let half = h / T::lit(2.0);
        let mut out = Vec::with_capacity(self.panels * self.order());
        for p in 0..self.panels {
            let mid = a + h * T::from_usize_lossy(p) + half;
            for (xi, wi) in self.nodes.iter().zip(&self.weights) {
                out.push((mid + half * *xi, half * *wi));
            }
        }
        out
    }

    pub fn integrate<F>(&self, a: T, b: T, mut f: F) -> T
    where
        F: FnMut(T) -> T,
    {
        let h = (b - a) / T::from_usize_lossy(self.panels);
        let half = h / T::lit(2.0);
        let mut total = T::zero();
        for p in 0..self.panels {
            let mid = a + h * T::from_usize_lossy(p) + half;
            let mut panel = T::zero();
            for (xi, wi) in self.nodes.iter().zip(&self.weights) {
                panel = panel + *wi * f(mid + half * *xi);
            }
            total = total + panel * half;
        }
        total
    }

    pub fn integrate_complex<F>(&self, a: T, b: T, mut f: F) -> Complex<T>
    where
        F: FnMut(T) -> Complex<T>,
    {
        let re_im = self.points(a, b).into_iter().fold(
            Complex::new(T::zero(), T::zero()),
            |acc, (x, w)| acc + f(x) * w,
        );
        re_im
    }
}

impl<T: Real> Default for Composite<T> {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER, DEFAULT_PANELS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_rule_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(16);
        let sum_w: f64 = rule.weights().iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
        // degree 30 is integrated exactly by 16 nodes
        let integral: f64 = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(x, w)| w * x.powi(30))
            .sum();
        assert!((integral - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        for order in [1, 2, 5, 16, 33] {
            let rule = GaussLegendre::new(order);
            for w in rule.nodes().windows(2) {
                assert!(w[0] < w[1]);
            }
            for (a, b) in rule.nodes().iter().zip(rule.nodes().iter().rev()) {
                assert!((a + b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn composite_integrates_oscillatory_integrand() {
        let q = Composite::<f64>::default();
        let l = 2.0 * std::f64::consts::PI;
        let v = q.integrate(0.0, l, |x| (7.0 * x).sin().powi(2));
        assert!((v - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn works_in_single_precision() {
        let q = Composite::<f32>::with_panels(8);
        let v = q.integrate(0.0, 1.0, |x| x * x);
        assert!((v - 1.0 / 3.0).abs() < 1e-6);
    }
}
