//! Composite Gauss-Legendre quadrature on explicit panel lists.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Points per panel used by the composite rules.
pub const ORDER: usize = 24;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n` points; roots of `P_n` found by Newton iteration from
    /// the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Complex64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| f(mid + half * x) * *w)
            .sum::<Complex64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub(crate) fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER))
}

/// Integral of `f` over `[a, b]` split into `panels` equal panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = default_rule();
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| rule.integrate(&f, a + k as f64 * h, a + (k + 1) as f64 * h))
        .sum()
}

/// Sums panel integrals over consecutive breakpoints, in order.
pub fn integrate_complex_breakpoints<F: Fn(f64) -> Complex64>(f: F, breaks: &[f64]) -> Complex64 {
    let rule = default_rule();
    breaks
        .windows(2)
        .map(|w| rule.integrate_complex(&f, w[0], w[1]))
        .sum()
}

/// Breakpoints on `[0, end]` refined geometrically towards the origin: the
/// first panel is `[0, first]`, widths double until they reach `max_width`,
/// then stay uniform.
pub fn graded_breakpoints(first: f64, max_width: f64, end: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut x = 0.0;
    let mut width = first.min(max_width);
    while x < end {
        x = (x + width).min(end);
        breaks.push(x);
        width = (2.0 * width).min(max_width);
    }
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(10);
        // exact up to degree 19
        let val = rule.integrate(|x| x.powi(18) + 3.0 * x.powi(7), -1.0, 1.0);
        assert!((val - 2.0 / 19.0).abs() < 1e-15);
        let w: f64 = rule.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn odd_order_includes_center() {
        let rule = GaussLegendre::new(7);
        assert!(rule.nodes[3].abs() < 1e-15);
        assert!((rule.integrate(|x| x.cos(), 0.0, PI / 2.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn composite_gaussian() {
        let val = integrate(|x| (-x * x / 2.0).exp(), -10.0, 10.0, 20);
        assert!((val - (2.0 * PI).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn graded_breaks_cover_interval() {
        let b = graded_breakpoints(1e-3, 0.5, 3.0);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 3.0);
        assert!((b[1] - 1e-3).abs() < 1e-18);
        assert!(b
            .windows(2)
            .all(|w| w[1] > w[0] && w[1] - w[0] <= 0.5 + 1e-15));
    }
}
