//! Shared numerical routines: normal density/CDF, Gauss-Legendre quadrature,
//! and compensated summation.

use std::f64::consts::{PI, SQRT_2};

/// Standard normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF, computed through `erfc` so both tails stay accurate.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Density of N(mean, sd^2) at `x`. Requires `sd > 0`.
pub fn normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    std_normal_pdf((x - mean) / sd) / sd
}

/// E[max(X, 0)] for X ~ N(mean, sd^2).
///
/// For sd = 0 this degenerates to max(mean, 0).
pub fn normal_positive_part_mean(mean: f64, sd: f64) -> f64 {
    if sd == 0.0 {
        return mean.max(0.0);
    }
    let z = mean / sd;
    mean * std_normal_cdf(z) + sd * std_normal_pdf(z)
}

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on the Legendre polynomial roots.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-based initial guess for the i-th root.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
        GaussLegendre { nodes, weights }
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = KahanSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(mid + half * x));
        }
        half * acc.value()
    }
}

/// Legendre polynomial P_n(x) and its derivative via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Kahan-compensated accumulator; the result is a deterministic function of the
/// sequence of added values.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_cdf_reference_values() {
        assert_abs_diff_eq!(std_normal_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(std_normal_cdf(1.0), 0.841344746068543, epsilon = 1e-12);
        assert_abs_diff_eq!(std_normal_cdf(-2.0), 0.022750131948179, epsilon = 1e-12);
        // The lower tail keeps precision instead of collapsing to zero, and
        // the upper tail only saturates once 1 - cdf falls below f64 epsilon.
        assert!(std_normal_cdf(-10.0) > 0.0);
        assert!(std_normal_cdf(8.0) < 1.0);
    }

    #[test]
    fn positive_part_mean_matches_monte_carlo() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Normal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let normal = Normal::new(0.7, 1.3).unwrap();
        let n = 1_000_000;
        let mut acc = KahanSum::new();
        for _ in 0..n {
            let x: f64 = normal.sample(&mut rng);
            acc.add(x.max(0.0));
        }
        let mc = acc.value() / n as f64;
        let exact = normal_positive_part_mean(0.7, 1.3);
        // 3 standard errors of the clipped variable (std < 1.3).
        assert!((mc - exact).abs() < 3.0 * 1.3 / (n as f64).sqrt());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        // 8 nodes are exact through degree 15.
        let exact = |k: u32, a: f64, b: f64| (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0);
        for k in 0..=15u32 {
            let got = rule.integrate(-1.3, 2.1, |x: f64| x.powi(k as i32));
            assert_abs_diff_eq!(got, exact(k, -1.3, 2.1), epsilon = 1e-10 * exact(k, -1.3, 2.1).abs().max(1.0));
        }
    }

    #[test]
    fn gauss_legendre_gaussian_mass() {
        let rule = GaussLegendre::new(64);
        let mass = rule.integrate(-8.0, 8.0, std_normal_pdf);
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kahan_sum_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        assert_abs_diff_eq!(acc.value(), 1.0 + 1e-12, epsilon = 1e-15);
    }
}
