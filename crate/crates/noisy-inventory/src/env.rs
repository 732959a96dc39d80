//! Simulator for the noisily observed single-product inventory system.
//!
//! State transitions, observations, and the one-stage cost structure:
//! a fixed-plus-linear ordering cost and a piecewise-linear convex holding
//! cost charged on the post-demand inventory level.

use crate::config::{DemandKind, DynamicsKind, ProblemConfig};
use crate::numeric::{normal_pdf, normal_positive_part_mean, GaussLegendre, KahanSum};
use crate::rng::EpisodeRng;
use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

/// One simulated episode: true levels, orders, observations, demands, and
/// realized stage costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    pub y: Vec<f64>,
    pub d: Vec<f64>,
    pub cost: Vec<f64>,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.a.len()
    }

    /// Sum of alpha^t * cost_t over the episode.
    pub fn total_discounted_cost(&self, alpha: f64) -> f64 {
        let mut total = KahanSum::new();
        let mut factor = 1.0;
        for &c in &self.cost {
            total.add(factor * c);
            factor *= alpha;
        }
        total.value()
    }
}

/// Post-demand inventory level.
pub fn dynamics_step(x: f64, a: f64, d: f64, kind: DynamicsKind) -> f64 {
    let w = x + a - d;
    match kind {
        DynamicsKind::Backorders => w,
        DynamicsKind::LostSales => w.max(0.0),
    }
}

/// Noisy reading of the true level.
pub fn observe(x: f64, eta: f64) -> f64 {
    x + eta
}

/// Fixed-plus-linear ordering cost; the fixed part is charged only for
/// strictly positive orders.
pub fn ordering_cost(a: f64, fixed_cost: f64, unit_cost: f64) -> f64 {
    assert!(a >= 0.0, "order quantity must be nonnegative, got {a}");
    if a > 0.0 {
        fixed_cost + unit_cost * a
    } else {
        0.0
    }
}

/// Piecewise-linear convex holding cost.
pub fn holding_cost(x: f64, cfg: &ProblemConfig) -> f64 {
    if x > 0.0 {
        cfg.holding_slope_pos * x
    } else {
        -cfg.backorder_slope * x
    }
}

/// Expected one-stage cost of ordering `a` at true level `x`:
/// ordering cost plus the demand-expectation of the holding cost.
pub fn expected_stage_cost(x: f64, a: f64, cfg: &ProblemConfig) -> f64 {
    assert!(x.is_finite() && a.is_finite(), "stage cost inputs must be finite");
    ordering_cost(a, cfg.fixed_cost, cfg.unit_cost) + expected_holding_after_demand(x + a, cfg)
}

/// E[h(L(w - D))] for the configured demand distribution and dynamics.
pub fn expected_holding_after_demand(w: f64, cfg: &ProblemConfig) -> f64 {
    match (cfg.demand_kind, cfg.dynamics_kind) {
        (DemandKind::Gaussian, DynamicsKind::Backorders) => {
            expected_holding_gaussian(w - cfg.demand_mean, cfg.sigma_d_sq, cfg)
        }
        _ => expected_holding_by_quadrature(w, cfg),
    }
}

/// Closed form of E[h(X)] for X ~ N(mean, var) and the piecewise-linear h.
pub fn expected_holding_gaussian(mean: f64, var: f64, cfg: &ProblemConfig) -> f64 {
    if var == 0.0 {
        return holding_cost(mean, cfg);
    }
    let sd = var.sqrt();
    let pos_mean = normal_positive_part_mean(mean, sd);
    (cfg.holding_slope_pos + cfg.backorder_slope) * pos_mean - cfg.backorder_slope * mean
}

/// Numerical fallback: integrates h(L(w - d)) against the demand density,
/// splitting segments at the kink of h (and at the clamp for lost sales).
fn expected_holding_by_quadrature(w: f64, cfg: &ProblemConfig) -> f64 {
    let rule = GaussLegendre::new(64);
    let integrand = |d: f64| holding_cost(dynamics_step(0.0, w, d, cfg.dynamics_kind), cfg);
    let (lo, hi) = match cfg.demand_kind {
        DemandKind::Gaussian => {
            let sd = cfg.sigma_d_sq.sqrt();
            if sd == 0.0 {
                return integrand(cfg.demand_mean);
            }
            (cfg.demand_mean - 12.0 * sd, cfg.demand_mean + 12.0 * sd)
        }
        // The exponential tail beyond 45 means is below 1e-19 of the mass.
        DemandKind::Exponential => (0.0, w.max(0.0) + 45.0 * cfg.demand_mean),
    };
    let density = |d: f64| match cfg.demand_kind {
        DemandKind::Gaussian => normal_pdf(d, cfg.demand_mean, cfg.sigma_d_sq.sqrt()),
        DemandKind::Exponential => {
            let lambda = 1.0 / cfg.demand_mean;
            if d < 0.0 {
                0.0
            } else {
                lambda * (-lambda * d).exp()
            }
        }
    };
    let mut cuts = vec![lo];
    if w > lo && w < hi {
        cuts.push(w); // h has its kink where w - d crosses zero
    }
    cuts.push(hi);
    let mut total = KahanSum::new();
    for pair in cuts.windows(2) {
        total.add(rule.integrate(pair[0], pair[1], |d| integrand(d) * density(d)));
    }
    total.value()
}

/// Draws one demand realization.
pub fn sample_demand(cfg: &ProblemConfig, rng: &mut impl Rng) -> f64 {
    match cfg.demand_kind {
        DemandKind::Gaussian => {
            let z: f64 = StandardNormal.sample(rng);
            cfg.demand_mean + cfg.sigma_d_sq.sqrt() * z
        }
        DemandKind::Exponential => Exp::new(1.0 / cfg.demand_mean).unwrap().sample(rng),
    }
}

/// Simulates one episode of `cfg.len_episode` steps under `policy`.
///
/// The policy sees `(t, observations y_0..y_t, actions a_0..a_{t-1})` and
/// returns an order quantity; returned actions are clamped to
/// `[0, max_action]`. Demand, noise, and initialization randomness come from
/// the caller's episode streams, so trajectories are policy-independent in
/// their random draws (common random numbers across policies).
pub fn sample_episode<F>(mut policy: F, cfg: &ProblemConfig, rng: &mut EpisodeRng) -> Trajectory
where
    F: FnMut(usize, &[f64], &[f64]) -> f64,
{
    let horizon = cfg.len_episode;
    let noise_sd = cfg.sigma_eta_sq.sqrt();
    let init_z: f64 = StandardNormal.sample(&mut rng.init);
    let x0 = cfg.initial_mean + cfg.initial_var.sqrt() * init_z;

    let mut x = Vec::with_capacity(horizon + 1);
    let mut a = Vec::with_capacity(horizon);
    let mut y = Vec::with_capacity(horizon + 1);
    let mut d = Vec::with_capacity(horizon);
    let mut cost = Vec::with_capacity(horizon);

    x.push(x0);
    let eta0: f64 = StandardNormal.sample(&mut rng.noise);
    y.push(observe(x0, noise_sd * eta0));

    for t in 0..horizon {
        let action = policy(t, &y, &a).clamp(0.0, cfg.max_action);
        let demand = sample_demand(cfg, &mut rng.demand);
        let next_x = dynamics_step(x[t], action, demand, cfg.dynamics_kind);
        let eta: f64 = StandardNormal.sample(&mut rng.noise);
        a.push(action);
        d.push(demand);
        x.push(next_x);
        y.push(observe(next_x, noise_sd * eta));
        cost.push(ordering_cost(action, cfg.fixed_cost, cfg.unit_cost) + holding_cost(next_x, cfg));
    }

    Trajectory { x, a, y, d, cost }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ProblemConfig;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn table_cfg() -> ProblemConfig {
        ProblemConfig::default()
    }

    #[test]
    fn dynamics_examples() {
        assert_eq!(dynamics_step(2.0, 1.0, 1.0, DynamicsKind::Backorders), 2.0);
        assert_eq!(dynamics_step(0.0, 0.0, 1.5, DynamicsKind::Backorders), -1.5);
        assert_eq!(dynamics_step(0.0, 0.0, 1.5, DynamicsKind::LostSales), 0.0);
    }

    #[test]
    fn observe_examples() {
        assert_eq!(observe(2.0, 0.0), 2.0);
        assert_eq!(observe(-1.0, 0.5), -0.5);
    }

    #[test]
    fn observation_noise_has_zero_mean() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mut acc = KahanSum::new();
        for _ in 0..n {
            let eta: f64 = StandardNormal.sample(&mut rng);
            acc.add(observe(0.0, eta));
        }
        assert!((acc.value() / n as f64).abs() < 3.0 / 1e3);
    }

    #[test]
    fn ordering_cost_examples() {
        assert_eq!(ordering_cost(0.0, 1.0, 0.1), 0.0);
        assert_abs_diff_eq!(ordering_cost(5.0, 1.0, 0.1), 1.5, epsilon = 1e-15);
        // Discontinuity at zero: an arbitrarily small positive order pays K.
        assert_abs_diff_eq!(ordering_cost(1e-12, 1.0, 0.1), 1.0, epsilon = 1e-9);
    }

    #[test]
    #[should_panic]
    fn ordering_cost_rejects_negative_orders() {
        ordering_cost(-0.5, 1.0, 0.1);
    }

    #[test]
    fn holding_cost_examples() {
        let cfg = table_cfg();
        assert_eq!(holding_cost(2.0, &cfg), 2.0);
        assert_eq!(holding_cost(-1.0, &cfg), 5.0);
        assert_eq!(holding_cost(0.0, &cfg), 0.0);
    }

    fn holding_monte_carlo(x: f64, a: f64, cfg: &ProblemConfig, n: usize, seed: u64) -> (f64, f64) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut acc = KahanSum::new();
        let mut sq = KahanSum::new();
        for _ in 0..n {
            let d = sample_demand(cfg, &mut rng);
            let h = holding_cost(dynamics_step(x, a, d, cfg.dynamics_kind), cfg);
            acc.add(h);
            sq.add(h * h);
        }
        let mean = acc.value() / n as f64;
        let var = (sq.value() / n as f64 - mean * mean).max(0.0);
        (mean, (var / n as f64).sqrt())
    }

    #[test]
    fn expected_stage_cost_closed_form_examples() {
        let cfg = table_cfg();
        // x = 1, a = 0: post-order mean is 0, so the cost is 6*phi(0).
        let c = expected_stage_cost(1.0, 0.0, &cfg);
        assert_abs_diff_eq!(c, 2.3936, epsilon = 5e-4);
        let (mc, se) = holding_monte_carlo(1.0, 0.0, &cfg, 1_000_000, 5);
        assert!((c - mc).abs() < 3.0 * se, "closed form {c} vs MC {mc} +- {se}");

        let c2 = expected_stage_cost(2.0, 1.0, &cfg);
        assert_abs_diff_eq!(c2, 3.151, epsilon = 5e-4);
        let (mc2, se2) = holding_monte_carlo(2.0, 1.0, &cfg, 1_000_000, 6);
        assert!((c2 - 1.1 - mc2).abs() < 3.0 * se2);
    }

    #[test]
    fn expected_stage_cost_grows_with_unit_slope_far_right() {
        let cfg = table_cfg();
        let slope = expected_stage_cost(1000.0, 0.0, &cfg) - expected_stage_cost(999.0, 0.0, &cfg);
        assert_abs_diff_eq!(slope, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn closed_form_matches_monte_carlo_on_lattice() {
        let cfg = table_cfg();
        let mut seed = 100;
        for &x in &[-3.0, -1.0, 0.0, 1.0, 2.5] {
            for &a in &[0.0, 0.5, 2.0, 6.0] {
                let c = expected_stage_cost(x, a, &cfg);
                let (mc, se) = holding_monte_carlo(x, a, &cfg, 1_000_000, seed);
                let order = ordering_cost(a, cfg.fixed_cost, cfg.unit_cost);
                assert!(
                    (c - order - mc).abs() < 3.0 * se,
                    "x={x} a={a}: {c} vs {mc} +- {se}"
                );
                seed += 1;
            }
        }
    }

    #[test]
    fn quadrature_matches_monte_carlo_for_exponential_demand() {
        let mut cfg = table_cfg();
        cfg.demand_kind = DemandKind::Exponential;
        for (i, &(x, a)) in [(0.0, 0.0), (2.0, 1.0), (-1.5, 0.0), (4.0, 3.0)].iter().enumerate() {
            let c = expected_stage_cost(x, a, &cfg);
            let order = ordering_cost(a, cfg.fixed_cost, cfg.unit_cost);
            let (mc, se) = holding_monte_carlo(x, a, &cfg, 1_000_000, 900 + i as u64);
            assert!((c - order - mc).abs() < 3.0 * se, "x={x} a={a}");
        }
    }

    #[test]
    fn quadrature_matches_monte_carlo_for_lost_sales() {
        let mut cfg = table_cfg();
        cfg.dynamics_kind = DynamicsKind::LostSales;
        for &(x, a) in &[(0.0, 0.0), (2.0, 1.0), (-1.0, 0.5)] {
            let c = expected_stage_cost(x, a, &cfg);
            let order = ordering_cost(a, cfg.fixed_cost, cfg.unit_cost);
            let (mc, se) = holding_monte_carlo(x, a, &cfg, 1_000_000, 950 + a as u64);
            assert!((c - order - mc).abs() < 3.0 * se.max(1e-8), "x={x} a={a}");
        }
    }

    #[test]
    fn deterministic_episode_matches_hand_simulation() {
        let mut cfg = table_cfg();
        cfg.initial_var = 0.0;
        cfg.sigma_d_sq = 0.0;
        cfg.sigma_eta_sq = 0.0;
        cfg.len_episode = 3;
        let mut rng = EpisodeRng::new(0, 0);
        let traj = sample_episode(|_, _, _| 0.0, &cfg, &mut rng);
        assert_eq!(traj.x, vec![2.0, 1.0, 0.0, -1.0]);
        assert_eq!(traj.y, traj.x);
    }

    #[test]
    fn same_seed_replays_bit_identically() {
        let cfg = table_cfg();
        let run = |seed| {
            let mut rng = EpisodeRng::new(seed, 17);
            sample_episode(|t, _, _| (t as f64) * 0.7, &cfg, &mut rng)
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }

    #[test]
    fn mean_first_transition_matches_model() {
        let cfg = table_cfg();
        let episodes = 100_000;
        let mut acc = KahanSum::new();
        for ep in 0..episodes {
            let mut rng = EpisodeRng::new(3, ep);
            let traj = sample_episode(|_, _, _| 0.0, &cfg, &mut rng);
            acc.add(traj.x[1]);
        }
        let mean = acc.value() / episodes as f64;
        let expect = cfg.initial_mean - cfg.demand_mean;
        // Var(x1) = initial_var + sigma_d_sq = 5.
        let tol = 3.0 * (5.0f64 / episodes as f64).sqrt();
        assert!((mean - expect).abs() < tol, "{mean} vs {expect}");
    }

    proptest! {
        #[test]
        fn ordering_cost_is_monotone(a in 0.0f64..50.0, b in 0.0f64..50.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(ordering_cost(lo, 1.0, 0.1) <= ordering_cost(hi, 1.0, 0.1) + 1e-12);
        }

        #[test]
        fn holding_cost_is_convex(x in -50.0f64..50.0, y in -50.0f64..50.0, lambda in 0.0f64..1.0) {
            let cfg = ProblemConfig::default();
            let mix = lambda * x + (1.0 - lambda) * y;
            let lhs = holding_cost(mix, &cfg);
            let rhs = lambda * holding_cost(x, &cfg) + (1.0 - lambda) * holding_cost(y, &cfg);
            prop_assert!(lhs <= rhs + 1e-12);
        }
    }
}
