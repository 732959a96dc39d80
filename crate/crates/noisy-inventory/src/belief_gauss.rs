//! Closed-form Gaussian belief recursion.
//!
//! With a normal prior, normal demand, and normal observation noise the
//! posterior over the inventory level stays normal, so the whole belief is a
//! `(mean, variance)` pair. The variance sequence is deterministic: it depends
//! only on the model parameters, never on actions or observations. The mean
//! follows a one-dimensional recursion driven by an equivalent demand whose
//! variance is derived here as well, which turns the belief process into a
//! fully observed inventory problem with time-dependent demand and holding
//! costs.

use crate::config::ProblemConfig;
use crate::env::{expected_holding_gaussian, ordering_cost};
use crate::error::{Error, Result};
use std::io::Write;

/// Normal posterior over the true inventory level at stage `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussBelief {
    pub mean: f64,
    pub var: f64,
    pub t: usize,
}

/// Distribution of the equivalent demand driving the mean-belief recursion
/// at one stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DStarParams {
    pub mean: f64,
    pub var: f64,
    pub t: usize,
}

/// Posterior after conditioning the prior N(prior_mean, prior_var) on the
/// first observation `y0` taken with noise variance `noise_var`.
///
/// The fully degenerate case `prior_var = noise_var = 0` is rejected.
pub fn posterior_init(prior_mean: f64, prior_var: f64, noise_var: f64, y0: f64) -> Result<GaussBelief> {
    let denom = prior_var + noise_var;
    if denom == 0.0 {
        return Err(Error::Belief(
            "posterior_init needs prior or observation noise variance > 0".into(),
        ));
    }
    Ok(GaussBelief {
        mean: (noise_var / denom) * prior_mean + (prior_var / denom) * y0,
        var: prior_var * noise_var / denom,
        t: 0,
    })
}

/// Initial belief for a configuration, handling the fully deterministic case
/// (no prior and no observation uncertainty) as a point mass at `y0`.
pub fn initial_belief(cfg: &ProblemConfig, y0: f64) -> GaussBelief {
    match posterior_init(cfg.initial_mean, cfg.initial_var, cfg.sigma_eta_sq, y0) {
        Ok(b) => b,
        Err(_) => GaussBelief { mean: y0, var: 0.0, t: 0 },
    }
}

/// One step of the posterior variance recursion.
pub fn variance_step(sigma_sq: f64, sigma_d_sq: f64, sigma_eta_sq: f64) -> f64 {
    let v = sigma_sq + sigma_d_sq;
    let denom = v + sigma_eta_sq;
    if denom == 0.0 {
        return 0.0;
    }
    v * sigma_eta_sq / denom
}

/// Fixed point of [`variance_step`].
pub fn sigma_limit(sigma_d_sq: f64, sigma_eta_sq: f64) -> f64 {
    if sigma_d_sq == 0.0 || sigma_eta_sq == 0.0 {
        return 0.0;
    }
    0.5 * sigma_d_sq * ((1.0 + 4.0 * sigma_eta_sq / sigma_d_sq).sqrt() - 1.0)
}

/// Conditions the pre-observation prediction on the next observation.
pub fn mean_update(belief: &GaussBelief, action: f64, y_next: f64, cfg: &ProblemConfig) -> GaussBelief {
    let predicted = belief.mean + action - cfg.demand_mean;
    let v = belief.var + cfg.sigma_d_sq;
    let denom = v + cfg.sigma_eta_sq;
    let mean = if denom == 0.0 {
        predicted
    } else {
        (cfg.sigma_eta_sq / denom) * predicted + (v / denom) * y_next
    };
    GaussBelief {
        mean,
        var: variance_step(belief.var, cfg.sigma_d_sq, cfg.sigma_eta_sq),
        t: belief.t + 1,
    }
}

/// Posterior variance at stage `t`, iterating from the initial posterior.
pub fn stage_variance(t: usize, cfg: &ProblemConfig) -> f64 {
    let denom = cfg.initial_var + cfg.sigma_eta_sq;
    let mut v = if denom == 0.0 {
        0.0
    } else {
        cfg.initial_var * cfg.sigma_eta_sq / denom
    };
    for _ in 0..t {
        v = variance_step(v, cfg.sigma_d_sq, cfg.sigma_eta_sq);
    }
    v
}

/// Equivalent-demand distribution at stage `t`.
pub fn dstar_params(t: usize, cfg: &ProblemConfig) -> DStarParams {
    let sigma_sq = stage_variance(t, cfg);
    let v = sigma_sq + cfg.sigma_d_sq;
    let denom = v + cfg.sigma_eta_sq;
    let var = if denom == 0.0 { 0.0 } else { v * v / denom };
    DStarParams { mean: cfg.demand_mean, var, t }
}

/// Precomputed per-stage variances for a horizon.
#[derive(Debug, Clone)]
pub struct StageVariances {
    /// Posterior variance at stages 0..=horizon.
    pub sigma_sq: Vec<f64>,
    /// Equivalent-demand variance at stages 0..horizon.
    pub dstar_var: Vec<f64>,
}

impl StageVariances {
    pub fn new(cfg: &ProblemConfig) -> Self {
        let horizon = cfg.len_episode;
        let mut sigma_sq = Vec::with_capacity(horizon + 1);
        sigma_sq.push(stage_variance(0, cfg));
        for t in 0..horizon {
            sigma_sq.push(variance_step(sigma_sq[t], cfg.sigma_d_sq, cfg.sigma_eta_sq));
        }
        let dstar_var = (0..horizon)
            .map(|t| {
                let v = sigma_sq[t] + cfg.sigma_d_sq;
                let denom = v + cfg.sigma_eta_sq;
                if denom == 0.0 {
                    0.0
                } else {
                    v * v / denom
                }
            })
            .collect();
        StageVariances { sigma_sq, dstar_var }
    }

    /// Writes the table as CSV with columns `t,sigma_t_sq,dstar_var`.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "t,sigma_t_sq,dstar_var")?;
        for (t, &s) in self.sigma_sq.iter().enumerate() {
            if t < self.dstar_var.len() {
                writeln!(out, "{t},{s},{}", self.dstar_var[t])?;
            } else {
                writeln!(out, "{t},{s},")?;
            }
        }
        Ok(())
    }
}

/// Holding cost of the reduced problem: the piecewise-linear holding cost
/// smoothed by the residual posterior uncertainty of the next stage.
pub fn effective_holding(t: usize, x: f64, cfg: &ProblemConfig) -> f64 {
    let next_var = variance_step(stage_variance(t, cfg), cfg.sigma_d_sq, cfg.sigma_eta_sq);
    expected_holding_gaussian(x, next_var, cfg)
}

/// Expected one-stage cost under a Gaussian belief: ordering cost plus the
/// holding cost of the post-order, post-demand level.
pub fn belief_stage_cost(belief: &GaussBelief, action: f64, cfg: &ProblemConfig) -> f64 {
    let mean = belief.mean + action - cfg.demand_mean;
    let var = belief.var + cfg.sigma_d_sq;
    ordering_cost(action, cfg.fixed_cost, cfg.unit_cost) + expected_holding_gaussian(mean, var, cfg)
}

/// Looks for a secant of the stage-`t` effective holding cost with slope
/// below `-unit_cost` on `[-50, 0]`; such a pair certifies that threshold
/// (order-up-to) policies are optimal for the stage.
pub fn veinott_check(t: usize, unit_cost: f64, cfg: &ProblemConfig) -> (bool, Option<(f64, f64)>) {
    let step = 0.5f64;
    let mut x = -50.0f64;
    while x < 0.0 {
        let y = (x + step).min(0.0);
        let slope = (effective_holding(t, y, cfg) - effective_holding(t, x, cfg)) / (y - x);
        if slope < -unit_cost {
            return (true, Some((x, y)));
        }
        x = y;
    }
    (false, None)
}
