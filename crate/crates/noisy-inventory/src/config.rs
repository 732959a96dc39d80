//! Problem and algorithm configuration.
//!
//! All model parameters and solver hyperparameters live in one flat
//! [`ProblemConfig`]. Values load from a plain `key = value` text file
//! (one pair per line, `#` starts a comment); any key not listed in
//! [`ProblemConfig::KEYS`] is rejected.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Demand distribution family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemandKind {
    Gaussian,
    Exponential,
}

/// Inventory carry-over rule for unmet demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsKind {
    Backorders,
    LostSales,
}

/// Scale used for the quantized per-stage transition kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantSigma {
    /// Standard deviation of the mean-belief innovation (default).
    DStar,
    /// Posterior standard deviation of the stage.
    Posterior,
}

/// Full parameter set: initial state distribution, demand and observation
/// noise, costs, horizon, grids, and training hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    // Model.
    pub initial_mean: f64,
    pub initial_var: f64,
    pub demand_kind: DemandKind,
    pub demand_mean: f64,
    pub sigma_d_sq: f64,
    pub sigma_eta_sq: f64,
    pub fixed_cost: f64,
    pub unit_cost: f64,
    pub holding_slope_pos: f64,
    pub backorder_slope: f64,
    pub discount: f64,
    pub len_episode: usize,
    pub dynamics_kind: DynamicsKind,
    pub max_action: f64,

    // Belief grid.
    pub m: f64,
    pub big_m: f64,
    pub delta: f64,
    pub min_zvalue: f64,

    // Quantized solver.
    pub action_step: f64,
    pub quant_sigma: QuantSigma,

    // Training.
    pub batch_size: usize,
    pub exploration_noise: f64,
    pub tau: f64,
    pub eps_start: f64,
    pub eps_end: f64,
    pub eps_decay: f64,
    pub cti: usize,
    pub ati: usize,
    pub lr_actor: f64,
    pub lr_target_actor: f64,
    pub lr_critic: f64,
    pub lr_target_critic: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub replay_capacity: usize,

    pub rng_seed: u64,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            initial_mean: 2.0,
            initial_var: 4.0,
            demand_kind: DemandKind::Gaussian,
            demand_mean: 1.0,
            sigma_d_sq: 1.0,
            sigma_eta_sq: 1.0,
            fixed_cost: 1.0,
            unit_cost: 0.1,
            holding_slope_pos: 1.0,
            backorder_slope: 5.0,
            discount: 0.99,
            len_episode: 4,
            dynamics_kind: DynamicsKind::Backorders,
            max_action: 12.0,
            m: -20.0,
            big_m: 30.0,
            delta: 0.5,
            min_zvalue: 0.0001,
            action_step: 0.1,
            quant_sigma: QuantSigma::DStar,
            batch_size: 512,
            exploration_noise: 8.0,
            tau: 0.005,
            eps_start: 0.9,
            eps_end: 0.05,
            eps_decay: 200.0,
            cti: 3,
            ati: 1,
            lr_actor: 1e-5,
            lr_target_actor: 1e-5,
            lr_critic: 1e-3,
            lr_target_critic: 1e-3,
            beta1: 0.999,
            beta2: 0.999,
            replay_capacity: 100_000,
            rng_seed: 0,
        }
    }
}

impl ProblemConfig {
    /// Every key accepted in config files, in file order.
    pub const KEYS: &'static [&'static str] = &[
        "initial_mean",
        "initial_var",
        "demand_kind",
        "demand_mean",
        "sigma_d_sq",
        "sigma_eta_sq",
        "fixed_cost",
        "unit_cost",
        "holding_slope_pos",
        "backorder_slope",
        "discount",
        "len_episode",
        "dynamics_kind",
        "max_action",
        "m",
        "big_m",
        "delta",
        "min_zvalue",
        "action_step",
        "quant_sigma",
        "batch_size",
        "exploration_noise",
        "tau",
        "eps_start",
        "eps_end",
        "eps_decay",
        "cti",
        "ati",
        "lr_actor",
        "lr_target_actor",
        "lr_critic",
        "lr_target_critic",
        "beta1",
        "beta2",
        "replay_capacity",
        "rng_seed",
    ];

    /// Parses a flat `key = value` file and overlays it on the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_overrides(&text)
    }

    /// Parses overrides from text; empty input yields the defaults.
    pub fn from_str_overrides(text: &str) -> Result<Self> {
        let mut cfg = ProblemConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                key: format!("line {}", lineno + 1),
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies a single `key = value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num(key: &str, value: &str) -> Result<f64> {
            value.parse::<f64>().map_err(|_| Error::Config {
                key: key.to_string(),
                message: format!("`{value}` is not a number"),
            })
        }
        fn int(key: &str, value: &str) -> Result<usize> {
            value.parse::<usize>().map_err(|_| Error::Config {
                key: key.to_string(),
                message: format!("`{value}` is not a nonnegative integer"),
            })
        }
        match key {
            "initial_mean" => self.initial_mean = num(key, value)?,
            "initial_var" => self.initial_var = num(key, value)?,
            "demand_kind" => {
                self.demand_kind = match value {
                    "gaussian" => DemandKind::Gaussian,
                    "exponential" => DemandKind::Exponential,
                    other => {
                        return Err(Error::Config {
                            key: key.to_string(),
                            message: format!("`{other}` is not one of gaussian|exponential"),
                        })
                    }
                }
            }
            "demand_mean" => self.demand_mean = num(key, value)?,
            "sigma_d_sq" => self.sigma_d_sq = num(key, value)?,
            "sigma_eta_sq" => self.sigma_eta_sq = num(key, value)?,
            "fixed_cost" => self.fixed_cost = num(key, value)?,
            "unit_cost" => self.unit_cost = num(key, value)?,
            "holding_slope_pos" => self.holding_slope_pos = num(key, value)?,
            "backorder_slope" => self.backorder_slope = num(key, value)?,
            "discount" => self.discount = num(key, value)?,
            "len_episode" => self.len_episode = int(key, value)?,
            "dynamics_kind" => {
                self.dynamics_kind = match value {
                    "backorders" => DynamicsKind::Backorders,
                    "lost_sales" => DynamicsKind::LostSales,
                    other => {
                        return Err(Error::Config {
                            key: key.to_string(),
                            message: format!("`{other}` is not one of backorders|lost_sales"),
                        })
                    }
                }
            }
            "max_action" => self.max_action = num(key, value)?,
            "m" => self.m = num(key, value)?,
            "big_m" => self.big_m = num(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "min_zvalue" => self.min_zvalue = num(key, value)?,
            "action_step" => self.action_step = num(key, value)?,
            "quant_sigma" => {
                self.quant_sigma = match value {
                    "dstar" => QuantSigma::DStar,
                    "posterior" => QuantSigma::Posterior,
                    other => {
                        return Err(Error::Config {
                            key: key.to_string(),
                            message: format!("`{other}` is not one of dstar|posterior"),
                        })
                    }
                }
            }
            "batch_size" => self.batch_size = int(key, value)?,
            "exploration_noise" => self.exploration_noise = num(key, value)?,
            "tau" => self.tau = num(key, value)?,
            "eps_start" => self.eps_start = num(key, value)?,
            "eps_end" => self.eps_end = num(key, value)?,
            "eps_decay" => self.eps_decay = num(key, value)?,
            "cti" => self.cti = int(key, value)?,
            "ati" => self.ati = int(key, value)?,
            "lr_actor" => self.lr_actor = num(key, value)?,
            "lr_target_actor" => self.lr_target_actor = num(key, value)?,
            "lr_critic" => self.lr_critic = num(key, value)?,
            "lr_target_critic" => self.lr_target_critic = num(key, value)?,
            "beta1" => self.beta1 = num(key, value)?,
            "beta2" => self.beta2 = num(key, value)?,
            "replay_capacity" => self.replay_capacity = int(key, value)?,
            "rng_seed" => {
                self.rng_seed = value.parse::<u64>().map_err(|_| Error::Config {
                    key: key.to_string(),
                    message: format!("`{value}` is not a nonnegative integer"),
                })?
            }
            unknown => {
                return Err(Error::Config {
                    key: unknown.to_string(),
                    message: "unknown key".to_string(),
                })
            }
        }
        Ok(())
    }

    /// Checks every invariant; errors name the offending key.
    pub fn validate(&self) -> Result<()> {
        fn fail(key: &str, message: impl Into<String>) -> Result<()> {
            Err(Error::Config {
                key: key.to_string(),
                message: message.into(),
            })
        }
        if !self.initial_mean.is_finite() {
            return fail("initial_mean", "must be finite");
        }
        if !(self.initial_var >= 0.0) {
            return fail("initial_var", "must be >= 0");
        }
        if !(self.demand_mean.is_finite()) {
            return fail("demand_mean", "must be finite");
        }
        if self.demand_kind == DemandKind::Exponential && !(self.demand_mean > 0.0) {
            return fail("demand_mean", "exponential demand needs a positive mean");
        }
        if !(self.sigma_d_sq >= 0.0) {
            return fail("sigma_d_sq", "must be >= 0");
        }
        if !(self.sigma_eta_sq >= 0.0) {
            return fail("sigma_eta_sq", "must be >= 0");
        }
        if !(self.fixed_cost >= 0.0) {
            return fail("fixed_cost", "must be >= 0");
        }
        if !(self.unit_cost >= 0.0) {
            return fail("unit_cost", "must be >= 0");
        }
        if !(self.holding_slope_pos >= 0.0) {
            return fail("holding_slope_pos", "must be >= 0");
        }
        if !(self.backorder_slope >= 0.0) {
            return fail("backorder_slope", "must be >= 0");
        }
        if !(self.discount >= 0.0 && self.discount <= 1.0) {
            return fail("discount", "must lie in [0, 1]");
        }
        if self.len_episode == 0 {
            return fail("len_episode", "must be >= 1");
        }
        if !(self.max_action >= 0.0) {
            return fail("max_action", "must be >= 0");
        }
        if !(self.m < self.big_m) {
            return fail("m", "lower grid bound must satisfy m < big_m");
        }
        if !(self.delta > 0.0) {
            return fail("delta", "must be > 0");
        }
        if !(self.min_zvalue >= 0.0) {
            return fail("min_zvalue", "must be >= 0");
        }
        if !(self.action_step > 0.0) {
            return fail("action_step", "must be > 0");
        }
        if self.batch_size == 0 {
            return fail("batch_size", "must be >= 1");
        }
        if !(self.exploration_noise >= 0.0) {
            return fail("exploration_noise", "must be >= 0");
        }
        if !(self.tau >= 0.0 && self.tau <= 1.0) {
            return fail("tau", "must lie in [0, 1]");
        }
        if !(self.eps_end >= 0.0 && self.eps_end <= self.eps_start && self.eps_start <= 1.0) {
            return fail("eps_start", "need 0 <= eps_end <= eps_start <= 1");
        }
        if !(self.eps_decay > 0.0) {
            return fail("eps_decay", "must be > 0");
        }
        for (key, lr) in [
            ("lr_actor", self.lr_actor),
            ("lr_target_actor", self.lr_target_actor),
            ("lr_critic", self.lr_critic),
            ("lr_target_critic", self.lr_target_critic),
        ] {
            if !(lr > 0.0 && lr.is_finite()) {
                return fail(key, "must be a positive number");
            }
        }
        for (key, beta) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(beta >= 0.0 && beta < 1.0) {
                return fail(key, "must lie in [0, 1)");
            }
        }
        if self.replay_capacity == 0 {
            return fail("replay_capacity", "must be >= 1");
        }
        Ok(())
    }

    /// Demand variance actually in effect (exponential demand has variance
    /// equal to its squared mean regardless of `sigma_d_sq`).
    pub fn demand_var(&self) -> f64 {
        match self.demand_kind {
            DemandKind::Gaussian => self.sigma_d_sq,
            DemandKind::Exponential => self.demand_mean * self.demand_mean,
        }
    }

    /// Serializes the resolved configuration as a `key = value` snapshot;
    /// parsing the snapshot reproduces the config exactly.
    pub fn to_snapshot(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }

    /// (key, rendered value) pairs for all keys, in `KEYS` order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let s = |x: f64| format!("{x}");
        vec![
            ("initial_mean", s(self.initial_mean)),
            ("initial_var", s(self.initial_var)),
            (
                "demand_kind",
                match self.demand_kind {
                    DemandKind::Gaussian => "gaussian".into(),
                    DemandKind::Exponential => "exponential".into(),
                },
            ),
            ("demand_mean", s(self.demand_mean)),
            ("sigma_d_sq", s(self.sigma_d_sq)),
            ("sigma_eta_sq", s(self.sigma_eta_sq)),
            ("fixed_cost", s(self.fixed_cost)),
            ("unit_cost", s(self.unit_cost)),
            ("holding_slope_pos", s(self.holding_slope_pos)),
            ("backorder_slope", s(self.backorder_slope)),
            ("discount", s(self.discount)),
            ("len_episode", self.len_episode.to_string()),
            (
                "dynamics_kind",
                match self.dynamics_kind {
                    DynamicsKind::Backorders => "backorders".into(),
                    DynamicsKind::LostSales => "lost_sales".into(),
                },
            ),
            ("max_action", s(self.max_action)),
            ("m", s(self.m)),
            ("big_m", s(self.big_m)),
            ("delta", s(self.delta)),
            ("min_zvalue", s(self.min_zvalue)),
            ("action_step", s(self.action_step)),
            (
                "quant_sigma",
                match self.quant_sigma {
                    QuantSigma::DStar => "dstar".into(),
                    QuantSigma::Posterior => "posterior".into(),
                },
            ),
            ("batch_size", self.batch_size.to_string()),
            ("exploration_noise", s(self.exploration_noise)),
            ("tau", s(self.tau)),
            ("eps_start", s(self.eps_start)),
            ("eps_end", s(self.eps_end)),
            ("eps_decay", s(self.eps_decay)),
            ("cti", self.cti.to_string()),
            ("ati", self.ati.to_string()),
            ("lr_actor", s(self.lr_actor)),
            ("lr_target_actor", s(self.lr_target_actor)),
            ("lr_critic", s(self.lr_critic)),
            ("lr_target_critic", s(self.lr_target_critic)),
            ("beta1", s(self.beta1)),
            ("beta2", s(self.beta2)),
            ("replay_capacity", self.replay_capacity.to_string()),
            ("rng_seed", self.rng_seed.to_string()),
        ]
    }

    /// Reconstructs a config from snapshot entries (e.g. a stored manifest).
    pub fn from_entries(entries: &BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = ProblemConfig::default();
        for (k, v) in entries {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
