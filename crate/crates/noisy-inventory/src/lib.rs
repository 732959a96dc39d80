//! Partially observed single-product inventory control.
//!
//! The inventory level is hidden behind additive observation noise; orders
//! carry a fixed plus linear cost and leftover stock or backorders are charged
//! through a piecewise-linear convex holding cost. This crate provides:
//!
//! - a seeded episode simulator ([`env`]),
//! - the closed-form Gaussian belief recursion and its reduction to a
//!   time-dependent fully observed problem ([`belief_gauss`]),
//! - a seedable named-stream RNG layer ([`rng`]).

pub mod belief_gauss;
pub mod config;
pub mod env;
pub mod error;
pub mod numeric;
pub mod rng;

pub use config::{DemandKind, DynamicsKind, ProblemConfig, QuantSigma};
pub use error::{Error, Result};
