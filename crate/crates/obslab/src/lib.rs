//! Simulation laboratory for output-feedback tracking control of uncertain
//! integrator-chain systems.
//!
//! Two output-feedback uncertainty approximators — the integral-chain
//! differentiator and the extended observer — are implemented next to the
//! classical full-state adaptive fuzzy and RBF baselines, all closed around
//! the inverted-pendulum benchmark by a fixed-step simulation engine. The
//! `cli` module exposes scenario configs, presets, parameter sweeps,
//! frequency-response tables, and CSV/plot exports.

pub mod approximators;
pub mod cli;
pub mod control;
pub mod error;
pub mod estimators;
pub mod numkit;
pub mod plant;
pub mod simkit;

pub use error::{Error, Result};
