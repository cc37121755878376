//! Diffusion-based molecular communication with photolysis or enzymatic
//! degradation as inter-symbol-interference mitigation.
//!
//! - [`analytic`]: closed-form impulse responses and the optimal light time.
//! - [`sim`]: particle Monte Carlo of the bounded channel.
//! - [`detection`]: ITR, threshold detection and bit error probabilities.
//! - [`config`] / [`presets`]: experiment descriptions in SI units.

// `!(x > 0.0)` is used throughout to reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod detection;
pub mod error;
pub mod io;
pub mod presets;
pub mod sim;
pub mod summary;
mod tails;
pub mod units;

pub use config::{Scenario, ScenarioConfig};
pub use error::{Error, Result};
