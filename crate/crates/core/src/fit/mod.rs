//! Estimation of growth-law coefficients and inversion of the model.
//!
//! All solvers are deterministic: identical inputs give identical outputs.

mod cdf;
mod curve;
mod infer;
mod laws;
pub mod solver;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelError;

pub use cdf::{fit_group_size_cdf, CdfModel, GroupSizeFit};
pub use curve::{fit_curve, fit_four_points, FOUR_POINT_MAX_FRACTION};
pub use infer::{infer_network_params, InferenceDiagnostics, InferredNetwork, UsgStatus};
pub use laws::{
    fit_epsilon_law, fit_power_law, fit_usg_polynomials, EpsilonLawFit, EpsilonSample, PowerLawFit, PowerSample,
};
pub use solver::LmOptions;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("no growth: the series is flat")]
    NoGrowth,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("input out of range: {0}")]
    OutOfRange(String),
    #[error("series starts at {f0} but P_II = {p_ii}")]
    InitialMismatch { f0: f64, p_ii: f64 },
    #[error("fitted aa = {0} is not negative")]
    SignViolation(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Outcome of a fit, with everything needed to judge it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult<T> {
    pub coefficients: T,
    /// Sum of squared residuals.
    pub residual_norm: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    pub tolerances: LmOptions,
}

pub(crate) fn distinct(values: impl Iterator<Item = f64>) -> usize {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0));
    v.len()
}
