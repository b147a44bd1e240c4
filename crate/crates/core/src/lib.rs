//! Rumor propagation on messaging-app social networks.
//!
//! The crate is split along the lines of the workflow:
//!
//! - [`netgen`] builds random populations with person-to-person links and
//!   group memberships drawn from survey-calibrated distributions.
//! - [`spread`] runs the iterative Monte Carlo spreading protocol, including
//!   the uncritical senders group (USG), and averages ensembles of runs.
//! - [`model`] holds the closed-form growth law `F(t)`, its coefficient laws
//!   and the USG polynomials.
//! - [`fit`] estimates those coefficients from burn series and inverts the
//!   model to recover network parameters from observed spreading.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod fit;
pub mod model;
pub mod netgen;
pub mod rng;
pub mod spread;
pub mod tables;

pub use fit::{FitError, FitResult, InferredNetwork};
pub use model::{CurveCoefficients, GrowthPrediction, LawCoefficients, ModelError, Units, UsgPolynomials, Warning};
pub use netgen::{Network, NetgenError, PopulationConfig, SurveyDistributions};
pub use spread::{BurnSeries, EnsembleResult, EnsembleSpec, SpreadParams, SpreadState};
