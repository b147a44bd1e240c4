use serde::{Deserialize, Serialize};

use super::solver::{levenberg_marquardt, r_squared, LmOptions};
use super::{FitError, FitResult};
use crate::netgen::{empirical_cdf, SurveyDistributions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfModel {
    /// Fit `lambda` to the CDF truncated to the allowed sizes and renormalized.
    /// The shift cancels under truncation, so it is carried over unchanged.
    #[default]
    Truncated,
    /// Fit `(lambda, a)` of the untruncated `1 - exp(-lambda (N - a))`.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSizeFit {
    pub lambda: f64,
    pub a_shift: f64,
    pub model: CdfModel,
}

/// Refit the exponential group-size law to observed group sizes.
pub fn fit_group_size_cdf(
    sizes: &[usize],
    dist: &SurveyDistributions,
    model: CdfModel,
) -> Result<FitResult<GroupSizeFit>, FitError> {
    if sizes.len() < 30 {
        return Err(FitError::InsufficientData(format!("{} groups, need 30", sizes.len())));
    }
    let (lo, hi) = (dist.min_group_size, dist.max_group_size);
    if let Some(s) = sizes.iter().find(|&&s| s < lo || s > hi) {
        return Err(FitError::OutOfRange(format!("group size {s} outside [{lo}, {hi}]")));
    }
    if sizes.iter().all(|&s| s == sizes[0]) {
        return Err(FitError::Degenerate("all groups have the same size".into()));
    }
    // the last point is 1 by construction
    let points: Vec<(f64, f64)> = empirical_cdf(sizes, lo, hi)
        .into_iter()
        .filter(|&(n, _)| n < hi)
        .map(|(n, e)| (n as f64, e))
        .collect();
    let observed: Vec<f64> = points.iter().map(|p| p.1).collect();
    let opts = LmOptions::default();
    let rep = match model {
        CdfModel::Truncated => {
            let low = lo as f64 - 1.0;
            let high = hi as f64;
            levenberg_marquardt(
                |x, r| {
                    let e = |n: f64| -(-x[0] * (n - low)).exp_m1();
                    let norm = e(high);
                    for (ri, &(n, obs)) in r.iter_mut().zip(&points) {
                        *ri = e(n) / norm - obs;
                    }
                },
                points.len(),
                &[dist.lambda],
                &[1e-6],
                &[10.0],
                &opts,
            )
        }
        CdfModel::Raw => levenberg_marquardt(
            |x, r| {
                for (ri, &(n, obs)) in r.iter_mut().zip(&points) {
                    *ri = -(-x[0] * (n - x[1])).exp_m1() - obs;
                }
            },
            points.len(),
            &[dist.lambda, dist.a_shift],
            &[1e-6, -1e3],
            &[10.0, lo as f64],
            &opts,
        ),
    };
    let a_shift = match model {
        CdfModel::Truncated => dist.a_shift,
        CdfModel::Raw => rep.params[1],
    };
    Ok(FitResult {
        coefficients: GroupSizeFit {
            lambda: rep.params[0],
            a_shift,
            model,
        },
        residual_norm: rep.ssr,
        r_squared: r_squared(&observed, rep.ssr),
        residuals: rep.residuals,
        iterations_used: rep.iterations,
        converged: rep.converged,
        gradient_norm: rep.gradient_norm,
        tolerances: opts,
    })
}
