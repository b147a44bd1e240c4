//! Fits of the coefficient laws across parameter sweeps.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::solver::{grid_then_golden, levenberg_marquardt, linear_lstsq, r_squared, LmOptions};
use super::{distinct, FitError, FitResult};
use crate::model::{rational_quartic, LawCoefficients, UsgPolynomials};

/// One fitted curve: `1/a`, `eps` and the seed fraction it was run with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSample {
    pub inv_a: f64,
    pub epsilon: f64,
    pub p_ii: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonLawFit {
    pub aa: f64,
    pub bb: f64,
}

fn epsilon_model(aa: f64, bb: f64, s: &EpsilonSample) -> f64 {
    1.0 + aa * s.p_ii / (1.0 + (bb * s.inv_a).exp())
}

/// Fit `eps = 1 + aa P_II / (1 + e^{bb / a})` (fraction units).
pub fn fit_epsilon_law(samples: &[EpsilonSample]) -> Result<FitResult<EpsilonLawFit>, FitError> {
    if samples.len() < 4 {
        return Err(FitError::InsufficientData(format!("{} samples, need 4", samples.len())));
    }
    if distinct(samples.iter().map(|s| s.inv_a)) < 2 {
        return Err(FitError::Degenerate("all samples share one 1/a".into()));
    }
    if distinct(samples.iter().map(|s| s.p_ii)) < 2 {
        return Err(FitError::Degenerate("underdetermined: a single P_II value".into()));
    }
    let y: Vec<f64> = samples.iter().map(|s| s.epsilon - 1.0).collect();
    // for fixed bb the model is linear in aa
    let profile = |bb: f64| -> (f64, f64) {
        let z: Vec<f64> = samples.iter().map(|s| s.p_ii / (1.0 + (bb * s.inv_a).exp())).collect();
        let zz: f64 = z.iter().map(|v| v * v).sum();
        if zz == 0.0 || !zz.is_finite() {
            return (0.0, f64::INFINITY);
        }
        let aa = z.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / zz;
        let ssr = z.iter().zip(&y).map(|(zi, yi)| (aa * zi - yi).powi(2)).sum();
        (aa, ssr)
    };
    let max_inv_a = samples.iter().map(|s| s.inv_a.abs()).fold(0.0, f64::max);
    let bb_span = 50.0 / max_inv_a.max(1e-6);
    let grid: Vec<f64> = (0..=400).map(|k| -bb_span + 2.0 * bb_span * k as f64 / 400.0).collect();
    let (bb0, _) = grid_then_golden(|bb| profile(bb).1, &grid, 1e-12);
    let aa0 = profile(bb0).0;

    let opts = LmOptions::default();
    let rep = levenberg_marquardt(
        |x, r| {
            for (ri, s) in r.iter_mut().zip(samples) {
                *ri = epsilon_model(x[0], x[1], s) - s.epsilon;
            }
        },
        samples.len(),
        &[aa0, bb0],
        &[f64::NEG_INFINITY, -bb_span],
        &[f64::INFINITY, bb_span],
        &opts,
    );
    let (aa, bb) = (rep.params[0], rep.params[1]);
    if aa >= 0.0 {
        return Err(FitError::SignViolation(aa));
    }
    let observed: Vec<f64> = samples.iter().map(|s| s.epsilon).collect();
    Ok(FitResult {
        coefficients: EpsilonLawFit { aa, bb },
        residual_norm: rep.ssr,
        r_squared: r_squared(&observed, rep.ssr),
        residuals: rep.residuals,
        iterations_used: rep.iterations,
        converged: rep.converged,
        gradient_norm: rep.gradient_norm,
        tolerances: opts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSample {
    pub p_ip: f64,
    pub p_ii: f64,
    pub inv_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub cc: f64,
    pub ee: f64,
    pub gg: f64,
    /// Collapse quality of the plain power law `cc P_IP^ee`.
    pub collapse_r2_uncorrected: f64,
    /// Collapse quality of `h = (1/a) / (1 + gg P_II)` against `cc P_IP^ee`.
    pub collapse_r2: f64,
}

/// Fit `1/a = cc P_IP^ee (1 + gg P_II)` (fraction units).
///
/// Stage one is a log-log regression ignoring `P_II`. Stage two searches `gg`
/// with `(cc, ee)` re-solved by regression for each candidate. Both stages
/// minimize squared log residuals and report `r^2` against the same total sum
/// of squares of `ln(1/a)`, so the corrected collapse is never worse.
pub fn fit_power_law(samples: &[PowerSample]) -> Result<FitResult<PowerLawFit>, FitError> {
    if samples.len() < 6 {
        return Err(FitError::InsufficientData(format!("{} samples, need 6", samples.len())));
    }
    if distinct(samples.iter().map(|s| s.p_ii)) < 2 {
        return Err(FitError::Degenerate("need at least two P_II values".into()));
    }
    if distinct(samples.iter().map(|s| s.p_ip)) < 2 {
        return Err(FitError::Degenerate("need at least two P_IP values".into()));
    }
    if samples.iter().any(|s| !(s.p_ip > 0.0 && s.inv_a > 0.0 && s.p_ii >= 0.0)) {
        return Err(FitError::OutOfRange("P_IP and 1/a must be positive".into()));
    }
    let m = samples.len();
    let design = DMatrix::from_fn(m, 2, |i, j| if j == 0 { 1.0 } else { samples[i].p_ip.ln() });
    let log_inv_a: Vec<f64> = samples.iter().map(|s| s.inv_a.ln()).collect();
    let regress = |gg: f64| -> Option<(f64, f64, f64)> {
        let y = DVector::from_iterator(
            m,
            samples.iter().zip(&log_inv_a).map(|(s, l)| l - (1.0 + gg * s.p_ii).ln()),
        );
        let (beta, ssr) = linear_lstsq(&design, &y)?;
        Some((beta[0].exp(), beta[1], ssr))
    };
    let (cc0, ee0, ssr0) = regress(0.0).ok_or_else(|| FitError::Degenerate("singular regression".into()))?;
    let r2_0 = r_squared(&log_inv_a, ssr0);

    let max_p = samples.iter().map(|s| s.p_ii).fold(0.0, f64::max).max(1e-12);
    let gg_max = 1e4 / max_p;
    let mut grid = vec![0.0];
    grid.extend((0..=160).map(|k| 1e-6 * 10f64.powf(k as f64 / 160.0 * (gg_max / 1e-6).log10())));
    let (gg, ssr) = grid_then_golden(|g| regress(g).map_or(f64::INFINITY, |r| r.2), &grid, 1e-12);
    let (gg, (cc, ee, ssr)) = if ssr <= ssr0 {
        (gg, regress(gg).expect("regression succeeded on grid"))
    } else {
        (0.0, (cc0, ee0, ssr0))
    };
    let r2 = r_squared(&log_inv_a, ssr);
    let residuals = samples
        .iter()
        .map(|s| (cc * s.p_ip.powf(ee) * (1.0 + gg * s.p_ii)).ln() - s.inv_a.ln())
        .collect();
    Ok(FitResult {
        coefficients: PowerLawFit {
            cc,
            ee,
            gg,
            collapse_r2_uncorrected: r2_0,
            collapse_r2: r2,
        },
        residual_norm: ssr,
        r_squared: r2,
        residuals,
        iterations_used: grid.len(),
        converged: true,
        gradient_norm: 0.0,
        tolerances: LmOptions::default(),
    })
}

fn fit_quadratic(p: &[f64], y: &[f64]) -> Option<([f64; 3], f64)> {
    let x = DMatrix::from_fn(p.len(), 3, |i, j| p[i].powi(j as i32));
    let (beta, ssr) = linear_lstsq(&x, &DVector::from_column_slice(y))?;
    Some(([beta[0], beta[1], beta[2]], ssr))
}

/// `x1 + x2 P^4 / (1 + x3 P^3)` with `x3 >= 0`: profiled over `x3`, then polished.
fn fit_rational_quartic(p: &[f64], y: &[f64]) -> Option<([f64; 3], f64)> {
    let yv = DVector::from_column_slice(y);
    let linear = |x3: f64| {
        let x = DMatrix::from_fn(p.len(), 2, |i, j| {
            if j == 0 {
                1.0
            } else {
                p[i].powi(4) / (1.0 + x3 * p[i].powi(3))
            }
        });
        linear_lstsq(&x, &yv)
    };
    let mut grid = vec![0.0];
    grid.extend((0..=240).map(|k| 10f64.powf(-2.0 + 10.0 * k as f64 / 240.0)));
    let (x3, _) = grid_then_golden(|x3| linear(x3).map_or(f64::INFINITY, |r| r.1), &grid, 1e-13);
    let (beta, _) = linear(x3)?;
    let start = [beta[0], beta[1], x3];
    let scale = [1.0, beta[1].abs().max(1.0), x3.max(1.0)];
    let rep = levenberg_marquardt(
        |x, r| {
            let c = [x[0] * scale[0], x[1] * scale[1], x[2] * scale[2]];
            for ((ri, &pi), &yi) in r.iter_mut().zip(p).zip(y) {
                *ri = rational_quartic(&c, pi) - yi;
            }
        },
        p.len(),
        &[start[0] / scale[0], start[1] / scale[1], start[2] / scale[2]],
        &[f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0],
        &[f64::INFINITY, f64::INFINITY, f64::INFINITY],
        &LmOptions::default(),
    );
    let profiled = linear(x3)?.1;
    if rep.ssr < profiled {
        let x = &rep.params;
        Some(([x[0] * scale[0], x[1] * scale[1], x[2] * scale[2]], rep.ssr))
    } else {
        Some((start, profiled))
    }
}

/// Fit the USG polynomials to per-USG law coefficients (any units; rows are
/// converted to fractions first).
pub fn fit_usg_polynomials(rows: &[(f64, LawCoefficients)]) -> Result<FitResult<UsgPolynomials>, FitError> {
    if rows.len() < 4 || distinct(rows.iter().map(|r| r.0)) < 4 {
        return Err(FitError::InsufficientData(format!(
            "{} rows, need 4 distinct P_USG values",
            rows.len()
        )));
    }
    let p: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let frac: Vec<LawCoefficients> = rows.iter().map(|r| r.1.to_fraction()).collect();
    let column = |f: fn(&LawCoefficients) -> f64| frac.iter().map(f).collect::<Vec<f64>>();
    let (aa_y, bb_y, cc_y, ee_y, gg_y) = (
        column(|l| l.aa),
        column(|l| l.bb),
        column(|l| l.cc),
        column(|l| l.ee),
        column(|l| l.gg),
    );
    let singular = || FitError::Degenerate("singular polynomial fit".into());
    let (aa, s_aa) = fit_quadratic(&p, &aa_y).ok_or_else(singular)?;
    let (cc, s_cc) = fit_quadratic(&p, &cc_y).ok_or_else(singular)?;
    let (ee, s_ee) = fit_quadratic(&p, &ee_y).ok_or_else(singular)?;
    let (bb, s_bb) = fit_rational_quartic(&p, &bb_y).ok_or_else(singular)?;
    let (gg, s_gg) = fit_rational_quartic(&p, &gg_y).ok_or_else(singular)?;
    let r2 = [
        r_squared(&aa_y, s_aa),
        r_squared(&bb_y, s_bb),
        r_squared(&cc_y, s_cc),
        r_squared(&ee_y, s_ee),
        r_squared(&gg_y, s_gg),
    ];
    let poly = UsgPolynomials { aa, bb, cc, ee, gg };
    let residuals = rows
        .iter()
        .zip(&frac)
        .flat_map(|(r, l)| {
            let fitted = crate::model::law_coeffs_of_usg(r.0, &poly);
            [fitted.aa - l.aa, fitted.bb - l.bb, fitted.cc - l.cc, fitted.ee - l.ee, fitted.gg - l.gg]
        })
        .collect();
    Ok(FitResult {
        coefficients: poly,
        residual_norm: s_aa + s_bb + s_cc + s_ee + s_gg,
        r_squared: r2.iter().copied().fold(f64::INFINITY, f64::min),
        residuals,
        iterations_used: 0,
        converged: true,
        gradient_norm: 0.0,
        tolerances: LmOptions::default(),
    })
}
