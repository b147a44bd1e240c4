use super::solver::{levenberg_marquardt, r_squared, LmOptions, LmReport};
use super::{distinct, FitError, FitResult};
use crate::model::{c_from_initial, eval_f, CurveCoefficients, EPSILON_MAX};
use crate::spread::BurnSeries;

/// Early observations for forecasting must stay below this burned fraction.
pub const FOUR_POINT_MAX_FRACTION: f64 = 0.2;

const A_BOUNDS: (f64, f64) = (1e-3, 1e6);
const EPS_BOUNDS: (f64, f64) = (1e-6, EPSILON_MAX);

fn curve(a: f64, epsilon: f64, p_ii: f64) -> CurveCoefficients {
    let c = c_from_initial(a, 0.0, epsilon, p_ii).expect("epsilon < 1 and p_ii in (0, 1)");
    CurveCoefficients {
        a,
        b: 0.0,
        epsilon,
        c,
        p_ii: Some(p_ii),
    }
}

/// Least squares over `(a, eps)` with `b = 0` and `C` pinned by `F(0) = p_ii`,
/// started from each of `starts`; the best end point wins.
fn fit_constrained(
    points: &[(f64, f64)],
    p_ii: f64,
    starts: &[(f64, f64)],
) -> FitResult<CurveCoefficients> {
    let opts = LmOptions::default();
    let residuals = |x: &[f64], r: &mut [f64]| {
        let co = curve(x[0], x[1], p_ii);
        for (ri, &(t, f)) in r.iter_mut().zip(points) {
            *ri = eval_f(t, &co) - f;
        }
    };
    let lower = [A_BOUNDS.0, EPS_BOUNDS.0];
    let upper = [A_BOUNDS.1, EPS_BOUNDS.1];
    let mut best: Option<LmReport> = None;
    let mut total_iterations = 0;
    for &(a0, e0) in starts {
        let rep = levenberg_marquardt(residuals, points.len(), &[a0, e0], &lower, &upper, &opts);
        total_iterations += rep.iterations;
        if best.as_ref().is_none_or(|b| rep.ssr < b.ssr) {
            best = Some(rep);
        }
    }
    let rep = best.expect("at least one start");
    let observed: Vec<f64> = points.iter().map(|p| p.1).collect();
    FitResult {
        coefficients: curve(rep.params[0], rep.params[1], p_ii),
        residual_norm: rep.ssr,
        r_squared: r_squared(&observed, rep.ssr),
        residuals: rep.residuals,
        iterations_used: total_iterations,
        converged: rep.converged,
        gradient_norm: rep.gradient_norm,
        tolerances: opts,
    }
}

/// Fit the growth law to a whole burn series, `f(n)` observed at `t = n`.
///
/// `p_ii` must match `f(0)` within `1e-3`. The iteration starts at `a` equal
/// to the first `n` with `f(n) > (1 + p_ii) / 2` and `eps = 0.9`.
pub fn fit_curve(series: &BurnSeries, p_ii: f64) -> Result<FitResult<CurveCoefficients>, FitError> {
    let f = &series.f;
    if f.len() < 4 {
        return Err(FitError::InsufficientData(format!("{} points, need 4", f.len())));
    }
    if !(p_ii > 0.0 && p_ii < 1.0) {
        return Err(FitError::OutOfRange(format!("p_ii = {p_ii}")));
    }
    if (f[0] - p_ii).abs() > 1e-3 {
        return Err(FitError::InitialMismatch { f0: f[0], p_ii });
    }
    let (lo, hi) = f
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-12 {
        return Err(FitError::NoGrowth);
    }
    let half = (1.0 + p_ii) / 2.0;
    let a0 = f
        .iter()
        .position(|&v| v > half)
        .unwrap_or(f.len() - 1)
        .max(1) as f64;
    let points: Vec<(f64, f64)> = f.iter().enumerate().map(|(n, &v)| (n as f64, v)).collect();
    let starts = [(a0, 0.9), (a0 / 2.0, 0.5), (a0 / 2.0, 0.99)];
    Ok(fit_constrained(&points, p_ii, &starts))
}

/// Fit the growth law to at least four early observations `(t, F)`, all
/// below [`FOUR_POINT_MAX_FRACTION`], so the curve can be extrapolated.
pub fn fit_four_points(points: &[(f64, f64)], p_ii: f64) -> Result<FitResult<CurveCoefficients>, FitError> {
    if points.len() < 4 {
        return Err(FitError::InsufficientData(format!("{} points, need 4", points.len())));
    }
    if !(p_ii > 0.0 && p_ii < FOUR_POINT_MAX_FRACTION) {
        return Err(FitError::OutOfRange(format!("p_ii = {p_ii}")));
    }
    if let Some(&(t, v)) = points
        .iter()
        .find(|&&(t, v)| !(v > 0.0 && v < FOUR_POINT_MAX_FRACTION) || !t.is_finite())
    {
        return Err(FitError::OutOfRange(format!("F({t}) = {v} must lie in (0, 0.2)")));
    }
    if distinct(points.iter().map(|p| p.0)) != points.len() {
        return Err(FitError::Degenerate("observation times must be distinct".into()));
    }
    // logit slope gives the initial time scale: logit F ~ const + 2 t / a
    let n = points.len() as f64;
    let logit: Vec<f64> = points.iter().map(|&(_, v)| (v / (1.0 - v)).ln()).collect();
    let tm = points.iter().map(|p| p.0).sum::<f64>() / n;
    let lm = logit.iter().sum::<f64>() / n;
    let sxy: f64 = points.iter().zip(&logit).map(|(p, l)| (p.0 - tm) * (l - lm)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - tm).powi(2)).sum();
    let slope = sxy / sxx;
    if !(slope > 0.0) {
        return Err(FitError::Degenerate("observations do not grow".into()));
    }
    let a0 = 2.0 / slope;
    let starts = [(a0, 0.9), (a0, 0.5), (a0, 0.99), (a0 / 2.0, 0.2)];
    Ok(fit_constrained(points, p_ii, &starts))
}
