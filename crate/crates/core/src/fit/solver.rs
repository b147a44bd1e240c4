//! Small dense solvers: bounded Levenberg-Marquardt, linear least squares,
//! golden-section search and bisection.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Relative parameter change below which the iteration stops.
    pub xtol: f64,
    /// Relative gradient norm below which a point counts as stationary.
    pub gtol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            xtol: 1e-8,
            gtol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmReport {
    pub params: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `||J^T r||_inf` at the returned point.
    pub gradient_norm: f64,
}

fn ssr(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, lo), hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(*lo, *hi);
    }
}

fn jacobian<F>(f: &F, x: &[f64], m: usize, lower: &[f64], upper: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = x.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut xp = x.to_vec();
    let mut rp = vec![0.0; m];
    let mut rm = vec![0.0; m];
    for j in 0..n {
        let h = 1e-6 * x[j].abs().max(1e-3);
        let up = (x[j] + h).min(upper[j]);
        let down = (x[j] - h).max(lower[j]);
        xp[j] = up;
        f(&xp, &mut rp);
        xp[j] = down;
        f(&xp, &mut rm);
        xp[j] = x[j];
        let width = up - down;
        if width > 0.0 {
            for i in 0..m {
                jac[(i, j)] = (rp[i] - rm[i]) / width;
            }
        }
    }
    jac
}

/// Minimize `sum r_i(x)^2` subject to `lower <= x <= upper`.
///
/// `f(x, r)` fills the `m` residuals. Jacobians are taken by central
/// differences (one-sided at the bounds). Steps are projected onto the box.
pub fn levenberg_marquardt<F>(
    f: F,
    m: usize,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &LmOptions,
) -> LmReport
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    project(&mut x, lower, upper);
    let mut r = vec![0.0; m];
    f(&x, &mut r);
    let mut cost = ssr(&r);
    let mut mu = 1e-3;
    let mut nu = 2.0;
    let mut converged = false;
    let mut iterations = 0;
    let mut jac = jacobian(&f, &x, m, lower, upper);
    let mut trial = vec![0.0; m];

    let stationary = |jac: &DMatrix<f64>, r: &[f64]| {
        let rv = DVector::from_column_slice(r);
        let g = jac.transpose() * &rv;
        let gnorm = g.amax();
        (gnorm, gnorm <= opts.gtol * jac.norm() * rv.norm())
    };

    while iterations < opts.max_iterations {
        iterations += 1;
        if cost == 0.0 {
            converged = true;
            break;
        }
        let rv = DVector::from_column_slice(&r);
        let jt = jac.transpose();
        let a = &jt * &jac;
        let g = &jt * &rv;
        let mut damped = a.clone();
        for k in 0..n {
            damped[(k, k)] += mu * a[(k, k)].max(1e-12);
        }
        let step = match damped.cholesky() {
            Some(ch) => ch.solve(&(-&g)),
            None => {
                mu *= nu;
                nu *= 2.0;
                continue;
            }
        };
        let mut xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        project(&mut xn, lower, upper);
        let delta: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let dnorm = delta.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let small_step = dnorm <= opts.xtol * (xnorm + opts.xtol);

        f(&xn, &mut trial);
        let new_cost = ssr(&trial);
        let dv = DVector::from_vec(delta);
        let predicted = -(2.0 * dv.dot(&g) + dv.dot(&(&a * &dv)));
        if new_cost.is_finite() && new_cost < cost {
            let rho = if predicted > 0.0 { (cost - new_cost) / predicted } else { 1.0 };
            mu *= (1.0f64 / 3.0).max(1.0 - (2.0 * rho - 1.0).powi(3));
            nu = 2.0;
            x = xn;
            std::mem::swap(&mut r, &mut trial);
            cost = new_cost;
            jac = jacobian(&f, &x, m, lower, upper);
            if small_step || stationary(&jac, &r).1 {
                converged = true;
                break;
            }
        } else {
            if small_step {
                // no representable improvement left in this direction
                converged = stationary(&jac, &r).1;
                break;
            }
            mu *= nu;
            nu *= 2.0;
            if mu > 1e30 {
                break;
            }
        }
    }
    let (gradient_norm, _) = stationary(&jac, &r);
    LmReport {
        params: x,
        residuals: r,
        ssr: cost,
        iterations,
        converged,
        gradient_norm,
    }
}

/// Ordinary least squares `X beta ~ y`; returns `(beta, ssr)`.
pub fn linear_lstsq(x: &DMatrix<f64>, y: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    let svd = x.clone().svd(true, true);
    let beta = svd.solve(y, 1e-14).ok()?;
    let resid = x * &beta - y;
    Some((beta, resid.norm_squared()))
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if (hi - lo).abs() <= tol * (1.0 + c.abs().max(d.abs())) {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Evaluate `f` on a sorted grid, then refine around the best point.
/// The returned value is never worse than the best grid value.
pub fn grid_then_golden<F: Fn(f64) -> f64>(f: F, grid: &[f64], tol: f64) -> (f64, f64) {
    assert!(!grid.is_empty());
    let vals: Vec<f64> = grid.iter().map(|&g| f(g)).collect();
    let best = (0..grid.len())
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .unwrap();
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    if hi <= lo {
        return (grid[best], vals[best]);
    }
    let (x, fx) = golden_section(&f, lo, hi, tol);
    if fx <= vals[best] {
        (x, fx)
    } else {
        (grid[best], vals[best])
    }
}

/// Root of `f` in `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `1 - ssr / sst`; 1 when the data are constant and fitted exactly.
pub fn r_squared(observed: &[f64], residual_ssr: f64) -> f64 {
    let n = observed.len() as f64;
    let mean = observed.iter().sum::<f64>() / n;
    let sst: f64 = observed.iter().map(|v| (v - mean).powi(2)).sum();
    if sst == 0.0 {
        return if residual_ssr == 0.0 { 1.0 } else { f64::NEG_INFINITY };
    }
    1.0 - residual_ssr / sst
}
