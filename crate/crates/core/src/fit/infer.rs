use serde::{Deserialize, Serialize};

use super::solver::bisect;
use super::{fit_curve, FitError, FitResult};
use crate::model::{law_coeffs_of_usg, CurveCoefficients, UsgPolynomials, EPSILON_MAX, FITTED_RANGE_MAX};
use crate::spread::BurnSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UsgStatus {
    /// A root of the `eps` law was bracketed inside the searched range.
    Root,
    /// No root in range; the closer end of the range is returned.
    Boundary,
    /// The fitted `eps` sits at its upper bound, where the law carries no
    /// information about the USG size.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceDiagnostics {
    pub curve_fit: FitResult<CurveCoefficients>,
    pub usg_status: UsgStatus,
    /// `eps_law(p_usg) - eps_fit` at the returned `p_usg`.
    pub usg_residual: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferredNetwork {
    /// Given, not inferred.
    pub p_ii: f64,
    pub p_ip: f64,
    pub p_usg: f64,
    pub curve: CurveCoefficients,
    pub diagnostics: InferenceDiagnostics,
}

const USG_TOLERANCE: f64 = 1e-6;

/// Recover `P_USG` and then `P_IP` from an observed burn series.
pub fn infer_network_params(
    series: &BurnSeries,
    p_ii: f64,
    poly: &UsgPolynomials,
) -> Result<InferredNetwork, FitError> {
    let curve_fit = fit_curve(series, p_ii)?;
    let curve = curve_fit.coefficients;
    let (a, eps) = (curve.a, curve.epsilon);
    let residual = |p: f64| law_coeffs_of_usg(p, poly).epsilon_raw(a, p_ii) - eps;
    let mut notes = Vec::new();

    let (p_usg, usg_status) = if eps >= EPSILON_MAX * (1.0 - 1e-7) {
        notes.push(format!("fitted eps = {eps} is at its bound; P_USG not identifiable, 0 assumed"));
        (0.0, UsgStatus::Indeterminate)
    } else {
        match bisect(residual, 0.0, FITTED_RANGE_MAX, USG_TOLERANCE) {
            Some(p) => (p, UsgStatus::Root),
            None => {
                let (r0, r1) = (residual(0.0), residual(FITTED_RANGE_MAX));
                let p = if r0.abs() <= r1.abs() { 0.0 } else { FITTED_RANGE_MAX };
                notes.push(format!("no root of the eps law in [0, {FITTED_RANGE_MAX}]; boundary {p} returned"));
                (p, UsgStatus::Boundary)
            }
        }
    };

    let laws = law_coeffs_of_usg(p_usg, poly).to_fraction();
    let inv_a = 1.0 / a;
    let p_ip = (inv_a / (laws.cc * (1.0 + laws.gg * p_ii))).powf(1.0 / laws.ee);
    if !(p_ip > 0.0 && p_ip <= 1.0) {
        notes.push(format!("inferred P_IP = {p_ip} outside (0, 1]"));
    } else if p_ip > FITTED_RANGE_MAX {
        notes.push(format!("inferred P_IP = {p_ip} outside the fitted range"));
    }
    Ok(InferredNetwork {
        p_ii,
        p_ip,
        p_usg,
        curve,
        diagnostics: InferenceDiagnostics {
            curve_fit,
            usg_status,
            usg_residual: residual(p_usg),
            notes,
        },
    })
}
