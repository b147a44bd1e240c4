//! Closed-form growth law for the burned fraction.
//!
//! ```text
//! F(t) = (C e^{(1+eps)(t-b)/a} - 1) / (2 eps / (1 - eps) + C e^{(1+eps)(t-b)/a})
//! ```
//!
//! interpolates between exponential saturation (`eps -> 0`) and a logistic
//! curve (`eps -> 1`). It solves the mass-action law
//! `dF/dt = (2 eps / a) (G + F)(1 - F)` with the constant "invisible
//! population" `G = (1 - eps) / (2 eps)`.
//!
//! The coefficient chain maps `(P_II, P_IP, P_USG)` to a curve:
//! `eps = 1 + aa P_II / (1 + e^{bb/a})`, `1/a = cc P_IP^ee (1 + gg P_II)`,
//! with `aa .. gg` depending on `P_USG` through low-order polynomials.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spread::SpreadParams;

/// Largest interpolation parameter produced by the law chain.
pub const EPSILON_MAX: f64 = 1.0 - 1e-9;
/// Above this the logistic form is used when an initial condition is known.
pub const LOGISTIC_SWITCH: f64 = 1.0 - 1e-9;
/// Upper end of the probability range the laws were fitted on.
pub const FITTED_RANGE_MAX: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid curve coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("epsilon = 1 has no finite C; use the logistic form")]
    EpsilonOne,
    #[error("epsilon law gave {0}, outside the fitted regime")]
    EpsilonNonPositive(f64),
    #[error("probability {name} = {value} not allowed here")]
    Probability { name: &'static str, value: f64 },
    #[error("P_IP = 0 gives an infinite characteristic time")]
    InfiniteTimescale,
    #[error("fraction {x} is not reachable (F(0) = {f0})")]
    Unreachable { x: f64, f0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    EpsilonClamped { raw: f64, value: f64 },
    OutsideFittedRange { name: String, value: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::EpsilonClamped { raw, value } => write!(f, "epsilon {raw} clamped to {value}"),
            Warning::OutsideFittedRange { name, value } => {
                write!(f, "{name} = {value} is outside the fitted range [0, {FITTED_RANGE_MAX}]")
            }
        }
    }
}

/// Scale in which `P_II` and `P_IP` enter the coefficient laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Percent,
    Fraction,
}

impl Units {
    /// Factor turning a fraction into this unit.
    pub fn scale(self) -> f64 {
        match self {
            Units::Percent => 100.0,
            Units::Fraction => 1.0,
        }
    }
}

/// `(a, b, eps, C)` of the growth law.
///
/// `p_ii` is the initial condition when the curve was built from one; it
/// enables the exact logistic branch at `eps = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveCoefficients {
    pub a: f64,
    pub b: f64,
    pub epsilon: f64,
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_ii: Option<f64>,
}

impl CurveCoefficients {
    pub fn new(a: f64, b: f64, epsilon: f64, c: f64) -> Result<Self, ModelError> {
        let coeffs = Self { a, b, epsilon, c, p_ii: None };
        coeffs.validate()?;
        Ok(coeffs)
    }

    /// Coefficients whose `C` satisfies `F(0) = p_ii`.
    pub fn from_initial(a: f64, b: f64, epsilon: f64, p_ii: f64) -> Result<Self, ModelError> {
        if !(p_ii > 0.0 && p_ii < 1.0) {
            return Err(ModelError::Probability { name: "p_ii", value: p_ii });
        }
        let c = if epsilon >= 1.0 {
            f64::INFINITY
        } else {
            c_from_initial(a, b, epsilon, p_ii)?
        };
        let coeffs = Self { a, b, epsilon, c, p_ii: Some(p_ii) };
        coeffs.validate()?;
        Ok(coeffs)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::InvalidCoefficients(m.to_string()));
        if !(self.a > 0.0 && self.a.is_finite()) {
            return bad("a must be positive and finite");
        }
        if !self.b.is_finite() {
            return bad("b must be finite");
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return bad("epsilon must lie in (0, 1]");
        }
        if !(self.c > 0.0) || self.c.is_nan() {
            return bad("C must be positive");
        }
        if self.epsilon >= 1.0 && self.p_ii.is_none() {
            return bad("epsilon = 1 needs an initial condition");
        }
        if self.c.is_infinite() && self.p_ii.is_none() {
            return bad("C must be finite");
        }
        Ok(())
    }

    /// Invisible population `G = (1 - eps) / (2 eps)`.
    pub fn invisible_population(&self) -> f64 {
        invisible_population(self.epsilon)
    }

    fn logistic_b(&self) -> Option<f64> {
        match self.p_ii {
            Some(p) if self.epsilon >= LOGISTIC_SWITCH => Some((1.0 - p) / p * (-2.0 * self.b / self.a).exp()),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        eval_f(t, self)
    }
}

pub fn invisible_population(epsilon: f64) -> f64 {
    (1.0 - epsilon) / (2.0 * epsilon)
}

/// Evaluate the growth law.
pub fn eval_f(t: f64, coeffs: &CurveCoefficients) -> f64 {
    let CurveCoefficients { a, b, epsilon, c, .. } = *coeffs;
    if let Some(bl) = coeffs.logistic_b() {
        let x = 2.0 * (t - b) / a;
        return if x >= 0.0 {
            1.0 / (1.0 + bl * (-x).exp())
        } else {
            let e = x.exp();
            e / (e + bl)
        };
    }
    let g = invisible_population(epsilon);
    let x = (1.0 + epsilon) * (t - b) / a;
    if x > 0.0 {
        // divide through by e^x so large t cannot overflow
        let inv = (-x).exp();
        g * (c - inv) / (inv + g * c)
    } else {
        let ce = c * x.exp();
        g * (ce - 1.0) / (1.0 + g * ce)
    }
}

/// `C` such that `F(0) = p_ii`.
pub fn c_from_initial(a: f64, b: f64, epsilon: f64, p_ii: f64) -> Result<f64, ModelError> {
    if epsilon >= 1.0 {
        return Err(ModelError::EpsilonOne);
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(ModelError::InvalidCoefficients("epsilon must lie in [0, 1)".into()));
    }
    if !(p_ii > 0.0 && p_ii < 1.0) {
        return Err(ModelError::Probability { name: "p_ii", value: p_ii });
    }
    let k = 2.0 * epsilon / (1.0 - epsilon);
    Ok((1.0 + k * p_ii) / ((1.0 - p_ii) * ((1.0 + epsilon) * b / a).exp()))
}

/// Mass-action right-hand side `(2 eps / a)(G + F)(1 - F)`.
pub fn df_dt(f: f64, a: f64, epsilon: f64) -> f64 {
    2.0 * epsilon / a * (invisible_population(epsilon) + f) * (1.0 - f)
}

/// Time at which the curve reaches `x`.
pub fn time_to_fraction(x: f64, coeffs: &CurveCoefficients) -> Result<f64, ModelError> {
    let f0 = eval_f(0.0, coeffs);
    if !(x < 1.0) || x < f0 - 1e-12 {
        return Err(ModelError::Unreachable { x, f0 });
    }
    let CurveCoefficients { a, b, epsilon, c, .. } = *coeffs;
    if let Some(bl) = coeffs.logistic_b() {
        return Ok(b + a / 2.0 * (bl * x / (1.0 - x)).ln());
    }
    let k = 2.0 * epsilon / (1.0 - epsilon);
    Ok(b + a / (1.0 + epsilon) * ((1.0 + k * x) / ((1.0 - x) * c)).ln())
}

/// Coefficients of the `eps` and `1/a` laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawCoefficients {
    pub aa: f64,
    pub bb: f64,
    pub cc: f64,
    pub ee: f64,
    pub gg: f64,
    pub units: Units,
}

impl LawCoefficients {
    /// Unclamped `1 + aa P_II / (1 + e^{bb/a})`, `p_ii` given as a fraction.
    pub fn epsilon_raw(&self, a: f64, p_ii: f64) -> f64 {
        let p = p_ii * self.units.scale();
        1.0 + self.aa * p / (1.0 + (self.bb / a).exp())
    }

    /// `cc P_IP^ee (1 + gg P_II)`, probabilities given as fractions.
    pub fn inv_a(&self, p_ip: f64, p_ii: f64) -> f64 {
        let s = self.units.scale();
        self.cc * (p_ip * s).powf(self.ee) * (1.0 + self.gg * p_ii * s)
    }

    /// Re-express in fraction units: `aa` and `gg` scale by 100, `cc` by `100^ee`.
    pub fn to_fraction(&self) -> Self {
        match self.units {
            Units::Fraction => *self,
            Units::Percent => Self {
                aa: self.aa * 100.0,
                bb: self.bb,
                cc: self.cc * 100f64.powf(self.ee),
                ee: self.ee,
                gg: self.gg * 100.0,
                units: Units::Fraction,
            },
        }
    }

    pub fn to_percent(&self) -> Self {
        match self.units {
            Units::Percent => *self,
            Units::Fraction => Self {
                aa: self.aa / 100.0,
                bb: self.bb,
                cc: self.cc / 100f64.powf(self.ee),
                ee: self.ee,
                gg: self.gg / 100.0,
                units: Units::Percent,
            },
        }
    }
}

/// Value produced by a law, with the unclamped value kept alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clamped {
    pub value: f64,
    pub raw: f64,
}

impl Clamped {
    pub fn was_clamped(&self) -> bool {
        self.value != self.raw
    }
}

/// Interpolation parameter from the characteristic time and the seed
/// fraction. Values above 1 are clamped to 1; nonpositive values are errors.
pub fn epsilon_law(a: f64, p_ii: f64, laws: &LawCoefficients) -> Result<Clamped, ModelError> {
    let raw = laws.epsilon_raw(a, p_ii);
    if raw.is_nan() || raw <= 0.0 {
        return Err(ModelError::EpsilonNonPositive(raw));
    }
    Ok(Clamped { value: raw.min(1.0), raw })
}

/// `1/a` from the propagation and initial probabilities (fractions).
/// `p_ip = 0` yields 0, i.e. an infinite characteristic time.
pub fn inv_a_law(p_ip: f64, p_ii: f64, laws: &LawCoefficients) -> Result<f64, ModelError> {
    if !(p_ip >= 0.0) {
        return Err(ModelError::Probability { name: "p_ip", value: p_ip });
    }
    if !(p_ii >= 0.0) {
        return Err(ModelError::Probability { name: "p_ii", value: p_ii });
    }
    Ok(laws.inv_a(p_ip, p_ii))
}

/// Polynomials giving the law coefficients as functions of `P_USG` (fraction):
/// quadratics for `aa`, `cc`, `ee`; `x1 + x2 P^4 / (1 + x3 P^3)` for `bb`, `gg`.
/// Each array holds `(x1, x2, x3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UsgPolynomials {
    pub aa: [f64; 3],
    pub bb: [f64; 3],
    pub cc: [f64; 3],
    pub ee: [f64; 3],
    pub gg: [f64; 3],
}

impl Default for UsgPolynomials {
    fn default() -> Self {
        crate::tables::usg_polynomials()
    }
}

pub fn quadratic(c: &[f64; 3], p: f64) -> f64 {
    c[0] + c[1] * p + c[2] * p * p
}

pub fn rational_quartic(c: &[f64; 3], p: f64) -> f64 {
    c[0] + c[1] * p.powi(4) / (1.0 + c[2] * p.powi(3))
}

/// Law coefficients (fraction units) at a given `P_USG`.
pub fn law_coeffs_of_usg(p_usg: f64, poly: &UsgPolynomials) -> LawCoefficients {
    LawCoefficients {
        aa: quadratic(&poly.aa, p_usg),
        bb: rational_quartic(&poly.bb, p_usg),
        cc: quadratic(&poly.cc, p_usg),
        ee: quadratic(&poly.ee, p_usg),
        gg: rational_quartic(&poly.gg, p_usg),
        units: Units::Fraction,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPrediction {
    pub params: SpreadParams,
    pub laws: LawCoefficients,
    pub coeffs: CurveCoefficients,
    pub invisible_population: f64,
    pub warnings: Vec<Warning>,
}

impl GrowthPrediction {
    pub fn time_to_fraction(&self, x: f64) -> Result<f64, ModelError> {
        time_to_fraction(x, &self.coeffs)
    }
}

/// Curve predicted for `params`, going through the USG polynomials.
pub fn predict_curve(params: &SpreadParams, poly: &UsgPolynomials) -> Result<GrowthPrediction, ModelError> {
    let laws = law_coeffs_of_usg(params.p_usg, poly);
    let mut warnings = Vec::new();
    if !(0.0..=FITTED_RANGE_MAX).contains(&params.p_usg) {
        warnings.push(Warning::OutsideFittedRange { name: "p_usg".into(), value: params.p_usg });
    }
    let mut pred = predict_curve_with_laws(params, &laws)?;
    warnings.append(&mut pred.warnings);
    pred.warnings = warnings;
    Ok(pred)
}

/// Curve predicted for `params` from a fixed set of law coefficients.
pub fn predict_curve_with_laws(
    params: &SpreadParams,
    laws: &LawCoefficients,
) -> Result<GrowthPrediction, ModelError> {
    let mut warnings = Vec::new();
    for (name, value) in [("p_ii", params.p_ii), ("p_ip", params.p_ip)] {
        if value > FITTED_RANGE_MAX {
            warnings.push(Warning::OutsideFittedRange { name: name.into(), value });
        }
    }
    if !(params.p_ii > 0.0 && params.p_ii < 1.0) {
        return Err(ModelError::Probability { name: "p_ii", value: params.p_ii });
    }
    let inv_a = inv_a_law(params.p_ip, params.p_ii, laws)?;
    if inv_a <= 0.0 {
        return Err(ModelError::InfiniteTimescale);
    }
    let a = 1.0 / inv_a;
    let eps = epsilon_law(a, params.p_ii, laws)?;
    let epsilon = eps.raw.min(EPSILON_MAX);
    if epsilon != eps.raw {
        warnings.push(Warning::EpsilonClamped { raw: eps.raw, value: epsilon });
    }
    let coeffs = CurveCoefficients::from_initial(a, 0.0, epsilon, params.p_ii)?;
    Ok(GrowthPrediction {
        params: *params,
        laws: *laws,
        invisible_population: coeffs.invisible_population(),
        coeffs,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables;
    use approx::assert_relative_eq;

    fn worked() -> GrowthPrediction {
        let p = SpreadParams::new(0.02, 0.01, 0.0).unwrap();
        predict_curve(&p, &UsgPolynomials::default()).unwrap()
    }

    #[test]
    fn exponential_limit() {
        let (a, b, p) = (20.0, 0.0, 0.05);
        let eps = 1e-9;
        let co = CurveCoefficients::from_initial(a, b, eps, p).unwrap();
        let c = 1.0 / (1.0 - p);
        for t in [0.0, 5.0, 20.0, 60.0] {
            let expo = 1.0 - (-(t - b) / a).exp() / c;
            assert!((co.eval(t) - expo).abs() < 1e-7, "t={t}");
        }
        assert_relative_eq!(c_from_initial(a, b, 0.0, p).unwrap(), c, max_relative = 1e-15);
    }

    #[test]
    fn worked_chain_values() {
        let w = worked();
        // 1/a = 2.405 * 0.01^0.9375 * (1 + 0.3541 * 0.02)
        let inv_a = 2.405 * 0.01f64.powf(0.9375) * (1.0 + 0.3541 * 0.02);
        assert_relative_eq!(w.coeffs.a, 1.0 / inv_a, max_relative = 1e-12);
        assert!((w.coeffs.a - 30.96).abs() < 0.01);
        assert!((w.coeffs.epsilon - 0.98059).abs() < 1e-4);
        assert!((w.coeffs.c - 3.082).abs() < 1e-3);
        assert!((w.coeffs.eval(0.0) - 0.02).abs() < 1e-12);
        let t50 = w.time_to_fraction(0.5).unwrap();
        assert!((t50 - 54.86).abs() < 0.01, "{t50}");
        assert!(w.warnings.is_empty());
    }

    #[test]
    fn percent_and_fraction_conventions_agree() {
        let pct = tables::table1_row(0).unwrap().laws;
        let frac = law_coeffs_of_usg(0.0, &UsgPolynomials::default());
        let a_pct = 1.0 / inv_a_law(0.01, 0.02, &pct).unwrap();
        let a_frac = 1.0 / inv_a_law(0.01, 0.02, &frac).unwrap();
        assert!((a_pct - a_frac).abs() / a_frac < 0.005);
        let round = pct.to_fraction().to_percent();
        assert_relative_eq!(round.cc, pct.cc, max_relative = 1e-12);
        assert_relative_eq!(round.gg, pct.gg, max_relative = 1e-12);
    }

    #[test]
    fn epsilon_law_limits_and_monotonicity() {
        let laws = law_coeffs_of_usg(0.0, &UsgPolynomials::default());
        assert!((epsilon_law(30.96, 1e-12, &laws).unwrap().value - 1.0).abs() < 1e-10);
        assert!((epsilon_law(30.96, 0.02, &laws).unwrap().value - 0.9806).abs() < 1e-4);
        let mut prev = 1.0;
        for k in 1..=10 {
            let e = epsilon_law(30.96, k as f64 * 0.01, &laws).unwrap().value;
            assert!(e < prev);
            prev = e;
        }
        let positive = LawCoefficients { aa: 2.0, ..laws };
        let c = epsilon_law(30.0, 0.05, &positive).unwrap();
        assert!(c.was_clamped() && c.value == 1.0);
        let huge = LawCoefficients { aa: -1e3, ..laws };
        assert!(matches!(epsilon_law(30.0, 0.05, &huge), Err(ModelError::EpsilonNonPositive(_))));
    }

    #[test]
    fn inv_a_power_law() {
        let laws = law_coeffs_of_usg(0.0, &UsgPolynomials::default());
        let inv = inv_a_law(0.01, 0.02, &laws).unwrap();
        assert!((inv - 0.0323).abs() < 1e-4);
        assert_eq!(inv_a_law(0.0, 0.02, &laws).unwrap(), 0.0);
        assert!(inv_a_law(1e-9, 0.02, &laws).unwrap() < 1e-6);
        let p = SpreadParams::new(0.02, 0.0, 0.0).unwrap();
        assert_eq!(predict_curve(&p, &UsgPolynomials::default()), Err(ModelError::InfiniteTimescale));
    }

    #[test]
    fn table2_constant_terms() {
        let l = law_coeffs_of_usg(0.0, &UsgPolynomials::default());
        assert_eq!((l.aa, l.bb, l.cc, l.ee, l.gg), (-2.2, 7.319, 2.405, 0.9375, 0.3541));
        let l3 = law_coeffs_of_usg(0.03, &UsgPolynomials::default());
        assert!((l3.bb - 7.69).abs() / 7.69 < 0.002);
        let l10 = law_coeffs_of_usg(0.10, &UsgPolynomials::default());
        assert!((l10.gg - 0.54).abs() / 0.54 < 0.01);
        assert!((l10.gg - 0.544).abs() < 1e-3);
    }

    #[test]
    fn small_seed_makes_invisible_population_vanish() {
        let poly = UsgPolynomials::default();
        let mut prev = f64::INFINITY;
        for p_ii in [1e-2, 1e-3, 1e-4, 1e-6] {
            let w = predict_curve(&SpreadParams::new(p_ii, 0.05, 0.0).unwrap(), &poly).unwrap();
            assert!(w.invisible_population < prev);
            prev = w.invisible_population;
            // G ~ -aa P_II / (2 (1 + e^{bb/a}))
            let laws = w.laws;
            let expect = -laws.aa * p_ii / (2.0 * (1.0 + (laws.bb / w.coeffs.a).exp()));
            assert!((w.invisible_population - expect).abs() / expect < 0.05);
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn usg_speeds_up_spreading() {
        let poly = UsgPolynomials::default();
        let mut prev_a = f64::INFINITY;
        let mut prev_t50 = f64::INFINITY;
        for usg in [0.0, 0.03, 0.05, 0.07, 0.10] {
            let w = predict_curve(&SpreadParams::new(0.02, 0.01, usg).unwrap(), &poly).unwrap();
            let t50 = w.time_to_fraction(0.5).unwrap();
            assert!(w.coeffs.a < prev_a && t50 < prev_t50, "usg={usg}");
            prev_a = w.coeffs.a;
            prev_t50 = t50;
        }
    }

    #[test]
    fn curve_saturates_monotonically() {
        let co = worked().coeffs;
        let mut prev = co.eval(0.0);
        for k in 1..=400 {
            let v = co.eval(k as f64);
            assert!(v > prev || v == 1.0);
            prev = v;
        }
        assert_eq!(co.eval(1e6), 1.0);
        assert!((co.eval(500.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn df_dt_limits() {
        assert_eq!(df_dt(1.0, 30.0, 0.7), 0.0);
        let (a, f) = (25.0, 0.3);
        assert_relative_eq!(df_dt(f, a, 1.0), 2.0 / a * f * (1.0 - f), max_relative = 1e-15);
    }

    #[test]
    fn inverse_and_boundaries() {
        let co = worked().coeffs;
        for k in 1..=9 {
            let x = k as f64 / 10.0;
            let t = time_to_fraction(x, &co).unwrap();
            assert!((co.eval(t) - x).abs() < 1e-9);
        }
        assert!(time_to_fraction(0.02, &co).unwrap().abs() < 1e-9);
        assert!(time_to_fraction(0.01, &co).is_err());
        assert!(time_to_fraction(1.0, &co).is_err());
    }

    #[test]
    fn logistic_branch_matches_near_one() {
        let (a, p) = (30.0, 0.02);
        let near = CurveCoefficients::from_initial(a, 0.0, 1.0 - 1e-8, p).unwrap();
        let exact = CurveCoefficients::from_initial(a, 0.0, 1.0, p).unwrap();
        let b = (1.0 - p) / p;
        for k in 0..=100 {
            let t = k as f64;
            let logistic = 1.0 / (1.0 + b * (-2.0 * t / a).exp());
            assert!((near.eval(t) - logistic).abs() / logistic < 1e-4);
            assert!((exact.eval(t) - logistic).abs() < 1e-14);
        }
        let t = time_to_fraction(0.5, &exact).unwrap();
        assert!((exact.eval(t) - 0.5).abs() < 1e-12);
        assert_eq!(c_from_initial(a, 0.0, 1.0, p), Err(ModelError::EpsilonOne));
    }

    #[test]
    fn json_shapes() {
        let co = CurveCoefficients::new(31.0, 0.0, 0.98, 3.08).unwrap();
        assert_eq!(serde_json::to_string(&co).unwrap(), r#"{"a":31.0,"b":0.0,"epsilon":0.98,"c":3.08}"#);
        let l = law_coeffs_of_usg(0.0, &UsgPolynomials::default());
        let v: serde_json::Value = serde_json::to_value(l).unwrap();
        assert_eq!(v["units"], "fraction");
        assert_eq!(v["cc"], 2.405);
    }

    #[test]
    fn invalid_coefficients_rejected() {
        assert!(CurveCoefficients::new(0.0, 0.0, 0.5, 1.0).is_err());
        assert!(CurveCoefficients::new(10.0, 0.0, 0.0, 1.0).is_err());
        assert!(CurveCoefficients::new(10.0, 0.0, 1.0, 1.0).is_err());
        assert!(CurveCoefficients::new(10.0, 0.0, 0.5, -1.0).is_err());
        assert!(CurveCoefficients::from_initial(10.0, 0.0, 0.5, 0.0).is_err());
    }
}
