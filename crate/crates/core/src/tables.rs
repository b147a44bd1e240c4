//! Reference coefficient tables shipped with the crate.
//!
//! `TABLE1` lists the law coefficients fitted at five USG sizes, in percent
//! units (`P_II`, `P_IP` in %). [`usg_polynomials`] gives the polynomials in
//! `P_USG` that generate those coefficients, in fraction units.

use serde::{Deserialize, Serialize};

use crate::model::{law_coeffs_of_usg, LawCoefficients, Units, UsgPolynomials};

pub const TABLES_VERSION: u32 = 1;

/// One row of the per-USG coefficient table, with one-sigma errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub p_usg: f64,
    pub laws: LawCoefficients,
    pub errors: [f64; 5],
}

const fn row(p_usg: f64, v: [f64; 5], errors: [f64; 5]) -> Table1Row {
    Table1Row {
        p_usg,
        laws: LawCoefficients {
            aa: v[0],
            bb: v[1],
            cc: v[2],
            ee: v[3],
            gg: v[4],
            units: Units::Percent,
        },
        errors,
    }
}

pub const TABLE1: [Table1Row; 5] = [
    row(0.00, [-0.0208, 7.32, 0.03204, 0.9381, 0.00354], [0.0003, 0.16, 0.00011, 0.0015, 0.00019]),
    row(0.03, [-0.0663, 7.69, 0.03579, 0.9228, 0.0036], [0.0006, 0.09, 0.00015, 0.0019, 0.0002]),
    row(0.05, [-0.1148, 8.28, 0.0391, 0.907, 0.0039], [0.0010, 0.09, 0.0002, 0.002, 0.0003]),
    row(0.07, [-0.180, 8.77, 0.0431, 0.888, 0.0045], [0.002, 0.11, 0.0002, 0.003, 0.0003]),
    row(0.10, [-0.328, 9.47, 0.0521, 0.843, 0.0054], [0.006, 0.19, 0.0004, 0.004, 0.0005]),
];

pub fn table1_row(i: usize) -> Option<Table1Row> {
    TABLE1.get(i).copied()
}

/// USG polynomials (fraction units). The `gg` row uses the same rational
/// quartic shape as `bb`.
pub fn usg_polynomials() -> UsgPolynomials {
    UsgPolynomials {
        aa: [-2.2, -63.0, -2410.0],
        bb: [7.319, 1.09e6, 49000.0],
        cc: [2.405, 4.7, -35.0],
        ee: [0.9375, -0.25, -7.0],
        gg: [0.3541, 10800.0, 4700.0],
    }
}

/// One-sigma errors of [`usg_polynomials`].
pub fn usg_polynomial_errors() -> UsgPolynomials {
    UsgPolynomials {
        aa: [0.4, 18.0, 170.0],
        bb: [0.010, 0.09e6, 4000.0],
        cc: [0.010, 0.5, 4.0],
        ee: [0.0017, 0.08, 0.7],
        gg: [0.0010, 600.0, 300.0],
    }
}

pub const COEFFICIENT_NAMES: [&str; 5] = ["aa", "bb", "cc", "ee", "gg"];

/// Allowed relative deviation between the polynomials and the per-USG table.
pub fn consistency_tolerance(name: &str) -> f64 {
    match name {
        "bb" | "ee" => 0.01,
        _ => 0.07,
    }
}

fn values(l: &LawCoefficients) -> [f64; 5] {
    [l.aa, l.bb, l.cc, l.ee, l.gg]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyEntry {
    pub p_usg: f64,
    pub coefficient: String,
    pub polynomial: f64,
    pub table: f64,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub tables_version: u32,
    pub entries: Vec<ConsistencyEntry>,
    /// `(coefficient, max relative deviation, tolerance, pass)`.
    pub summary: Vec<(String, f64, f64, bool)>,
    pub pass: bool,
}

/// Evaluate the USG polynomials at each table row and compare with the row
/// after converting it to fraction units.
pub fn consistency_report(poly: &UsgPolynomials) -> ConsistencyReport {
    let mut entries = Vec::new();
    for r in &TABLE1 {
        let table = values(&r.laws.to_fraction());
        let predicted = values(&law_coeffs_of_usg(r.p_usg, poly));
        for (k, name) in COEFFICIENT_NAMES.iter().enumerate() {
            entries.push(ConsistencyEntry {
                p_usg: r.p_usg,
                coefficient: name.to_string(),
                polynomial: predicted[k],
                table: table[k],
                relative_deviation: ((predicted[k] - table[k]) / table[k]).abs(),
            });
        }
    }
    let summary: Vec<_> = COEFFICIENT_NAMES
        .iter()
        .map(|name| {
            let max = entries
                .iter()
                .filter(|e| e.coefficient == *name)
                .map(|e| e.relative_deviation)
                .fold(0.0, f64::max);
            let tol = consistency_tolerance(name);
            (name.to_string(), max, tol, max <= tol)
        })
        .collect();
    let pass = summary.iter().all(|s| s.3);
    ConsistencyReport {
        tables_version: TABLES_VERSION,
        entries,
        summary,
        pass,
    }
}
