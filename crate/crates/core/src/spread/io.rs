//! Series CSV: `n,f_mean,f_std,n_samples`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{BurnSeries, SpreadError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub n: usize,
    pub f_mean: f64,
    pub f_std: f64,
    pub n_samples: usize,
}

pub fn write_series_csv<W: Write>(
    writer: W,
    mean: &BurnSeries,
    std: &[f64],
    n_samples: usize,
) -> Result<(), SpreadError> {
    let mut w = csv::Writer::from_writer(writer);
    for (n, &f_mean) in mean.f.iter().enumerate() {
        let row = SeriesRow {
            n,
            f_mean,
            f_std: std.get(n).copied().unwrap_or(0.0),
            n_samples,
        };
        w.serialize(row).map_err(|e| SpreadError::Csv(e.to_string()))?;
    }
    w.flush().map_err(|e| SpreadError::Csv(e.to_string()))?;
    Ok(())
}

/// Read a series back. Rows must start at `n = 0` and be consecutive.
pub fn read_series_csv<R: Read>(reader: R) -> Result<(BurnSeries, Vec<SeriesRow>), SpreadError> {
    let mut r = csv::Reader::from_reader(reader);
    let rows = r
        .deserialize::<SeriesRow>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| SpreadError::Csv(e.to_string()))?;
    for (i, row) in rows.iter().enumerate() {
        if row.n != i {
            return Err(SpreadError::Csv(format!("expected n = {i}, found {}", row.n)));
        }
    }
    let series = BurnSeries::new(rows.iter().map(|r| r.f_mean).collect(), None);
    Ok((series, rows))
}
