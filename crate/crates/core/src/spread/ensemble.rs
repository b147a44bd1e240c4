use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::{run_with_engine, Engine};
use super::{select_seed, select_usg, BurnSeries, EnsembleSpec, SpreadError, SpreadParams};
use crate::netgen::{build_network, PopulationConfig};
use crate::rng::{child_rng, derive_u64, Purpose};

/// Averages for one population over its runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationSeries {
    pub population: usize,
    pub n_connected: usize,
    pub seed_size: usize,
    pub usg_size: usize,
    pub mean: BurnSeries,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    /// Grand average over populations and runs.
    pub mean: BurnSeries,
    /// Standard deviation of `f(n)` across all individual runs.
    pub std: Vec<f64>,
    pub n_samples: usize,
    pub per_population: Vec<PopulationSeries>,
}

/// Simulate one population of an ensemble.
///
/// The network, seed set and USG are drawn once from streams derived from
/// `(master_seed, population)`; run `r` uses the stream for
/// `(master_seed, population, r)`.
pub fn run_population(
    population_config: &PopulationConfig,
    spec: &EnsembleSpec,
    params: &SpreadParams,
    population: usize,
    engine: Engine,
) -> Result<PopulationSeries, SpreadError> {
    let pop = population as u64;
    let master = spec.master_seed;
    let config = PopulationConfig {
        rng_seed: derive_u64(master, pop, 0, Purpose::Network),
        ..population_config.clone()
    };
    let net = build_network(&config)?;
    let seed = select_seed(&net, params.p_ii, &mut child_rng(master, pop, 0, Purpose::Seed));
    let usg = select_usg(&net, params.p_usg, &mut child_rng(master, pop, 0, Purpose::Usg));

    let len = spec.iterations + 1;
    let mut sum = vec![0.0; len];
    let mut sum_sq = vec![0.0; len];
    for r in 0..spec.runs_per_population {
        let mut rng = child_rng(master, pop, r as u64, Purpose::Run);
        let series = run_with_engine(&net, params, &seed, &usg, &mut rng, spec.iterations, engine);
        for (n, &v) in series.f.iter().enumerate() {
            sum[n] += v;
            sum_sq[n] += v * v;
        }
    }
    let runs = spec.runs_per_population as f64;
    let mean = BurnSeries::new(sum.iter().map(|s| s / runs).collect(), Some(net.n_connected()));
    Ok(PopulationSeries {
        population,
        n_connected: net.n_connected(),
        seed_size: seed.len(),
        usg_size: usg.len(),
        mean,
        sum,
        sum_sq,
    })
}

/// Run `spec.n_populations` freshly generated populations with
/// `spec.runs_per_population` runs each and average them.
///
/// Populations run in parallel; the reduction is done in population order so
/// the result does not depend on the schedule.
pub fn run_ensemble(
    population_config: &PopulationConfig,
    spec: &EnsembleSpec,
    params: &SpreadParams,
    engine: Engine,
) -> Result<EnsembleResult, SpreadError> {
    spec.validate()?;
    params.validate()?;
    population_config.validate()?;
    let per_population = (0..spec.n_populations)
        .into_par_iter()
        .map(|p| run_population(population_config, spec, params, p, engine))
        .collect::<Result<Vec<_>, _>>()?;

    let len = spec.iterations + 1;
    let n_samples = spec.n_populations * spec.runs_per_population;
    let mut sum = vec![0.0; len];
    let mut sum_sq = vec![0.0; len];
    for p in &per_population {
        for n in 0..len {
            sum[n] += p.sum[n];
            sum_sq[n] += p.sum_sq[n];
        }
    }
    let k = n_samples as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / k).collect();
    let std = sum_sq
        .iter()
        .zip(&mean)
        .map(|(s2, m)| {
            if n_samples < 2 {
                0.0
            } else {
                ((s2 - k * m * m) / (k - 1.0)).max(0.0).sqrt()
            }
        })
        .collect();
    let normalizer = per_population.first().map(|p| p.n_connected);
    Ok(EnsembleResult {
        mean: BurnSeries::new(mean, normalizer),
        std,
        n_samples,
        per_population,
    })
}
