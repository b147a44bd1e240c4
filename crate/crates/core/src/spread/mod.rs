//! Monte Carlo rumor spreading.
//!
//! At every iteration each burned individual tries each of its channels (one
//! per outgoing person-to-person link, one per group membership) with
//! probability `p_ip`; members of the uncritical senders group (USG) use
//! probability 1. A successful p2p send burns the destination, a successful
//! group send burns every member. Updates are synchronous: all sends of an
//! iteration are decided from the burned set at its start.

mod engine;
mod ensemble;
mod io;

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netgen::Network;

pub use engine::{run, run_with_engine, step, step_in_place, Engine};
pub use ensemble::{run_ensemble, run_population, EnsembleResult, PopulationSeries};
pub use io::{read_series_csv, write_series_csv, SeriesRow};

pub type IdSet = BTreeSet<usize>;

#[derive(Debug, Error, PartialEq)]
pub enum SpreadError {
    #[error("probability {name} = {value} is outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("ensemble counts must be at least 1")]
    EmptyEnsemble,
    #[error(transparent)]
    Netgen(#[from] crate::netgen::NetgenError),
    #[error("series csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadParams {
    pub p_ii: f64,
    pub p_ip: f64,
    pub p_usg: f64,
}

impl SpreadParams {
    pub fn new(p_ii: f64, p_ip: f64, p_usg: f64) -> Result<Self, SpreadError> {
        let p = Self { p_ii, p_ip, p_usg };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SpreadError> {
        for (name, value) in [("p_ii", self.p_ii), ("p_ip", self.p_ip), ("p_usg", self.p_usg)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SpreadError::Probability { name, value });
            }
        }
        Ok(())
    }
}

/// State of a single run. Burned individuals never recover and the USG never changes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadState {
    burned: Vec<bool>,
    usg: Vec<bool>,
    burned_groups: Vec<bool>,
    n_burned: usize,
    iteration: usize,
}

impl SpreadState {
    pub fn new(net: &Network, seed: &IdSet, usg: &IdSet) -> Self {
        let mut burned = vec![false; net.n_total()];
        for &i in seed {
            burned[i] = true;
        }
        let mut usg_mask = vec![false; net.n_total()];
        for &i in usg {
            usg_mask[i] = true;
        }
        Self {
            n_burned: seed.len(),
            burned,
            usg: usg_mask,
            burned_groups: vec![false; net.groups().len()],
            iteration: 0,
        }
    }

    pub fn is_burned(&self, id: usize) -> bool {
        self.burned[id]
    }

    pub fn is_usg(&self, id: usize) -> bool {
        self.usg[id]
    }

    pub fn is_group_burned(&self, g: usize) -> bool {
        self.burned_groups[g]
    }

    pub fn burned(&self) -> IdSet {
        ids(&self.burned)
    }

    pub fn usg(&self) -> IdSet {
        ids(&self.usg)
    }

    pub fn burned_groups(&self) -> IdSet {
        ids(&self.burned_groups)
    }

    pub fn n_burned(&self) -> usize {
        self.n_burned
    }

    pub fn n_burned_groups(&self) -> usize {
        self.burned_groups.iter().filter(|&&b| b).count()
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    fn burn(&mut self, id: usize) {
        if !self.burned[id] {
            self.burned[id] = true;
            self.n_burned += 1;
        }
    }
}

fn ids(mask: &[bool]) -> IdSet {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

fn bernoulli_subset<R: Rng + ?Sized>(net: &Network, p: f64, rng: &mut R) -> IdSet {
    net.connected()
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < p)
        .collect()
}

/// Initial seed: every connected individual independently with probability `p_ii`.
pub fn select_seed<R: Rng + ?Sized>(net: &Network, p_ii: f64, rng: &mut R) -> IdSet {
    bernoulli_subset(net, p_ii, rng)
}

/// USG members: every connected individual independently with probability `p_usg`.
pub fn select_usg<R: Rng + ?Sized>(net: &Network, p_usg: f64, rng: &mut R) -> IdSet {
    bernoulli_subset(net, p_usg, rng)
}

/// Burned fraction after each iteration, `f[0]` being the seed fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurnSeries {
    pub f: Vec<f64>,
    /// Number of connected individuals the counts were divided by, when known.
    pub normalizer: Option<usize>,
}

impl BurnSeries {
    pub fn new(f: Vec<f64>, normalizer: Option<usize>) -> Self {
        Self { f, normalizer }
    }

    /// Number of iterations after the initial state.
    pub fn horizon(&self) -> usize {
        self.f.len().saturating_sub(1)
    }

    pub fn is_monotone(&self) -> bool {
        self.f.windows(2).all(|w| w[0] <= w[1])
    }

    /// Smallest `n` with `f(n) >= x`.
    pub fn first_passage(&self, x: f64) -> Option<usize> {
        first_passage(self, x)
    }
}

pub fn first_passage(series: &BurnSeries, x: f64) -> Option<usize> {
    series.f.iter().position(|&v| v >= x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnsembleSpec {
    pub n_populations: usize,
    pub runs_per_population: usize,
    pub iterations: usize,
    pub master_seed: u64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            n_populations: 30,
            runs_per_population: 50,
            iterations: 100,
            master_seed: 0,
        }
    }
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<(), SpreadError> {
        if self.n_populations == 0 || self.runs_per_population == 0 || self.iterations == 0 {
            return Err(SpreadError::EmptyEnsemble);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{build_network, PopulationConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn population() -> Network {
        build_network(&PopulationConfig {
            n_total: 10_000,
            rng_seed: 11,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn seed_extremes() {
        let net = population();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(select_seed(&net, 0.0, &mut rng).is_empty());
        let all = select_seed(&net, 1.0, &mut rng);
        assert_eq!(all.len(), net.n_connected());
        assert!(all.iter().all(|&i| net.is_connected(i)));
        assert!(select_usg(&net, 0.0, &mut rng).is_empty());
        assert_eq!(select_usg(&net, 1.0, &mut rng).len(), 7000);
    }

    #[test]
    fn seed_size_is_binomial() {
        let net = population();
        // mean 140, sd sqrt(7000 * 0.02 * 0.98) ~ 11.7
        let sd = (7000.0f64 * 0.02 * 0.98).sqrt();
        let mut total = 0usize;
        for s in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + s);
            let k = select_seed(&net, 0.02, &mut rng).len();
            assert!((k as f64 - 140.0).abs() < 3.0 * sd + 1.0, "trial {s}: {k}");
            total += k;
        }
        let mean = total as f64 / 50.0;
        assert!((mean - 140.0).abs() < 3.0 * sd / 50f64.sqrt());
    }

    #[test]
    fn usg_size_expectation() {
        let net = population();
        let mut total = 0usize;
        for s in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + s);
            total += select_usg(&net, 0.03, &mut rng).len();
        }
        let mean = total as f64 / 50.0;
        let sd = (7000.0f64 * 0.03 * 0.97).sqrt() / 50f64.sqrt();
        assert!((mean - 210.0).abs() < 3.0 * sd, "{mean}");
    }

    #[test]
    fn first_passage_scans() {
        let s = BurnSeries::new(vec![0.1, 0.4, 0.8], None);
        assert_eq!(s.first_passage(0.5), Some(2));
        assert_eq!(s.first_passage(0.1), Some(0));
        assert_eq!(s.first_passage(0.9), None);
        let flat = BurnSeries::new(vec![0.3; 5], None);
        assert_eq!(first_passage(&flat, 0.4), None);
    }

    #[test]
    fn params_validation() {
        assert!(SpreadParams::new(0.02, 0.01, 0.0).is_ok());
        assert!(SpreadParams::new(-0.1, 0.01, 0.0).is_err());
        assert!(SpreadParams::new(0.1, 1.5, 0.0).is_err());
        assert!(EnsembleSpec { n_populations: 0, ..Default::default() }.validate().is_err());
    }
}
