use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use rumor_core::{EnsembleSpec, PopulationConfig, SpreadParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    GenPop,
    Simulate,
    Sweep,
    Fit,
    Predict,
    Infer,
    ValidateTables,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// 2000 people, 5 populations x 10 runs.
    Desk,
    /// 10000 people, 30 populations x 50 runs.
    Paper,
}

impl Profile {
    pub fn apply(self, job: &mut JobConfig) {
        let (n_total, pops, runs) = match self {
            Profile::Desk => (2000, 5, 10),
            Profile::Paper => (10_000, 30, 50),
        };
        job.population.n_total = n_total;
        job.ensemble.n_populations = pops;
        job.ensemble.runs_per_population = runs;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Grid {
    pub p_ii: Vec<f64>,
    pub p_ip: Vec<f64>,
    pub p_usg: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        let percent = (1..=10).map(|k| k as f64 / 100.0).collect::<Vec<_>>();
        Self {
            p_ii: percent.clone(),
            p_ip: percent,
            p_usg: vec![0.0, 0.03, 0.05, 0.07, 0.10],
        }
    }
}

impl Grid {
    /// All points, `p_usg` varying slowest and `p_ip` fastest.
    pub fn points(&self) -> Result<Vec<SpreadParams>> {
        let mut out = Vec::with_capacity(self.p_ii.len() * self.p_ip.len() * self.p_usg.len());
        for &p_usg in &self.p_usg {
            for &p_ii in &self.p_ii {
                for &p_ip in &self.p_ip {
                    out.push(SpreadParams::new(p_ii, p_ip, p_usg)?);
                }
            }
        }
        if out.is_empty() {
            bail!("the parameter grid is empty");
        }
        Ok(out)
    }
}

fn default_spread() -> SpreadParams {
    SpreadParams {
        p_ii: 0.02,
        p_ip: 0.01,
        p_usg: 0.0,
    }
}

/// Everything a job needs. Missing fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JobConfig {
    pub command: Option<Command>,
    pub population: PopulationConfig,
    pub spread: SpreadParams,
    pub ensemble: EnsembleSpec,
    pub grid: Option<Grid>,
    pub output_dir: PathBuf,
    pub master_seed: u64,
}

impl Default for JobConfig {
    fn default() -> Self {
        Self {
            command: None,
            population: PopulationConfig::default(),
            spread: default_spread(),
            ensemble: EnsembleSpec::default(),
            grid: None,
            output_dir: PathBuf::from("out"),
            master_seed: 0,
        }
    }
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Copy the master seed into the ensemble, then check every section.
    pub fn finish(mut self, command: Command) -> Result<Self> {
        if let Some(c) = self.command {
            if c != command {
                bail!("config is for {c:?} but {command:?} was requested");
            }
        }
        self.command = Some(command);
        self.ensemble.master_seed = self.master_seed;
        self.population.validate()?;
        self.ensemble.validate()?;
        self.spread.validate()?;
        Ok(self)
    }

    pub fn grid(&self) -> Grid {
        self.grid.clone().unwrap_or_default()
    }
}
