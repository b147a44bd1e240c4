use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use rumor_core::fit::{fit_curve, infer_network_params, FitResult};
use rumor_core::model::{predict_curve, GrowthPrediction};
use rumor_core::netgen::{build_network, validate_network, ValidationReport};
use rumor_core::rng::{derive_u64, Purpose};
use rumor_core::spread::{read_series_csv, run_ensemble, write_series_csv, Engine};
use rumor_core::tables::{consistency_report, ConsistencyReport, TABLES_VERSION};
use rumor_core::{BurnSeries, CurveCoefficients, PopulationConfig, SpreadParams, UsgPolynomials};

use crate::config::{Command, JobConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Provenance attached to every report.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub tables_version: u32,
    pub engine: Engine,
    pub master_seed: u64,
    pub config: &'a JobConfig,
}

#[derive(Debug, Serialize)]
struct Report<'a, T: Serialize> {
    schema_version: u32,
    manifest: Manifest<'a>,
    #[serde(flatten)]
    body: T,
}

pub struct Ctx {
    pub job: JobConfig,
    /// Where report-only commands also save their JSON.
    pub report_dir: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub p_ii: Option<f64>,
}

impl Ctx {
    fn manifest(&self) -> Manifest<'_> {
        Manifest {
            tool: "rumor",
            version: env!("CARGO_PKG_VERSION"),
            tables_version: TABLES_VERSION,
            engine: Engine::default(),
            master_seed: self.job.master_seed,
            config: &self.job,
        }
    }

    fn render<T: Serialize>(&self, body: T) -> Result<String> {
        let report = Report {
            schema_version: SCHEMA_VERSION,
            manifest: self.manifest(),
            body,
        };
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        Ok(s)
    }

    fn out_dir(&self) -> Result<&Path> {
        let dir = self.job.output_dir.as_path();
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(dir)
    }

    fn write_manifest(&self, dir: &Path) -> Result<()> {
        write_file(&dir.join("manifest.json"), &self.render(serde_json::Map::new())?)
    }

    /// Print a report and, when requested, save it as `<name>.json`.
    fn emit<T: Serialize>(&self, name: &str, body: T) -> Result<()> {
        let text = self.render(body)?;
        if let Some(dir) = &self.report_dir {
            fs::create_dir_all(dir)?;
            write_file(&dir.join(format!("{name}.json")), &text)?;
        }
        print!("{text}");
        Ok(())
    }

    fn read_input(&self) -> Result<BurnSeries> {
        let path = self.input.as_ref().context("--input <series.csv> is required")?;
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let (series, _) = read_series_csv(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
        Ok(series)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_csv(path: &Path, mean: &BurnSeries, std: &[f64], n_samples: usize) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    write_series_csv(&mut w, mean, std, n_samples)?;
    w.flush()?;
    Ok(())
}

pub fn run(cmd: Command, ctx: &Ctx) -> Result<bool> {
    match cmd {
        Command::GenPop => gen_pop(ctx),
        Command::Simulate => simulate(ctx),
        Command::Sweep => sweep(ctx),
        Command::Fit => fit(ctx),
        Command::Predict => predict(ctx),
        Command::Infer => infer(ctx),
        Command::ValidateTables => validate_tables(ctx),
    }
}

#[derive(Serialize)]
struct GenPopBody {
    network_file: String,
    n_total: usize,
    n_connected: usize,
    n_p2p: usize,
    n_groups: usize,
    validation: ValidationReport,
}

/// Writes the network used by population 0 of an ensemble with the same seed.
fn gen_pop(ctx: &Ctx) -> Result<bool> {
    let job = &ctx.job;
    let config = PopulationConfig {
        rng_seed: derive_u64(job.master_seed, 0, 0, Purpose::Network),
        ..job.population.clone()
    };
    let net = build_network(&config)?;
    let validation = validate_network(&net, &config.distributions)?;
    let dir = ctx.out_dir()?;
    ctx.write_manifest(dir)?;
    write_file(&dir.join("network.json"), &net.to_json())?;
    let body = GenPopBody {
        network_file: "network.json".into(),
        n_total: net.n_total(),
        n_connected: net.n_connected(),
        n_p2p: net.n_p2p(),
        n_groups: net.groups().len(),
        validation,
    };
    write_file(&dir.join("gen-pop.json"), &ctx.render(body)?)?;
    Ok(true)
}

#[derive(Debug, Serialize)]
struct PointReport {
    index: usize,
    params: SpreadParams,
    csv: String,
    n_samples: usize,
    f_initial: f64,
    f_final: f64,
    /// First iteration with a burned fraction of at least one half.
    t50: Option<usize>,
    fit: Option<FitResult<CurveCoefficients>>,
    error: Option<String>,
}

impl PointReport {
    fn ok(&self) -> bool {
        self.error.is_none()
    }
}

fn run_point(job: &JobConfig, dir: &Path, index: usize, params: SpreadParams, csv: String) -> PointReport {
    let mut report = PointReport {
        index,
        params,
        csv: csv.clone(),
        n_samples: 0,
        f_initial: f64::NAN,
        f_final: f64::NAN,
        t50: None,
        fit: None,
        error: None,
    };
    let result = match run_ensemble(&job.population, &job.ensemble, &params, Engine::default()) {
        Ok(r) => r,
        Err(e) => {
            report.error = Some(format!("simulation failed: {e}"));
            return report;
        }
    };
    report.n_samples = result.n_samples;
    report.f_initial = result.mean.f[0];
    report.f_final = *result.mean.f.last().expect("series is never empty");
    report.t50 = result.mean.first_passage(0.5);
    if let Err(e) = write_csv(&dir.join(&csv), &result.mean, &result.std, result.n_samples) {
        report.error = Some(format!("{e:#}"));
        return report;
    }
    // the realized seed fraction, not the nominal one, pins F(0)
    match fit_curve(&result.mean, result.mean.f[0]) {
        Ok(f) => report.fit = Some(f),
        Err(e) => report.error = Some(format!("fit failed: {e}")),
    }
    report
}

fn simulate(ctx: &Ctx) -> Result<bool> {
    let dir = ctx.out_dir()?;
    ctx.write_manifest(dir)?;
    let point = run_point(&ctx.job, dir, 0, ctx.job.spread, "series.csv".into());
    let ok = point.ok();
    if let Some(e) = &point.error {
        eprintln!("simulate: {e}");
    }
    write_file(&dir.join("summary.json"), &ctx.render(point)?)?;
    Ok(ok)
}

#[derive(Serialize)]
struct SweepBody {
    n_points: usize,
    n_failed: usize,
    points: Vec<PointReport>,
}

fn sweep(ctx: &Ctx) -> Result<bool> {
    let points = ctx.job.grid().points()?;
    let dir = ctx.out_dir()?;
    ctx.write_manifest(dir)?;
    let width = points.len().to_string().len().max(3);
    let reports: Vec<PointReport> = points
        .par_iter()
        .enumerate()
        .map(|(i, &p)| run_point(&ctx.job, dir, i, p, format!("point_{i:0width$}.csv")))
        .collect();
    let n_failed = reports.iter().filter(|r| !r.ok()).count();
    for r in reports.iter().filter(|r| !r.ok()) {
        eprintln!("sweep: point {} {:?}: {}", r.index, r.params, r.error.as_deref().unwrap_or(""));
    }
    let body = SweepBody {
        n_points: reports.len(),
        n_failed,
        points: reports,
    };
    write_file(&dir.join("summary.json"), &ctx.render(body)?)?;
    Ok(n_failed == 0)
}

#[derive(Serialize)]
struct FitBody {
    p_ii: f64,
    fit: FitResult<CurveCoefficients>,
}

fn fit(ctx: &Ctx) -> Result<bool> {
    let series = ctx.read_input()?;
    let p_ii = ctx.p_ii.or_else(|| series.f.first().copied()).context("empty series")?;
    let fit = fit_curve(&series, p_ii)?;
    ctx.emit("fit", FitBody { p_ii, fit })?;
    Ok(true)
}

#[derive(Debug, Serialize)]
struct TableRow {
    x: f64,
    t_x: Option<f64>,
    omitted: Option<String>,
}

#[derive(Serialize)]
struct Prediction {
    prediction: GrowthPrediction,
    table: Vec<TableRow>,
}

fn prediction_for(params: &SpreadParams) -> Result<Prediction> {
    let prediction = predict_curve(params, &UsgPolynomials::default())?;
    let f0 = prediction.coeffs.eval(0.0);
    let table = (1..=9)
        .map(|k| {
            let x = k as f64 / 10.0;
            match prediction.time_to_fraction(x) {
                Ok(t) => TableRow { x, t_x: Some(t), omitted: None },
                Err(e) if x < f0 => TableRow {
                    x,
                    t_x: None,
                    omitted: Some(format!("below the initial fraction {f0}: {e}")),
                },
                Err(e) => TableRow { x, t_x: None, omitted: Some(e.to_string()) },
            }
        })
        .collect();
    Ok(Prediction { prediction, table })
}

#[derive(Serialize)]
struct PredictBody {
    predictions: Vec<Prediction>,
}

/// Predicts the configured point, or every grid point when a grid is given.
fn predict(ctx: &Ctx) -> Result<bool> {
    let params = match &ctx.job.grid {
        Some(g) => g.points()?,
        None => vec![ctx.job.spread],
    };
    let predictions = params.iter().map(prediction_for).collect::<Result<Vec<_>>>()?;
    for p in &predictions {
        for w in &p.prediction.warnings {
            eprintln!("predict: warning: {}", serde_json::to_string(w)?);
        }
    }
    ctx.emit("predict", PredictBody { predictions })?;
    Ok(true)
}

fn infer(ctx: &Ctx) -> Result<bool> {
    let series = ctx.read_input()?;
    let p_ii = ctx.p_ii.or_else(|| series.f.first().copied()).context("empty series")?;
    let inferred = infer_network_params(&series, p_ii, &UsgPolynomials::default())?;
    for note in &inferred.diagnostics.notes {
        eprintln!("infer: {note}");
    }
    ctx.emit("infer", inferred)?;
    Ok(true)
}

fn validate_tables(ctx: &Ctx) -> Result<bool> {
    let report: ConsistencyReport = consistency_report(&UsgPolynomials::default());
    let pass = report.pass;
    if !pass {
        eprintln!("validate-tables: tables are inconsistent");
    }
    ctx.emit("validate-tables", report)?;
    Ok(pass)
}
