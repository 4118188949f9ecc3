//! Command-line front end: beat curves, event batches, Fisher sweeps and
//! estimator studies written as CSV (plus JSON sidecars).
//!
//! Every CSV starts with a `# {json}` line holding the command, crate version,
//! seed and the full [`RunConfig`], which is enough to reproduce the file.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hombeat_core::{
    aligned_density, crb, draw, draw_bucket, fisher_bucket, fisher_matrix, run_study,
    write_tags_csv, Outcome, SceneParams, StudyConfig, StudyMode, StudyReport, Tag,
};
use serde::{Deserialize, Serialize};

pub use config::{ConfigArgs, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hombeat_core::Error),

    #[error("configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Parser)]
#[command(name = "hombeat", version, about = "Two-photon beat interference simulator and separation estimator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Bunching and antibunching densities across the envelope support.
    Beats(ConfigArgs),
    /// Draw detection events (resolved) or tags (bucket).
    Sample(ConfigArgs),
    /// Fisher information and Cramér–Rao bound over a separation sweep.
    Fisher(ConfigArgs),
    /// Monte-Carlo variance of the maximum-likelihood estimator.
    Study(ConfigArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Beats(_) => "beats",
            Command::Sample(_) => "sample",
            Command::Fisher(_) => "fisher",
            Command::Study(_) => "study",
        }
    }

    fn args(&self) -> &ConfigArgs {
        match self {
            Command::Beats(a) | Command::Sample(a) | Command::Fisher(a) | Command::Study(a) => a,
        }
    }
}

/// Header record of every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: RunConfig,
}

impl Metadata {
    fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            command: command.into(),
            version: VERSION.into(),
            seed: config.seed,
            config: config.clone(),
        }
    }

    /// Parses the `# {json}` first line of an emitted CSV.
    pub fn from_csv_header(text: &str) -> Result<Self, CliError> {
        let line = text.lines().next().unwrap_or_default();
        let json = line
            .strip_prefix("# ")
            .ok_or_else(|| CliError::Config("missing metadata header line".into()))?;
        Ok(serde_json::from_str(json)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSidecar {
    pub metadata: Metadata,
    pub scene: SceneParams,
    pub n: usize,
    pub mode: StudyMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySidecar {
    pub metadata: Metadata,
    pub reports: Vec<StudyReport>,
}

fn header(meta: &Metadata) -> Result<Vec<u8>, CliError> {
    let mut buf = b"# ".to_vec();
    serde_json::to_writer(&mut buf, meta)?;
    buf.push(b'\n');
    Ok(buf)
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(config: &RunConfig, bytes: &[u8]) -> Result<(), CliError> {
    match &config.out {
        Some(path) => write_file(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Path of the JSON sidecar written next to `out`.
pub fn sidecar_path(out: &Path) -> Result<PathBuf, CliError> {
    let path = out.with_extension("json");
    if path == out {
        return Err(CliError::Config(format!(
            "{}: output must not be a .json file (the sidecar takes that name)",
            out.display()
        )));
    }
    Ok(path)
}

fn fmt(x: f64) -> String {
    x.to_string()
}

/// Runs one command against a resolved configuration.
pub fn execute(command: &str, config: &RunConfig) -> Result<(), CliError> {
    let pool = match config.workers {
        Some(0) => return Err(CliError::Config("--workers must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?,
        None => rayon::ThreadPoolBuilder::new().build()?,
    };
    pool.install(|| match command {
        "beats" => cmd_beats(config),
        "sample" => cmd_sample(config),
        "fisher" => cmd_fisher(config),
        "study" => cmd_study(config),
        other => Err(CliError::Config(format!("unknown command `{other}`"))),
    })
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let config = cli.command.args().resolve()?;
    execute(cli.command.name(), &config)
}

/// Densities on a uniform grid over the truncated envelope support.
pub fn cmd_beats(config: &RunConfig) -> Result<(), CliError> {
    let spec = config.spec()?;
    let scene = config.scene(&spec, config.single_delta_x()?)?;
    scene.require_aligned()?;
    if config.points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }
    let b = scene.envelope().support_halfwidth();
    let mut buf = header(&Metadata::new("beats", config))?;
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(["delta_k", "p_bunch", "p_antibunch", "envelope"])?;
        let last = config.points - 1;
        for i in 0..config.points {
            let dk = if i == last {
                b
            } else {
                -b + 2.0 * b * i as f64 / last as f64
            };
            let p_b = aligned_density(&scene, Outcome::new(dk, Tag::B))?;
            let p_a = aligned_density(&scene, Outcome::new(dk, Tag::A))?;
            let c = scene.envelope().density(dk);
            w.write_record([fmt(dk), fmt(p_b), fmt(p_a), fmt(c)])?;
        }
        w.flush().map_err(csv::Error::from)?;
    }
    emit(config, &buf)
}

pub fn cmd_sample(config: &RunConfig) -> Result<(), CliError> {
    config.require_bucket_alignment()?;
    let spec = config.spec()?;
    let scene = config.scene(&spec, config.single_delta_x()?)?;
    let n = config.single_n(1000)?;
    let meta = Metadata::new("sample", config);
    let mut buf = header(&meta)?;
    match config.mode {
        StudyMode::Resolved => draw(&scene, config.seed, n)?.write_csv(&mut buf)?,
        StudyMode::Bucket => write_tags_csv(&draw_bucket(&scene, config.seed, n)?, &mut buf)?,
    }
    if let Some(out) = &config.out {
        let sidecar = SampleSidecar {
            metadata: meta,
            scene: scene.params(),
            n,
            mode: config.mode,
        };
        let json = serde_json::to_string_pretty(&sidecar)? + "\n";
        write_file(&sidecar_path(out)?, json.as_bytes())?;
    }
    emit(config, &buf)
}

/// Separations of the Fisher sweep: explicit `--delta-x` values, else an even
/// grid from `dx_min` (default 0) to `dx_max` (default 10 σ_x).
fn sweep(config: &RunConfig, sigma_x: f64) -> Result<Vec<f64>, CliError> {
    if !config.delta_x.is_empty() {
        return Ok(config.delta_x.clone());
    }
    let lo = config.dx_min.unwrap_or(0.0);
    let hi = config.dx_max.unwrap_or(10.0 * sigma_x);
    match config.dx_steps {
        0 => Err(CliError::Config("--dx-steps must be positive".into())),
        1 => Ok(vec![lo]),
        steps => Ok((0..steps)
            .map(|i| {
                if i == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()),
    }
}

pub fn cmd_fisher(config: &RunConfig) -> Result<(), CliError> {
    let spec = config.spec()?;
    let n = config.single_n(2000)?;
    let probe = config.scene(&spec, 0.0)?;
    let mut buf = header(&Metadata::new("fisher", config))?;
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(["delta_x", "fisher", "fisher_bucket", "crb"])?;
        for dx in sweep(config, probe.envelope().sigma_x())? {
            let scene = probe.with_delta_x(dx);
            let f = fisher_matrix(&scene)?.f11;
            let bucket = if scene.is_aligned() {
                fisher_bucket(&scene)?
            } else {
                f64::NAN
            };
            w.write_record([fmt(dx), fmt(f), fmt(bucket), fmt(crb(f, n)?)])?;
        }
        w.flush().map_err(csv::Error::from)?;
    }
    emit(config, &buf)
}

pub fn cmd_study(config: &RunConfig) -> Result<(), CliError> {
    config.require_bucket_alignment()?;
    let spec = config.spec()?;
    let probe = config.scene(&spec, 0.0)?;
    let sigma_x = probe.envelope().sigma_x();
    let separations = if config.delta_x.is_empty() {
        vec![0.5 * sigma_x, 2.0 * sigma_x]
    } else {
        config.delta_x.clone()
    };
    let n_list = if config.n.is_empty() {
        vec![250, 500, 1000, 2000, 4000]
    } else {
        config.n.clone()
    };

    let mut reports = Vec::with_capacity(separations.len());
    for dx in separations {
        let mut study = StudyConfig::new(probe.with_delta_x(dx), n_list.clone(), config.reps, config.seed);
        study.mode = config.mode;
        reports.push(run_study(&study)?);
    }

    let meta = Metadata::new("study", config);
    let mut buf = header(&meta)?;
    {
        let mut w = csv_writer(&mut buf);
        w.write_record([
            "delta_x",
            "n",
            "reps",
            "var_ratio",
            "mean_ratio",
            "var_ratio_se",
            "crb",
            "non_converged",
        ])?;
        for report in &reports {
            for r in &report.rows {
                w.write_record([
                    fmt(report.scene.delta_x),
                    r.n.to_string(),
                    r.reps.to_string(),
                    fmt(r.var_ratio),
                    fmt(r.mean_ratio),
                    fmt(r.var_ratio_se),
                    fmt(r.crb),
                    r.non_converged.to_string(),
                ])?;
            }
        }
        w.flush().map_err(csv::Error::from)?;
    }
    if let Some(out) = &config.out {
        let json = serde_json::to_string_pretty(&StudySidecar { metadata: meta, reports })? + "\n";
        write_file(&sidecar_path(out)?, json.as_bytes())?;
    }
    emit(config, &buf)
}
