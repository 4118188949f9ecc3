use std::path::{Path, PathBuf};

use clap::Args;
use hombeat_core::{Scene, StudyMode, WavepacketSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Everything needed to re-run a command. Echoed into every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sigma_k: Option<f64>,
    pub wavepacket: Option<PathBuf>,
    pub delta_x: Vec<f64>,
    pub centroid: f64,
    /// Reference position; `None` means aligned with the centroid.
    pub x0: Option<f64>,
    pub mode: StudyMode,
    pub n: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub dx_min: Option<f64>,
    pub dx_max: Option<f64>,
    pub dx_steps: usize,
    pub points: usize,
    /// Thread count; never affects output, so it is not recorded.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sigma_k: None,
            wavepacket: None,
            delta_x: Vec::new(),
            centroid: 0.0,
            x0: None,
            mode: StudyMode::Resolved,
            n: Vec::new(),
            reps: 1000,
            seed: 1,
            out: None,
            dx_min: None,
            dx_max: None,
            dx_steps: 101,
            points: 801,
            workers: None,
        }
    }
}

fn parse_mode(s: &str) -> Result<StudyMode, String> {
    match s {
        "resolved" => Ok(StudyMode::Resolved),
        "bucket" => Ok(StudyMode::Bucket),
        other => Err(format!("unknown mode `{other}` (expected resolved or bucket)")),
    }
}

/// Flags shared by all subcommands. Each overrides the matching field of the
/// optional `--config` file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON file with RunConfig fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Width of a Gaussian momentum wavepacket.
    #[arg(long)]
    pub sigma_k: Option<f64>,
    /// CSV with columns `k, amplitude_sq` describing |φ(k)|².
    #[arg(long)]
    pub wavepacket: Option<PathBuf>,
    /// Source separation(s), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub delta_x: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub centroid: Option<f64>,
    /// Reference position (defaults to the centroid).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// resolved or bucket.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<StudyMode>,
    /// Sample size(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub dx_min: Option<f64>,
    #[arg(long)]
    pub dx_max: Option<f64>,
    #[arg(long)]
    pub dx_steps: Option<usize>,
    /// Grid points of the beat curve.
    #[arg(long)]
    pub points: Option<usize>,
    /// Worker threads for studies.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl ConfigArgs {
    /// Loads `--config` (if any) and applies the flags on top.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_path(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone();
                }
            )*};
        }
        macro_rules! set_opt {
            ($($field:ident),*) => {$(
                if self.$field.is_some() {
                    cfg.$field = self.$field.clone();
                }
            )*};
        }
        set!(delta_x, centroid, mode, n, reps, seed, dx_steps, points);
        set_opt!(wavepacket, x0, out, dx_min, dx_max, workers);
        if self.sigma_k.is_some() {
            cfg.sigma_k = self.sigma_k;
            if self.wavepacket.is_none() {
                cfg.wavepacket = None;
            }
        } else if self.wavepacket.is_some() {
            cfg.sigma_k = None;
        }
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn spec(&self) -> Result<WavepacketSpec, CliError> {
        match (&self.wavepacket, self.sigma_k) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either --sigma-k or --wavepacket, not both".into(),
            )),
            (Some(path), None) => Ok(WavepacketSpec::from_csv_path(path)?),
            (None, s) => Ok(WavepacketSpec::gaussian(s.unwrap_or(1.0))?),
        }
    }

    pub fn x0(&self) -> f64 {
        self.x0.unwrap_or(self.centroid)
    }

    pub fn scene(&self, spec: &WavepacketSpec, delta_x: f64) -> Result<Scene, CliError> {
        Ok(Scene::new(spec.clone(), delta_x, self.centroid, self.x0())?)
    }

    /// The single separation used by `beats` and `sample`.
    pub fn single_delta_x(&self) -> Result<f64, CliError> {
        match self.delta_x.as_slice() {
            [dx] => Ok(*dx),
            [] => Err(CliError::Config("--delta-x is required".into())),
            _ => Err(CliError::Config("this command takes a single --delta-x".into())),
        }
    }

    /// The single sample size, or `default` when none was given.
    pub fn single_n(&self, default: usize) -> Result<usize, CliError> {
        let n = match self.n.as_slice() {
            [] => default,
            [n] => *n,
            _ => return Err(CliError::Config("this command takes a single --n".into())),
        };
        if n == 0 {
            return Err(CliError::Config("--n must be positive".into()));
        }
        Ok(n)
    }

    pub fn require_bucket_alignment(&self) -> Result<(), CliError> {
        if self.mode == StudyMode::Bucket && self.x0() != self.centroid {
            return Err(CliError::Config(
                "bucket mode requires x0 equal to the centroid".into(),
            ));
        }
        Ok(())
    }
}
