use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the models, samplers and estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid wavepacket: {0}")]
    InvalidWavepacket(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("scene is misaligned (x0 - centroid = {misalignment}); operation requires x0 == centroid")]
    Misaligned { misalignment: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge: estimated error {achieved:e} exceeds requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("trial {rep} at n = {n} failed: {source}")]
    Trial {
        n: usize,
        rep: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
