//! Two-photon beat interference between a reference photon and a photon from
//! one of two incoherent sources, and estimation of the source separation from
//! momentum-resolved (or bucket) detection events.
//!
//! - [`wavepacket`]: momentum intensities and the envelope `C(dk)`.
//! - [`interference`]: outcome densities, bucket probabilities and the
//!   brute-force marginalization oracle.
//! - [`sampler`]: exact, seeded event generation.
//! - [`fisher`]: Fisher information matrix, bucket information, Cramér–Rao bound.
//! - [`estimator`]: maximum-likelihood estimation and Monte-Carlo studies.

pub mod error;
pub mod estimator;
pub mod fisher;
pub mod interference;
pub mod quadrature;
pub mod sampler;
pub mod wavepacket;

pub use error::{Error, Result};
pub use estimator::{
    log_likelihood, mle, mle_bucket, mle_outcomes, run_study, separation_from_bunching_fraction,
    trial_seed, EstimationResult, MleOptions, StudyConfig, StudyMode, StudyReport, StudyRow,
};
pub use fisher::{crb, fisher_aligned, fisher_bucket, fisher_matrix, FisherMatrix};
pub use interference::{
    aligned_density, bucket_probability, joint_density, momentum_from_pixel, oracle_density,
    DetectorGeometry, OracleSettings, Outcome, Scene, SceneParams, Tag,
};
pub use quadrature::{Estimate, Quadrature};
pub use sampler::{
    derive_seed, draw, draw_bucket, draw_bucket_with, draw_with, rng_for, write_tags_csv,
    BatchMetadata, SampleBatch,
};
pub use wavepacket::{build_envelope, sigma_k_of, Envelope, WavepacketSpec};
