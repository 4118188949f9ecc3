//! Maximum-likelihood estimation of the separation and the Monte-Carlo study of
//! its variance against the Cramér–Rao bound.
//!
//! The model identifies only `|Δx|`, so the search runs over `[0, Δx_max]`: a
//! coarse grid scan locates the global maximum (the likelihood can have
//! secondary maxima from the beat periodicity) and golden-section search
//! refines it inside the neighbouring grid cells.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::{crb, fisher_aligned, fisher_bucket, fisher_matrix};
use crate::interference::{bucket_probability, Outcome, Scene, SceneParams, Tag};
use crate::sampler::{derive_seed, draw_bucket_with, draw_with, rng_for, SampleBatch};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_GOLDEN_ITERATIONS: usize = 500;

/// Search settings for [`mle`] and [`mle_bucket`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleOptions {
    /// Points of the coarse scan over the bracket.
    pub grid_points: usize,
    /// Upper edge of the bracket; `None` means `8 σ_x`.
    pub dx_max: Option<f64>,
    /// Absolute tolerance of the refinement in units of `σ_x`.
    pub tolerance_sigma_x: f64,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            grid_points: 512,
            dx_max: None,
            tolerance_sigma_x: 1e-6,
        }
    }
}

impl MleOptions {
    fn bracket(&self, scene: &Scene) -> Result<(f64, f64)> {
        let hi = self.dx_max.unwrap_or(8.0 * scene.envelope().sigma_x());
        if !(hi.is_finite() && hi > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "search bracket upper edge must be positive, got {hi}"
            )));
        }
        if self.grid_points < 3 {
            return Err(Error::InvalidArgument("grid scan needs at least 3 points".into()));
        }
        Ok((0.0, hi))
    }

    fn tolerance(&self, scene: &Scene) -> f64 {
        self.tolerance_sigma_x * scene.envelope().sigma_x()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub estimate: f64,
    pub log_likelihood: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub converged: bool,
}

/// Log-likelihood of `outcomes` under `template` with its separation replaced
/// by `delta_x`. Impossible events give `-inf`.
pub fn log_likelihood(template: &Scene, outcomes: &[Outcome], delta_x: f64) -> f64 {
    let env = template.envelope();
    let base: f64 = outcomes.iter().map(|o| env.density(o.delta_k).ln()).sum();
    base + Beats::new(template, outcomes).profile(delta_x)
}

/// The `Δx`-dependent part of the log-likelihood, with per-event constants
/// hoisted out of the search loop.
struct Beats {
    misalignment: f64,
    bunch: Vec<f64>,
    anti: Vec<f64>,
}

impl Beats {
    fn new(template: &Scene, outcomes: &[Outcome]) -> Self {
        let misalignment = if template.is_aligned() {
            0.0
        } else {
            template.misalignment()
        };
        let mut bunch = Vec::new();
        let mut anti = Vec::new();
        for o in outcomes {
            match o.tag {
                Tag::B => bunch.push(o.delta_k),
                Tag::A => anti.push(o.delta_k),
            }
        }
        Self {
            misalignment,
            bunch,
            anti,
        }
    }

    fn profile(&self, delta_x: f64) -> f64 {
        if self.misalignment == 0.0 {
            // P(dk, B) = C cos²(dk Δx / 4), P(dk, A) = C sin²(dk Δx / 4).
            let b: f64 = self
                .bunch
                .iter()
                .map(|dk| (dk * delta_x / 4.0).cos().powi(2).ln())
                .sum();
            let a: f64 = self
                .anti
                .iter()
                .map(|dk| (dk * delta_x / 4.0).sin().powi(2).ln())
                .sum();
            a + b
        } else {
            let m = self.misalignment;
            let term = |dk: f64, alpha: f64| {
                (0.5 * (1.0 + alpha * (dk * delta_x / 2.0).cos() * (dk * m).cos())).ln()
            };
            self.bunch.iter().map(|&dk| term(dk, 1.0)).sum::<f64>()
                + self.anti.iter().map(|&dk| term(dk, -1.0)).sum::<f64>()
        }
    }
}

struct Maximum {
    x: f64,
    value: f64,
    bracket: (f64, f64),
    iterations: usize,
    converged: bool,
}

/// Grid scan followed by golden-section refinement around the best grid cell.
fn maximize<F: Fn(f64) -> f64>(
    objective: F,
    (lo, hi): (f64, f64),
    grid_points: usize,
    tolerance: f64,
) -> Result<Maximum> {
    let step = (hi - lo) / (grid_points - 1) as f64;
    let at = |i: usize| if i == grid_points - 1 { hi } else { lo + step * i as f64 };
    let mut best = None::<(usize, f64)>;
    for i in 0..grid_points {
        let v = objective(at(i));
        if v.is_nan() || v == f64::NEG_INFINITY {
            continue;
        }
        if best.is_none() || best.is_some_and(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    let Some((i, grid_value)) = best else {
        return Err(Error::Estimation(
            "log-likelihood is -inf at every candidate in the bracket".into(),
        ));
    };

    let (mut a, mut b) = (at(i.saturating_sub(1)), at((i + 1).min(grid_points - 1)));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    let mut iterations = 0;
    while b - a > tolerance && iterations < MAX_GOLDEN_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = objective(d);
        }
        iterations += 1;
    }
    let converged = b - a <= tolerance;
    let mid = 0.5 * (a + b);
    let f_mid = objective(mid);
    let (x, value) = [(mid, f_mid), (c, fc), (d, fd), (at(i), grid_value)]
        .into_iter()
        .fold((mid, f_mid), |acc, cand| if cand.1 > acc.1 { cand } else { acc });
    Ok(Maximum {
        x,
        value,
        bracket: (lo, hi),
        iterations,
        converged,
    })
}

/// Maximum-likelihood `|Δx|` from a momentum-resolved batch.
pub fn mle(batch: &SampleBatch, options: &MleOptions) -> Result<EstimationResult> {
    mle_outcomes(&batch.scene, &batch.outcomes, options)
}

/// Maximum-likelihood `|Δx|` from outcomes, with `template` supplying the
/// wavepacket and misalignment (its own separation is ignored).
pub fn mle_outcomes(
    template: &Scene,
    outcomes: &[Outcome],
    options: &MleOptions,
) -> Result<EstimationResult> {
    if outcomes.is_empty() {
        return Err(Error::Estimation("no outcomes to estimate from".into()));
    }
    let bracket = options.bracket(template)?;
    let beats = Beats::new(template, outcomes);
    let max = maximize(
        |dx| beats.profile(dx),
        bracket,
        options.grid_points,
        options.tolerance(template),
    )?;
    let env = template.envelope();
    let base: f64 = outcomes.iter().map(|o| env.density(o.delta_k).ln()).sum();
    Ok(EstimationResult {
        estimate: max.x,
        log_likelihood: base + max.value,
        bracket: max.bracket,
        iterations: max.iterations,
        converged: max.converged,
    })
}

/// Separation whose Gaussian bucket bunching probability
/// `½ (1 + exp(-σ_k² Δx² / 4))` equals `p`; `None` for `p <= ½`.
pub fn separation_from_bunching_fraction(sigma_k: f64, p: f64) -> Option<f64> {
    if p.is_nan() || p <= 0.5 {
        return None;
    }
    let contrast = (2.0 * p - 1.0).min(1.0);
    Some(2.0 / sigma_k * (-contrast.ln()).max(0.0).sqrt())
}

fn binomial_log_likelihood(bunch: usize, anti: usize, p_bunch: f64) -> f64 {
    let term = |count: usize, p: f64| if count == 0 { 0.0 } else { count as f64 * p.ln() };
    term(bunch, p_bunch) + term(anti, 1.0 - p_bunch)
}

/// Maximum-likelihood `|Δx|` from bucket-detector tags of an aligned scene.
pub fn mle_bucket(tags: &[Tag], template: &Scene, options: &MleOptions) -> Result<EstimationResult> {
    if tags.is_empty() {
        return Err(Error::Estimation("no bucket events to estimate from".into()));
    }
    template.require_aligned()?;
    let bracket = options.bracket(template)?;
    let bunch = tags.iter().filter(|t| **t == Tag::B).count();
    let anti = tags.len() - bunch;
    let env = template.envelope();

    if env.is_gaussian() {
        let p_hat = bunch as f64 / tags.len() as f64;
        let (estimate, converged) = match separation_from_bunching_fraction(env.sigma_k(), p_hat) {
            Some(dx) if dx <= bracket.1 => (dx, true),
            _ => (bracket.1, false),
        };
        let p_b = bucket_probability(&template.with_delta_x(estimate), Tag::B)?;
        return Ok(EstimationResult {
            estimate,
            log_likelihood: binomial_log_likelihood(bunch, anti, p_b),
            bracket,
            iterations: 0,
            converged,
        });
    }

    let objective = |dx: f64| {
        bucket_probability(&template.with_delta_x(dx), Tag::B)
            .map(|p| binomial_log_likelihood(bunch, anti, p))
            .unwrap_or(f64::NAN)
    };
    let max = maximize(objective, bracket, options.grid_points, options.tolerance(template))?;
    Ok(EstimationResult {
        estimate: max.x,
        log_likelihood: max.value,
        bracket: max.bracket,
        iterations: max.iterations,
        converged: max.converged,
    })
}

/// Which measurement a study simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StudyMode {
    #[default]
    Resolved,
    Bucket,
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub scene: Scene,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub mode: StudyMode,
    pub mle: MleOptions,
}

impl StudyConfig {
    pub fn new(scene: Scene, n_list: Vec<usize>, reps: usize, seed: u64) -> Self {
        Self {
            scene,
            n_list,
            reps,
            seed,
            mode: StudyMode::Resolved,
            mle: MleOptions::default(),
        }
    }
}

/// Monte-Carlo results at one sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub n: usize,
    pub reps: usize,
    /// `Var[estimate] · n · F`; 1 means the Cramér–Rao bound is saturated.
    pub var_ratio: f64,
    /// `mean(estimate) / Δx_true`.
    pub mean_ratio: f64,
    /// Normal-theory standard error of `var_ratio`.
    pub var_ratio_se: f64,
    pub mean_estimate: f64,
    pub variance: f64,
    pub crb: f64,
    pub non_converged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub scene: SceneParams,
    pub mode: StudyMode,
    pub seed: u64,
    pub reps: usize,
    pub information: f64,
    pub rows: Vec<StudyRow>,
}

/// Seed of trial `rep` at the `n_index`-th sample size.
pub fn trial_seed(seed: u64, n_index: usize, rep: usize) -> u64 {
    derive_seed(seed, ((n_index as u64) << 32) | rep as u64)
}

fn run_trial(config: &StudyConfig, n: usize, seed: u64, p_bunch: f64) -> Result<EstimationResult> {
    let mut rng = rng_for(seed);
    match config.mode {
        StudyMode::Resolved => {
            let outcomes = draw_with(&config.scene, &mut rng, n);
            mle_outcomes(&config.scene, &outcomes, &config.mle)
        }
        StudyMode::Bucket => {
            let tags = draw_bucket_with(p_bunch, &mut rng, n);
            mle_bucket(&tags, &config.scene, &config.mle)
        }
    }
}

/// Repeats sampling and estimation `reps` times per sample size. Trials run in
/// parallel; each has its own derived seed, so the report does not depend on
/// the number of worker threads.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    let scene = &config.scene;
    let dx_true = scene.delta_x();
    if config.reps < 2 {
        return Err(Error::InvalidArgument("a study needs reps >= 2".into()));
    }
    if config.n_list.is_empty() || config.n_list.contains(&0) {
        return Err(Error::InvalidArgument("sample sizes must be positive".into()));
    }
    if dx_true == 0.0 {
        return Err(Error::InvalidArgument(
            "a study needs a non-zero true separation (mean ratio is relative to it)".into(),
        ));
    }
    let (information, p_bunch) = match config.mode {
        StudyMode::Resolved => {
            let info = if scene.is_aligned() {
                fisher_aligned(scene.spec())
            } else {
                fisher_matrix(scene)?.f11
            };
            (info, f64::NAN)
        }
        StudyMode::Bucket => (fisher_bucket(scene)?, bucket_probability(scene, Tag::B)?),
    };

    let mut rows = Vec::with_capacity(config.n_list.len());
    for (n_index, &n) in config.n_list.iter().enumerate() {
        let trials: Vec<Result<EstimationResult>> = (0..config.reps)
            .into_par_iter()
            .map(|rep| run_trial(config, n, trial_seed(config.seed, n_index, rep), p_bunch))
            .collect();
        let mut estimates = Vec::with_capacity(config.reps);
        let mut non_converged = 0;
        for (rep, trial) in trials.into_iter().enumerate() {
            let result = trial.map_err(|e| Error::Trial {
                n,
                rep,
                source: Box::new(e),
            })?;
            if !result.converged {
                non_converged += 1;
            }
            estimates.push(result.estimate);
        }
        let reps = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / reps;
        let variance = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (reps - 1.0);
        let var_ratio = variance * n as f64 * information;
        rows.push(StudyRow {
            n,
            reps: config.reps,
            var_ratio,
            mean_ratio: mean / dx_true.abs(),
            var_ratio_se: var_ratio * (2.0 / (reps - 1.0)).sqrt(),
            mean_estimate: mean,
            variance,
            crb: crb(information, n)?,
            non_converged,
        });
    }

    Ok(StudyReport {
        scene: scene.params(),
        mode: config.mode,
        seed: config.seed,
        reps: config.reps,
        information,
        rows,
    })
}

impl StudyReport {
    /// Writes `n,reps,var_ratio,mean_ratio` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        w.write_record(["n", "reps", "var_ratio", "mean_ratio"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.reps.to_string(),
                r.var_ratio.to_string(),
                r.mean_ratio.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::draw;
    use crate::wavepacket::WavepacketSpec;

    fn aligned(sigma_k: f64, dx: f64) -> Scene {
        Scene::aligned(WavepacketSpec::gaussian(sigma_k).unwrap(), dx, 0.0).unwrap()
    }

    #[test]
    fn empty_batch_has_zero_log_likelihood() {
        assert_eq!(log_likelihood(&aligned(1.0, 1.0), &[], 0.3), 0.0);
    }

    #[test]
    fn single_bunching_event_at_zero_separation() {
        let ll = log_likelihood(&aligned(1.0, 0.0), &[Outcome::new(1.0, Tag::B)], 0.0);
        let expected = (-0.25f64).exp().ln() - (4.0 * std::f64::consts::PI).sqrt().ln();
        assert!((ll - expected).abs() < 1e-14);
        assert!((ll + 1.5155).abs() < 1e-4);
    }

    #[test]
    fn antibunching_event_is_impossible_at_zero_separation() {
        let outcomes = [Outcome::new(0.4, Tag::B), Outcome::new(1.0, Tag::A)];
        assert_eq!(
            log_likelihood(&aligned(1.0, 0.0), &outcomes, 0.0),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn log_likelihood_matches_density_sum_misaligned() {
        let scene = Scene::new(WavepacketSpec::gaussian(1.1).unwrap(), 0.8, 0.0, 0.35).unwrap();
        let batch = draw(&scene, 3, 200).unwrap();
        let direct: f64 = batch
            .outcomes
            .iter()
            .map(|o| crate::interference::joint_density(&scene.with_delta_x(1.2), *o).ln())
            .sum();
        let ll = log_likelihood(&scene, &batch.outcomes, 1.2);
        assert!((ll - direct).abs() < 1e-9 * direct.abs());
    }

    #[test]
    fn mle_is_consistent() {
        let scene = aligned(1.0, 2.0);
        let batch = draw(&scene, 12345, 100_000).unwrap();
        let res = mle(&batch, &MleOptions::default()).unwrap();
        let bound = crb(0.5, 100_000).unwrap().sqrt();
        assert!((res.estimate - 2.0).abs() < 3.0 * bound, "{}", res.estimate);
        assert!(res.converged);
        assert!(res.estimate >= res.bracket.0 && res.estimate <= res.bracket.1);
        assert_eq!(res.bracket, (0.0, 4.0));
    }

    #[test]
    fn mle_is_deterministic() {
        let batch = draw(&aligned(1.0, 0.7), 1, 3000).unwrap();
        let a = mle(&batch, &MleOptions::default()).unwrap();
        let b = mle(&batch, &MleOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flat_likelihood_still_converges() {
        let template = aligned(1.0, 0.0);
        let outcomes: Vec<Outcome> = (0..500)
            .map(|i| Outcome::new(1e-6 * (i as f64 - 250.0), Tag::B))
            .collect();
        let res = mle_outcomes(&template, &outcomes, &MleOptions::default()).unwrap();
        assert!(res.converged);
        assert!(res.estimate < 2.0 * 4.0 / 511.0);
    }

    #[test]
    fn all_impossible_candidates_is_an_error() {
        // An antibunching event at dk = 0 has zero probability for every Δx.
        let outcomes = [Outcome::new(0.0, Tag::A)];
        let err = mle_outcomes(&aligned(1.0, 1.0), &outcomes, &MleOptions::default());
        assert!(matches!(err, Err(Error::Estimation(_))));
    }

    #[test]
    fn likelihood_is_even_in_separation() {
        let batch = draw(&aligned(1.0, 1.3), 8, 500).unwrap();
        for &dx in &[0.2, 1.0, 2.7] {
            let a = log_likelihood(&batch.scene, &batch.outcomes, dx);
            let b = log_likelihood(&batch.scene, &batch.outcomes, -dx);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bucket_inversion() {
        let template = aligned(1.0, 0.0);
        let opts = MleOptions::default();
        let all_b = vec![Tag::B; 100];
        let res = mle_bucket(&all_b, &template, &opts).unwrap();
        assert_eq!(res.estimate, 0.0);
        assert!(res.converged);

        let p = 0.5 * (1.0 + (-1.0f64).exp());
        let dx = separation_from_bunching_fraction(1.0, p).unwrap();
        assert!((dx - 2.0).abs() < 1e-12);

        let half: Vec<Tag> = (0..100).map(|i| if i % 2 == 0 { Tag::A } else { Tag::B }).collect();
        let res = mle_bucket(&half, &template, &opts).unwrap();
        assert!(!res.converged);
        assert_eq!(res.estimate, res.bracket.1);

        assert!(mle_bucket(&[], &template, &opts).is_err());
        let misaligned = Scene::new(WavepacketSpec::gaussian(1.0).unwrap(), 0.0, 0.0, 0.1).unwrap();
        assert!(mle_bucket(&all_b, &misaligned, &opts).is_err());
    }

    #[test]
    fn bucket_counts_near_the_exact_fraction_invert_to_two() {
        // 683_940 of 1_000_000 is the nearest count to ½(1 + e⁻¹).
        let mut tags = vec![Tag::B; 683_940];
        tags.extend(vec![Tag::A; 1_000_000 - 683_940]);
        let res = mle_bucket(&tags, &aligned(1.0, 0.0), &MleOptions::default()).unwrap();
        assert!((res.estimate - 2.0).abs() < 1e-4, "{}", res.estimate);
    }

    #[test]
    fn tabulated_bucket_mle_agrees_with_gaussian_inversion() {
        let n = 64;
        let grid: Vec<f64> = (0..n).map(|i| -7.0 + 14.0 * i as f64 / (n - 1) as f64).collect();
        let amp = grid.iter().map(|k| (-k * k / 2.0).exp()).collect();
        let tab = Scene::aligned(WavepacketSpec::tabulated(grid, amp).unwrap(), 0.0, 0.0).unwrap();
        let mut tags = vec![Tag::B; 7000];
        tags.extend(vec![Tag::A; 3000]);
        let opts = MleOptions {
            grid_points: 64,
            ..MleOptions::default()
        };
        let tab_res = mle_bucket(&tags, &tab, &opts).unwrap();
        let gauss_res = mle_bucket(&tags, &aligned(1.0, 0.0), &opts).unwrap();
        assert!(tab_res.converged);
        assert!((tab_res.estimate - gauss_res.estimate).abs() < 1e-3);
    }

    #[test]
    fn bucket_mle_is_consistent_at_small_separation() {
        let scene = aligned(1.0, 0.25);
        let n = 200_000;
        let tags = crate::sampler::draw_bucket(&scene, 5, n).unwrap();
        let res = mle_bucket(&tags, &scene, &MleOptions::default()).unwrap();
        let info = fisher_bucket(&scene).unwrap();
        let sd = crb(info, n).unwrap().sqrt();
        assert!((res.estimate - 0.25).abs() < 4.0 * sd, "{} sd {sd}", res.estimate);
    }

    #[test]
    fn small_study_is_reproducible_and_sane() {
        let config = StudyConfig::new(aligned(1.0, 1.0), vec![200, 800], 40, 9);
        let a = run_study(&config).unwrap();
        let b = run_study(&config).unwrap();
        assert_eq!(a, b);
        for row in &a.rows {
            assert!(row.var_ratio.is_finite() && row.mean_ratio.is_finite());
            assert!((row.mean_ratio - 1.0).abs() < 0.1);
            assert!(row.var_ratio > 0.3 && row.var_ratio < 3.0, "{}", row.var_ratio);
        }
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("n,reps,var_ratio,mean_ratio\n200,40,"));
        let back: StudyReport = serde_json::from_str(&a.to_json().unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn study_is_independent_of_worker_count() {
        let config = StudyConfig::new(aligned(1.0, 0.8), vec![100], 16, 4);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_study(&config).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn study_validation() {
        let scene = aligned(1.0, 1.0);
        assert!(run_study(&StudyConfig::new(scene.clone(), vec![10], 1, 0)).is_err());
        assert!(run_study(&StudyConfig::new(scene.clone(), vec![0], 5, 0)).is_err());
        assert!(run_study(&StudyConfig::new(aligned(1.0, 0.0), vec![10], 5, 0)).is_err());
    }

    #[test]
    fn trial_failures_carry_the_index() {
        let mut config = StudyConfig::new(aligned(1.0, 1.0), vec![5], 3, 0);
        config.mle.grid_points = 1;
        match run_study(&config) {
            Err(Error::Trial { n: 5, rep: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bucket_study_runs() {
        let mut config = StudyConfig::new(aligned(1.0, 0.5), vec![2000], 50, 2);
        config.mode = StudyMode::Bucket;
        let report = run_study(&config).unwrap();
        assert!(report.information < 0.5 && report.information > 0.4);
        assert!((report.rows[0].mean_ratio - 1.0).abs() < 0.1);
    }
}
