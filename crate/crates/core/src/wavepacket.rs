//! Photon wavepackets in momentum space and the envelope of the momentum
//! difference they induce.
//!
//! The envelope is the autocorrelation of the momentum intensity,
//! `C(dk) = ∫ dK |φ(K + dk/2)|² |φ(K - dk/2)|²`, which is the marginal density of
//! the detected momentum difference. For a Gaussian intensity of standard
//! deviation `σ_k` it is the normal density with variance `2σ_k²`.
//!
//! Tabulated intensities are interpreted with the trapezoid rule: the samples
//! define a discrete measure whose exact autocorrelation is taken at the native
//! lag spacing and interpolated between lags with a local cubic.

use std::io::Read;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{Error, Result};
use crate::quadrature::{Estimate, Quadrature};

/// Tail mass left outside the truncation bound.
pub const TRUNCATION_MASS: f64 = 1e-10;
/// Largest uniform grid the direct O(n²) correlation is run on.
pub const MAX_CORRELATION_POINTS: usize = 8192;
/// Minimum number of samples in a tabulated intensity.
pub const MIN_TABLE_POINTS: usize = 16;
/// Knots of the inverse-CDF table used to sample tabulated envelopes.
pub const INVERSE_CDF_KNOTS: usize = 8192;

const UNIFORM_GRID_RTOL: f64 = 1e-9;

/// Gaussian momentum intensity `|φ(k)|²` with standard deviation `sigma_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    sigma_k: f64,
}

impl GaussianPacket {
    pub fn sigma_k(&self) -> f64 {
        self.sigma_k
    }
}

/// Sampled momentum intensity, normalized to unit trapezoid mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPacket {
    grid: Vec<f64>,
    amplitude_sq: Vec<f64>,
}

impl TabulatedPacket {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn amplitude_sq(&self) -> &[f64] {
        &self.amplitude_sq
    }

    fn trapezoid_moment(&self, power: i32) -> f64 {
        trapezoid(&self.grid, |i| self.grid[i].powi(power) * self.amplitude_sq[i])
    }
}

/// Common momentum-space wavepacket of the three photons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub enum WavepacketSpec {
    Gaussian(GaussianPacket),
    Tabulated(TabulatedPacket),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SpecRepr {
    Gaussian { sigma_k: f64 },
    Tabulated { grid: Vec<f64>, amplitude_sq: Vec<f64> },
}

impl TryFrom<SpecRepr> for WavepacketSpec {
    type Error = Error;

    fn try_from(repr: SpecRepr) -> Result<Self> {
        match repr {
            SpecRepr::Gaussian { sigma_k } => Self::gaussian(sigma_k),
            SpecRepr::Tabulated { grid, amplitude_sq } => Self::tabulated(grid, amplitude_sq),
        }
    }
}

impl From<WavepacketSpec> for SpecRepr {
    fn from(spec: WavepacketSpec) -> Self {
        match spec {
            WavepacketSpec::Gaussian(g) => SpecRepr::Gaussian { sigma_k: g.sigma_k },
            WavepacketSpec::Tabulated(t) => SpecRepr::Tabulated {
                grid: t.grid,
                amplitude_sq: t.amplitude_sq,
            },
        }
    }
}

fn trapezoid(grid: &[f64], value: impl Fn(usize) -> f64) -> f64 {
    grid.windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (w[1] - w[0]) * (value(i) + value(i + 1)))
        .sum()
}

impl WavepacketSpec {
    pub fn gaussian(sigma_k: f64) -> Result<Self> {
        if !(sigma_k.is_finite() && sigma_k > 0.0) {
            return Err(Error::InvalidWavepacket(format!(
                "sigma_k must be finite and positive, got {sigma_k}"
            )));
        }
        Ok(Self::Gaussian(GaussianPacket { sigma_k }))
    }

    /// Builds a tabulated intensity, renormalizing it to unit trapezoid mass.
    pub fn tabulated(grid: Vec<f64>, amplitude_sq: Vec<f64>) -> Result<Self> {
        if grid.len() != amplitude_sq.len() {
            return Err(Error::InvalidWavepacket(format!(
                "grid has {} points but amplitude_sq has {}",
                grid.len(),
                amplitude_sq.len()
            )));
        }
        if grid.len() < MIN_TABLE_POINTS {
            return Err(Error::InvalidWavepacket(format!(
                "tabulated wavepacket needs at least {MIN_TABLE_POINTS} points, got {}",
                grid.len()
            )));
        }
        if grid.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidWavepacket("grid contains non-finite momenta".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidWavepacket("grid must be strictly increasing".into()));
        }
        if amplitude_sq.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidWavepacket(
                "amplitude_sq values must be finite and non-negative".into(),
            ));
        }
        let mass = trapezoid(&grid, |i| amplitude_sq[i]);
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidWavepacket(
                "amplitude_sq is not normalizable (zero mass)".into(),
            ));
        }
        let amplitude_sq = amplitude_sq.into_iter().map(|a| a / mass).collect();
        Ok(Self::Tabulated(TabulatedPacket { grid, amplitude_sq }))
    }

    /// Reads a two-column `k, amplitude_sq` CSV with a header row.
    /// Lines starting with `#` are ignored.
    pub fn from_csv_reader<R: Read>(reader: R) -> std::result::Result<Self, CsvLoadError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut grid = Vec::new();
        let mut amp = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(CsvLoadError::Format(format!(
                    "record {}: expected 2 columns, found {}",
                    line + 1,
                    record.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| {
                    CsvLoadError::Format(format!("record {}: `{s}`: {e}", line + 1))
                })
            };
            grid.push(parse(&record[0])?);
            amp.push(parse(&record[1])?);
        }
        Ok(Self::tabulated(grid, amp)?)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_reader(file).map_err(|e| match e {
            CsvLoadError::Csv(source) => Error::Csv {
                path: path.to_path_buf(),
                source,
            },
            CsvLoadError::Format(msg) => {
                Error::InvalidWavepacket(format!("{}: {msg}", path.display()))
            }
            CsvLoadError::Spec(err) => err,
        })
    }

    /// Standard deviation of the momentum intensity.
    pub fn sigma_k(&self) -> f64 {
        sigma_k_of(self)
    }

    /// Momentum intensity `|φ(k)|²` as a continuous function. Tabulated values
    /// are interpolated with a local cubic on uniform grids and linearly
    /// otherwise; zero outside the table.
    pub fn intensity(&self, k: f64) -> f64 {
        match self {
            Self::Gaussian(g) => {
                let s = g.sigma_k;
                (-k * k / (2.0 * s * s)).exp() / ((2.0 * std::f64::consts::PI).sqrt() * s)
            }
            Self::Tabulated(t) => t.interpolate(k),
        }
    }

    /// Momentum range carrying the intensity.
    pub fn momentum_support(&self) -> (f64, f64) {
        match self {
            Self::Gaussian(g) => (-12.0 * g.sigma_k, 12.0 * g.sigma_k),
            Self::Tabulated(t) => (t.grid[0], t.grid[t.grid.len() - 1]),
        }
    }
}

impl TabulatedPacket {
    fn interpolate(&self, k: f64) -> f64 {
        let n = self.grid.len();
        let (lo, hi) = (self.grid[0], self.grid[n - 1]);
        if !(k >= lo && k <= hi) {
            return 0.0;
        }
        let seg = self.grid.partition_point(|&g| g <= k).clamp(1, n - 1) - 1;
        let h = (hi - lo) / (n - 1) as f64;
        let uniform = self
            .grid
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= UNIFORM_GRID_RTOL * h);
        if !uniform {
            let (k0, k1) = (self.grid[seg], self.grid[seg + 1]);
            let w = (k - k0) / (k1 - k0);
            return self.amplitude_sq[seg] * (1.0 - w) + self.amplitude_sq[seg + 1] * w;
        }
        // Four-point Lagrange stencil kept inside the table.
        let start = seg.saturating_sub(1).min(n - 4);
        let x = (k - self.grid[start]) / h;
        let mut acc = 0.0;
        for i in 0..4 {
            let mut basis = 1.0;
            for j in 0..4 {
                if i != j {
                    basis *= (x - j as f64) / (i as f64 - j as f64);
                }
            }
            acc += basis * self.amplitude_sq[start + i];
        }
        acc.max(0.0)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CsvLoadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Spec(#[from] Error),
}

/// Momentum standard deviation of a wavepacket.
pub fn sigma_k_of(spec: &WavepacketSpec) -> f64 {
    match spec {
        WavepacketSpec::Gaussian(g) => g.sigma_k,
        WavepacketSpec::Tabulated(t) => {
            let mean = t.trapezoid_moment(1);
            let second = t.trapezoid_moment(2);
            (second - mean * mean).max(0.0).sqrt()
        }
    }
}

/// Exact discrete autocorrelation of a tabulated intensity, stored as one
/// cubic per lag interval `[j h, (j + 1) h]` in the local coordinate `t`.
#[derive(Debug, Clone)]
struct LagTable {
    spacing: f64,
    cubics: Vec<[f64; 4]>,
    // Integral of C over each lag interval.
    masses: Vec<f64>,
    knots: Vec<f64>,
    knot_cdf: Vec<f64>,
}

impl LagTable {
    fn max_lag(&self) -> f64 {
        self.spacing * self.cubics.len() as f64
    }

    fn density(&self, dk: f64) -> f64 {
        let s = dk.abs() / self.spacing;
        let j = s.floor();
        if j as usize >= self.cubics.len() || !s.is_finite() {
            return 0.0;
        }
        let t = s - j;
        let [a0, a1, a2, a3] = self.cubics[j as usize];
        (a0 + t * (a1 + t * (a2 + t * a3))).max(0.0)
    }

    /// Integral of C over `[0, x]` for `x >= 0`.
    fn half_cdf(&self, x: f64) -> f64 {
        let s = x / self.spacing;
        let j = s.floor() as usize;
        if j >= self.cubics.len() {
            return self.masses.iter().sum();
        }
        let t = s - j as f64;
        let [a0, a1, a2, a3] = self.cubics[j];
        let partial = self.spacing * t * (a0 + t * (a1 / 2.0 + t * (a2 / 3.0 + t * a3 / 4.0)));
        self.masses[..j].iter().sum::<f64>() + partial
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Gaussian { sigma_k: f64 },
    Tabulated(LagTable),
}

/// Marginal density of the momentum difference with its moments and
/// truncation bound. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Envelope {
    spec: WavepacketSpec,
    sigma_k: f64,
    second_moment: f64,
    support_halfwidth: f64,
    shape: Shape,
}

/// Builds the envelope of a wavepacket.
pub fn build_envelope(spec: &WavepacketSpec) -> Result<Envelope> {
    Envelope::new(spec.clone())
}

impl Envelope {
    pub fn new(spec: WavepacketSpec) -> Result<Self> {
        match &spec {
            WavepacketSpec::Gaussian(g) => {
                let sigma_k = g.sigma_k;
                Ok(Self {
                    sigma_k,
                    second_moment: 2.0 * sigma_k * sigma_k,
                    support_halfwidth: 2.0 * sigma_k * erfc_inv(TRUNCATION_MASS),
                    shape: Shape::Gaussian { sigma_k },
                    spec,
                })
            }
            WavepacketSpec::Tabulated(t) => {
                let sigma_k = sigma_k_of(&spec);
                let table = correlate(t)?;
                let second_moment = second_moment(&table);
                let support_halfwidth = truncation_bound(&table);
                let table = with_inverse_cdf(table, support_halfwidth);
                Ok(Self {
                    sigma_k,
                    second_moment,
                    support_halfwidth,
                    shape: Shape::Tabulated(table),
                    spec,
                })
            }
        }
    }

    pub fn spec(&self) -> &WavepacketSpec {
        &self.spec
    }

    /// Standard deviation of the single-photon momentum intensity.
    pub fn sigma_k(&self) -> f64 {
        self.sigma_k
    }

    /// Position-space width `σ_x = 1 / (2 σ_k)`.
    pub fn sigma_x(&self) -> f64 {
        0.5 / self.sigma_k
    }

    /// `⟨dk²⟩` under the envelope.
    pub fn second_moment(&self) -> f64 {
        self.second_moment
    }

    pub fn support_halfwidth(&self) -> f64 {
        self.support_halfwidth
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.shape, Shape::Gaussian { .. })
    }

    /// `C(dk)`, a probability density in `dk` (units of length).
    pub fn density(&self, dk: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { sigma_k } => {
                let var = 2.0 * sigma_k * sigma_k;
                (-dk * dk / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
            }
            Shape::Tabulated(table) => table.density(dk),
        }
    }

    /// Cumulative distribution of the envelope.
    pub fn cdf(&self, dk: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { sigma_k } => 0.5 * erfc(-dk / (2.0 * sigma_k)),
            Shape::Tabulated(table) => {
                let half = table.half_cdf(dk.abs());
                if dk >= 0.0 {
                    0.5 + half
                } else {
                    0.5 - half
                }
            }
        }
    }

    /// Inverse of [`Envelope::cdf`]; tabulated envelopes use the
    /// linearly interpolated inverse-CDF table.
    pub fn quantile(&self, p: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { sigma_k } => Normal::new(0.0, std::f64::consts::SQRT_2 * sigma_k)
                .expect("positive sigma")
                .inverse_cdf(p),
            Shape::Tabulated(table) => interpolate_inverse(&table.knots, &table.knot_cdf, p),
        }
    }

    /// Draws one momentum difference from the envelope.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.shape {
            Shape::Gaussian { sigma_k } => {
                let z: f64 = StandardNormal.sample(rng);
                std::f64::consts::SQRT_2 * sigma_k * z
            }
            Shape::Tabulated(table) => {
                let u: f64 = rng.random();
                interpolate_inverse(&table.knots, &table.knot_cdf, u)
            }
        }
    }

    /// Panel boundaries on `[0, support_halfwidth]` for quadrature. Tabulated
    /// envelopes are piecewise cubic, so panels sit on the lag nodes.
    pub fn half_breakpoints(&self) -> Vec<f64> {
        let b = self.support_halfwidth;
        match &self.shape {
            // The sampling cutoff drops ~4e-9 of the second moment, so integrals
            // of the closed form run out to where the tail is below rounding.
            Shape::Gaussian { sigma_k } => {
                let b = b.max(12.0 * sigma_k);
                (0..=24).map(|i| b * i as f64 / 24.0).collect()
            }
            Shape::Tabulated(table) => {
                let nodes = (b / table.spacing).round() as usize;
                let mut points: Vec<f64> =
                    (0..=nodes).map(|j| j as f64 * table.spacing).collect();
                if let Some(last) = points.last_mut() {
                    *last = b;
                }
                points
            }
        }
    }

    /// `∫ C(dk) g(dk) d(dk)` over the truncated support for an even `g`.
    pub fn integrate_even<G: Fn(f64) -> f64>(
        &self,
        quadrature: &Quadrature,
        g: G,
    ) -> Result<Estimate> {
        let est = quadrature
            .integrate_with_breakpoints(|dk| self.density(dk) * g(dk), &self.half_breakpoints())?;
        Ok(Estimate {
            value: 2.0 * est.value,
            error: 2.0 * est.error,
            evaluations: est.evaluations,
        })
    }
}

fn interpolate_inverse(knots: &[f64], cdf: &[f64], p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let idx = cdf.partition_point(|&c| c <= p);
    if idx == 0 {
        return knots[0];
    }
    if idx >= cdf.len() {
        return knots[knots.len() - 1];
    }
    let (c0, c1) = (cdf[idx - 1], cdf[idx]);
    let (x0, x1) = (knots[idx - 1], knots[idx]);
    if c1 > c0 {
        x0 + (x1 - x0) * (p - c0) / (c1 - c0)
    } else {
        x0
    }
}

/// Returns `(grid, values)` on a uniform grid no larger than
/// [`MAX_CORRELATION_POINTS`].
fn uniform_table(t: &TabulatedPacket) -> (f64, f64, Vec<f64>) {
    let n = t.grid.len();
    let lo = t.grid[0];
    let hi = t.grid[n - 1];
    let h = (hi - lo) / (n - 1) as f64;
    let uniform = t
        .grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= UNIFORM_GRID_RTOL * h);
    if uniform && n <= MAX_CORRELATION_POINTS {
        return (lo, h, t.amplitude_sq.clone());
    }
    let m = if uniform {
        MAX_CORRELATION_POINTS
    } else {
        (4 * n).min(MAX_CORRELATION_POINTS)
    };
    let step = (hi - lo) / (m - 1) as f64;
    let mut values = Vec::with_capacity(m);
    let mut seg = 0;
    for i in 0..m {
        let k = if i == m - 1 { hi } else { lo + step * i as f64 };
        while seg + 2 < n && t.grid[seg + 1] < k {
            seg += 1;
        }
        let (k0, k1) = (t.grid[seg], t.grid[seg + 1]);
        let w = ((k - k0) / (k1 - k0)).clamp(0.0, 1.0);
        values.push(t.amplitude_sq[seg] * (1.0 - w) + t.amplitude_sq[seg + 1] * w);
    }
    (lo, step, values)
}

fn correlate(t: &TabulatedPacket) -> Result<LagTable> {
    let (_, h, values) = uniform_table(t);
    let m = values.len();
    // Trapezoid weights turn the samples into a discrete measure of unit mass.
    let mut mass: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| if i == 0 || i == m - 1 { 0.5 * v * h } else { v * h })
        .collect();
    let total: f64 = mass.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::InvalidWavepacket(
            "amplitude_sq is not normalizable (zero mass)".into(),
        ));
    }
    mass.iter_mut().for_each(|w| *w /= total);

    // Lag nodes 0..m-1, padded with one zero node past the end.
    let mut nodes = vec![0.0; m + 1];
    for (j, node) in nodes.iter_mut().enumerate().take(m) {
        let acc: f64 = mass[..m - j]
            .iter()
            .zip(&mass[j..])
            .map(|(a, b)| a * b)
            .sum();
        *node = acc / h;
    }
    let node = |j: isize| -> f64 { nodes[j.unsigned_abs().min(m)] };

    let intervals = m - 1;
    let mut cubics = Vec::with_capacity(intervals);
    for j in 0..intervals as isize {
        let (p, q, r, s) = (node(j - 1), node(j), node(j + 1), node(j + 2));
        cubics.push([
            q,
            -p / 3.0 - q / 2.0 + r - s / 6.0,
            p / 2.0 - q + r / 2.0,
            -p / 6.0 + q / 2.0 - r / 2.0 + s / 6.0,
        ]);
    }
    let cubic_mass = |c: &[f64; 4]| h * (c[0] + c[1] / 2.0 + c[2] / 3.0 + c[3] / 4.0);
    let norm = 2.0 * cubics.iter().map(cubic_mass).sum::<f64>();
    for c in cubics.iter_mut() {
        c.iter_mut().for_each(|a| *a /= norm);
    }
    let masses = cubics.iter().map(cubic_mass).collect();
    Ok(LagTable {
        spacing: h,
        cubics,
        masses,
        knots: Vec::new(),
        knot_cdf: Vec::new(),
    })
}

fn second_moment(table: &LagTable) -> f64 {
    // ∫_0^1 (j + t)² P(t) dt, exact for the cubic pieces.
    let h = table.spacing;
    let moment = |k: i32, c: &[f64; 4]| -> f64 {
        c.iter()
            .enumerate()
            .map(|(i, a)| a / (i as i32 + k + 1) as f64)
            .sum()
    };
    let total: f64 = table
        .cubics
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let j = j as f64;
            j * j * moment(0, c) + 2.0 * j * moment(1, c) + moment(2, c)
        })
        .sum();
    2.0 * h * h * h * total
}

fn truncation_bound(table: &LagTable) -> f64 {
    let target = 0.5 * (1.0 - TRUNCATION_MASS);
    let mut acc = 0.0;
    for (j, m) in table.masses.iter().enumerate() {
        acc += m;
        if acc >= target {
            return (j + 1) as f64 * table.spacing;
        }
    }
    table.max_lag()
}

fn with_inverse_cdf(mut table: LagTable, bound: f64) -> LagTable {
    let n = INVERSE_CDF_KNOTS;
    let knots: Vec<f64> = (0..n)
        .map(|i| -bound + 2.0 * bound * i as f64 / (n - 1) as f64)
        .collect();
    let raw: Vec<f64> = knots
        .iter()
        .map(|&x| {
            let half = table.half_cdf(x.abs());
            if x >= 0.0 {
                0.5 + half
            } else {
                0.5 - half
            }
        })
        .collect();
    let (lo, hi) = (raw[0], raw[n - 1]);
    let mut cdf: Vec<f64> = raw.iter().map(|c| (c - lo) / (hi - lo)).collect();
    // Enforce monotonicity against rounding in the cumulative sums.
    for i in 1..n {
        if cdf[i] < cdf[i - 1] {
            cdf[i] = cdf[i - 1];
        }
    }
    cdf[n - 1] = 1.0;
    table.knots = knots;
    table.knot_cdf = cdf;
    table
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_tables_give_normalized_symmetric_envelopes(
            values in prop::collection::vec(0.0f64..1.0, 16..96),
            lo in -5.0f64..0.0,
            width in 0.5f64..8.0,
            dk in 0.0f64..10.0,
        ) {
            prop_assume!(values.iter().sum::<f64>() > 1e-3);
            let n = values.len();
            let grid: Vec<f64> = (0..n).map(|i| lo + width * i as f64 / (n - 1) as f64).collect();
            let spec = WavepacketSpec::tabulated(grid, values).unwrap();
            let env = build_envelope(&spec).unwrap();
            let mass = env.integrate_even(&Quadrature::default(), |_| 1.0).unwrap().value;
            prop_assert!((mass - 1.0).abs() < 1e-8, "mass {}", mass);
            prop_assert!((env.density(dk) - env.density(-dk)).abs() <= 1e-10);
            prop_assert!(env.density(dk) >= 0.0);
        }
    }
}
