//! Outcome distribution of the two-photon interferometer.
//!
//! A reference photon centred at `x0` meets, on a balanced beam splitter, a
//! photon emitted by one of two incoherent sources at `x1 = x_s + Δx/2` and
//! `x2 = x_s - Δx/2`. Each detected pair yields the momentum difference
//! `dk = k - k'` and whether both photons reached the same camera (bunching,
//! `B`) or opposite cameras (antibunching, `A`):
//!
//! ```text
//! P(dk, X) = ½ C(dk) [1 + α(X) cos(dk Δx / 2) cos(dk (x0 - x_s))],  α(B) = 1, α(A) = -1
//! ```

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::wavepacket::{Envelope, WavepacketSpec};

/// Which output ports fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    /// Antibunching: opposite cameras.
    A,
    /// Bunching: same camera.
    B,
}

impl Tag {
    /// Interference sign `α(X)`.
    pub fn alpha(self) -> f64 {
        match self {
            Tag::A => -1.0,
            Tag::B => 1.0,
        }
    }

    pub const BOTH: [Tag; 2] = [Tag::A, Tag::B];
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::A => "A",
            Tag::B => "B",
        })
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Tag::A),
            "B" | "b" => Ok(Tag::B),
            other => Err(Error::InvalidArgument(format!("unknown tag `{other}`"))),
        }
    }
}

/// One detected photon pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub delta_k: f64,
    pub tag: Tag,
}

impl Outcome {
    pub fn new(delta_k: f64, tag: Tag) -> Self {
        Self { delta_k, tag }
    }
}

/// Physical configuration: source separation, centroid, reference position and
/// the shared wavepacket.
#[derive(Debug, Clone)]
pub struct Scene {
    delta_x: f64,
    centroid: f64,
    x0: f64,
    envelope: Arc<Envelope>,
}

/// Plain-data description of a scene, used in metadata and snapshots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneParams {
    pub delta_x: f64,
    pub centroid: f64,
    pub x0: f64,
    pub sigma_k: f64,
    pub wavepacket: String,
}

impl Scene {
    pub fn new(spec: WavepacketSpec, delta_x: f64, centroid: f64, x0: f64) -> Result<Self> {
        Self::with_envelope(Arc::new(Envelope::new(spec)?), delta_x, centroid, x0)
    }

    /// Aligned scene (`x0 = centroid`).
    pub fn aligned(spec: WavepacketSpec, delta_x: f64, centroid: f64) -> Result<Self> {
        Self::new(spec, delta_x, centroid, centroid)
    }

    /// Scene from the two source positions.
    pub fn from_sources(spec: WavepacketSpec, x1: f64, x2: f64, x0: f64) -> Result<Self> {
        Self::new(spec, x1 - x2, 0.5 * (x1 + x2), x0)
    }

    pub fn with_envelope(
        envelope: Arc<Envelope>,
        delta_x: f64,
        centroid: f64,
        x0: f64,
    ) -> Result<Self> {
        for (name, v) in [("delta_x", delta_x), ("centroid", centroid), ("x0", x0)] {
            if !v.is_finite() {
                return Err(Error::InvalidScene(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self {
            delta_x,
            centroid,
            x0,
            envelope,
        })
    }

    /// Same configuration with a different separation.
    pub fn with_delta_x(&self, delta_x: f64) -> Self {
        Self {
            delta_x,
            ..self.clone()
        }
    }

    pub fn delta_x(&self) -> f64 {
        self.delta_x
    }

    pub fn centroid(&self) -> f64 {
        self.centroid
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// `m = x0 - x_s`.
    pub fn misalignment(&self) -> f64 {
        self.x0 - self.centroid
    }

    pub fn is_aligned(&self) -> bool {
        self.misalignment().abs() <= 1e-12 * (1.0 + self.centroid.abs().max(self.x0.abs()))
    }

    pub fn require_aligned(&self) -> Result<()> {
        if self.is_aligned() {
            Ok(())
        } else {
            Err(Error::Misaligned {
                misalignment: self.misalignment(),
            })
        }
    }

    /// `(x1, x2)`.
    pub fn source_positions(&self) -> (f64, f64) {
        (
            self.centroid + 0.5 * self.delta_x,
            self.centroid - 0.5 * self.delta_x,
        )
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    pub fn envelope_arc(&self) -> &Arc<Envelope> {
        &self.envelope
    }

    pub fn spec(&self) -> &WavepacketSpec {
        self.envelope.spec()
    }

    pub fn params(&self) -> SceneParams {
        SceneParams {
            delta_x: self.delta_x,
            centroid: self.centroid,
            x0: self.x0,
            sigma_k: self.envelope.sigma_k(),
            wavepacket: match self.spec() {
                WavepacketSpec::Gaussian(_) => "gaussian".into(),
                WavepacketSpec::Tabulated(_) => "tabulated".into(),
            },
        }
    }
}

/// Far-field detection geometry: `k = y K0 / d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorGeometry {
    k0: f64,
    d: f64,
}

impl DetectorGeometry {
    pub fn new(k0: f64, d: f64) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0 && d.is_finite() && d > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "detector geometry needs k0 > 0 and d > 0, got k0 = {k0}, d = {d}"
            )));
        }
        Ok(Self { k0, d })
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

/// Transverse momentum read from a pixel position.
pub fn momentum_from_pixel(geometry: &DetectorGeometry, y: f64) -> f64 {
    y * geometry.k0 / geometry.d
}

/// Conditional bunching probability `p(B | dk)`.
pub fn bunching_probability(scene: &Scene, delta_k: f64) -> f64 {
    if scene.misalignment() == 0.0 {
        (delta_k * scene.delta_x / 4.0).cos().powi(2)
    } else {
        0.5 * (1.0
            + (delta_k * scene.delta_x / 2.0).cos() * (delta_k * scene.misalignment()).cos())
    }
}

/// Joint density of one detection event for an arbitrary scene.
pub fn joint_density(scene: &Scene, outcome: Outcome) -> f64 {
    let dk = outcome.delta_k;
    let beat = (dk * scene.delta_x / 2.0).cos() * (dk * scene.misalignment()).cos();
    0.5 * scene.envelope.density(dk) * (1.0 + outcome.tag.alpha() * beat)
}

/// Joint density for an aligned scene, with the misalignment factor removed.
pub fn aligned_density(scene: &Scene, outcome: Outcome) -> Result<f64> {
    scene.require_aligned()?;
    let c = scene.envelope.density(outcome.delta_k);
    let half = outcome.delta_k * scene.delta_x / 4.0;
    Ok(match outcome.tag {
        Tag::B => c * half.cos().powi(2),
        Tag::A => c * half.sin().powi(2),
    })
}

/// Probability of a bunching or antibunching click with non-resolving
/// detectors.
pub fn bucket_probability(scene: &Scene, tag: Tag) -> Result<f64> {
    scene.require_aligned()?;
    let env = scene.envelope();
    let dx = scene.delta_x;
    let p_a = if env.is_gaussian() {
        let s = env.sigma_k();
        -0.5 * (-s * s * dx * dx / 4.0).exp_m1()
    } else {
        // P(A) = ∫ C sin²(dk Δx / 4), free of the 1 - cos cancellation.
        env.integrate_even(&Quadrature::default(), |dk| (dk * dx / 4.0).sin().powi(2))?
            .value
            .clamp(0.0, 1.0)
    };
    Ok(match tag {
        Tag::A => p_a,
        Tag::B => 1.0 - p_a,
    })
}

/// Settings of the brute-force marginalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub quadrature: Quadrature,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            quadrature: Quadrature {
                rel_tol: 1e-10,
                abs_tol: 1e-14,
                max_panels: 200_000,
            },
        }
    }
}

/// Joint density recomputed from the per-momentum-pair probabilities
/// `P(k, k', X) = ½ |φ(k)|² |φ(k')|² [1 + α(X) ½ (cos(dk (x0 - x1)) + cos(dk (x0 - x2)))]`
/// by numerically integrating out `K = (k + k') / 2`. Independent of the
/// envelope and of the product form of the closed expression.
pub fn oracle_density(scene: &Scene, outcome: Outcome, settings: &OracleSettings) -> Result<f64> {
    let spec = scene.spec();
    let dk = outcome.delta_k;
    let (x1, x2) = scene.source_positions();
    let (dx1, dx2) = (scene.x0 - x1, scene.x0 - x2);
    let alpha = outcome.tag.alpha();

    let pair = |k: f64, kp: f64| {
        let beat = 0.5 * (((k - kp) * dx1).cos() + ((k - kp) * dx2).cos());
        0.5 * spec.intensity(k) * spec.intensity(kp) * (1.0 + alpha * beat)
    };

    let (lo, hi) = spec.momentum_support();
    let (k_lo, k_hi) = (lo + 0.5 * dk.abs(), hi - 0.5 * dk.abs());
    if k_hi <= k_lo {
        return Ok(0.0);
    }
    let mut points = vec![k_lo, k_hi];
    if let WavepacketSpec::Tabulated(t) = spec {
        // Interpolation kinks of both factors.
        for &g in t.grid() {
            for shifted in [g - 0.5 * dk, g + 0.5 * dk] {
                if shifted > k_lo && shifted < k_hi {
                    points.push(shifted);
                }
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
    }
    let est = settings
        .quadrature
        .integrate_with_breakpoints(|big_k| pair(big_k + 0.5 * dk, big_k - 0.5 * dk), &points)?;
    Ok(est.value)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn scene() -> impl Strategy<Value = Scene> {
        (0.3f64..3.0, -6.0f64..6.0, -2.0f64..2.0, -2.0f64..2.0).prop_map(|(s, dx, xs, m)| {
            Scene::new(WavepacketSpec::gaussian(s).unwrap(), dx, xs, xs + m).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn even_in_delta_k(s in scene(), dk in -10.0f64..10.0) {
            for tag in Tag::BOTH {
                let a = joint_density(&s, Outcome::new(dk, tag));
                let b = joint_density(&s, Outcome::new(-dk, tag));
                prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
                prop_assert!(a >= 0.0);
            }
        }

        #[test]
        fn invariant_under_source_exchange(s in scene(), dk in -10.0f64..10.0) {
            let swapped = s.with_delta_x(-s.delta_x());
            for tag in Tag::BOTH {
                let o = Outcome::new(dk, tag);
                prop_assert_eq!(joint_density(&s, o), joint_density(&swapped, o));
            }
        }
    }
}
