//! Fisher information of the momentum-resolved and bucket measurements, and the
//! Cramér–Rao bound.
//!
//! With `a = dk Δx / 2` and `b = dk (x0 - x_s)` the per-`dk` integrands of the
//! information matrix over `(Δx, x_s)` are
//!
//! ```text
//! f11 = C dk²/4 · sin²a cos²b / D
//! f12 = -C dk²/8 · sin 2a sin 2b / D
//! f22 = C dk²   · cos²a sin²b / D,      D = 1 - cos²a cos²b = sin²a + cos²a sin²b
//! ```
//!
//! `D` vanishes only where `sin a = sin b = 0`; there the ratios are replaced by
//! their limits along `dk`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::Scene;
use crate::quadrature::Quadrature;
use crate::wavepacket::{sigma_k_of, WavepacketSpec};

/// Below this `σ_k |Δx|` the bucket information is replaced by its
/// small-separation limit.
pub const BUCKET_SMALL_SEPARATION: f64 = 1e-6;

/// 2×2 information matrix over `(Δx, x_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherMatrix {
    pub f11: f64,
    pub f12: f64,
    pub f22: f64,
    /// Absolute quadrature error estimates of `[f11, f12, f22]`.
    pub quad_error: [f64; 3],
}

impl FisherMatrix {
    pub fn determinant(&self) -> f64 {
        self.f11 * self.f22 - self.f12 * self.f12
    }
}

/// Ratios `(r11, r12, r22)` with `f11 = C dk²/4 · r11`, `f12 = -C dk²/2 · r12`
/// and `f22 = C dk² · r22`.
pub(crate) fn integrand_ratios(delta_k: f64, delta_x: f64, misalignment: f64) -> (f64, f64, f64) {
    let (sa, ca) = (delta_k * delta_x / 2.0).sin_cos();
    let (sb, cb) = (delta_k * misalignment).sin_cos();
    let d = sa * sa + ca * ca * sb * sb;
    if d > 0.0 {
        return (
            sa * sa * cb * cb / d,
            sa * ca * sb * cb / d,
            ca * ca * sb * sb / d,
        );
    }
    if misalignment == 0.0 {
        return (1.0, 0.0, 0.0);
    }
    let (u, v) = (delta_x / 2.0, misalignment);
    let l = u * u + v * v;
    (u * u / l, u * v / l, v * v / l)
}

fn matrix_quadrature() -> Quadrature {
    Quadrature {
        rel_tol: 1e-10,
        abs_tol: 1e-15,
        max_panels: 200_000,
    }
}

/// Information matrix of one momentum-resolved detection.
pub fn fisher_matrix(scene: &Scene) -> Result<FisherMatrix> {
    let env = scene.envelope();
    let dx = scene.delta_x();
    let m = if scene.is_aligned() {
        0.0
    } else {
        scene.misalignment()
    };
    let q = matrix_quadrature();

    let f11 = env.integrate_even(&q, |dk| dk * dk / 4.0 * integrand_ratios(dk, dx, m).0)?;
    if m == 0.0 {
        return Ok(FisherMatrix {
            f11: f11.value,
            f12: 0.0,
            f22: 0.0,
            quad_error: [f11.error, 0.0, 0.0],
        });
    }
    let f12 = env.integrate_even(&q, |dk| -dk * dk / 2.0 * integrand_ratios(dk, dx, m).1)?;
    let f22 = env.integrate_even(&q, |dk| dk * dk * integrand_ratios(dk, dx, m).2)?;
    Ok(FisherMatrix {
        f11: f11.value,
        f12: f12.value,
        f22: f22.value,
        quad_error: [f11.error, f12.error, f22.error],
    })
}

/// Information on `Δx` of an aligned momentum-resolved detection, `σ_k² / 2`.
///
/// At alignment the ratio in `f11` cancels to one, so the information reduces
/// to a quarter of the envelope's second moment regardless of `Δx`.
pub fn fisher_aligned(spec: &WavepacketSpec) -> f64 {
    let s = sigma_k_of(spec);
    0.5 * s * s
}

/// Information on `Δx` of one bucket-detector event:
/// `(∫ C dk sin(dk Δx/2))² / (4 (1 - c²))` with `c = ∫ C cos(dk Δx/2)`.
pub fn fisher_bucket(scene: &Scene) -> Result<f64> {
    scene.require_aligned()?;
    let env = scene.envelope();
    let dx = scene.delta_x();
    if env.sigma_k() * dx.abs() < BUCKET_SMALL_SEPARATION {
        return Ok(0.25 * env.second_moment());
    }
    let q = Quadrature {
        rel_tol: 1e-12,
        abs_tol: 1e-15 * env.second_moment(),
        max_panels: 200_000,
    };
    // Both integrals are divided by their leading power of Δx so that they stay
    // O(σ_k²) and the tolerances remain relative at small separations.
    let slope = env
        .integrate_even(&q, |dk| dk * (dk * dx / 2.0).sin() / dx)?
        .value;
    // (1 - c) / Δx², computed directly to avoid cancellation.
    let curvature = env
        .integrate_even(&q, |dk| 2.0 * ((dk * dx / 4.0).sin() / dx).powi(2))?
        .value;
    if curvature <= 0.0 {
        return Ok(0.25 * env.second_moment());
    }
    let one_plus_c = 2.0 - curvature * dx * dx;
    Ok(slope * slope / (4.0 * curvature * one_plus_c))
}

/// Cramér–Rao bound `1 / (n F)` on the variance of an unbiased estimator.
/// Zero information yields an infinite bound.
pub fn crb(information: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("Cramér–Rao bound needs n >= 1".into()));
    }
    if information.is_nan() || information < 0.0 || information.is_infinite() {
        return Err(Error::InvalidArgument(format!(
            "information must be finite and non-negative, got {information}"
        )));
    }
    if information == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (n as f64 * information))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::build_envelope;

    fn gaussian(sigma_k: f64, dx: f64, m: f64) -> Scene {
        Scene::new(WavepacketSpec::gaussian(sigma_k).unwrap(), dx, 0.0, m).unwrap()
    }

    /// Midpoint sum of the printed integrands with the raw `1 - cos²a cos²b`
    /// denominator on an offset grid.
    fn riemann_oracle(sigma_k: f64, dx: f64, m: f64) -> [f64; 3] {
        let env = build_envelope(&WavepacketSpec::gaussian(sigma_k).unwrap()).unwrap();
        let b = env.support_halfwidth();
        let n = 400_000;
        let h = 2.0 * b / n as f64;
        let mut acc = [0.0; 3];
        for i in 0..n {
            let dk = -b + (i as f64 + 0.5) * h;
            let c = env.density(dk);
            let ca = (dk * dx / 2.0).cos();
            let cb = (dk * m).cos();
            let denom = 1.0 - ca * ca * cb * cb;
            acc[0] += c * dk * dk / 4.0 * (dk * dx / 2.0).sin().powi(2) * cb * cb / denom;
            acc[1] -= c * dk * dk / 8.0 * (dk * dx).sin() * (2.0 * dk * m).sin() / denom;
            acc[2] += c * dk * dk * ca * ca * (dk * m).sin().powi(2) / denom;
        }
        acc.map(|v| v * h)
    }

    #[test]
    fn aligned_gaussian_matrix_is_diagonal() {
        for &dx in &[0.0, 0.3, 1.0, 4.0, 11.0] {
            let f = fisher_matrix(&gaussian(1.0, dx, 0.0)).unwrap();
            assert!((f.f11 - 0.5).abs() < 1e-9, "dx {dx}: {}", f.f11);
            assert_eq!(f.f12, 0.0);
            assert_eq!(f.f22, 0.0);
        }
    }

    #[test]
    fn matches_riemann_oracle_misaligned() {
        let f = fisher_matrix(&gaussian(1.0, 1.0, 0.5)).unwrap();
        let oracle = riemann_oracle(1.0, 1.0, 0.5);
        assert!((f.f11 - oracle[0]).abs() < 1e-6, "{} vs {}", f.f11, oracle[0]);
        assert!((f.f12 - oracle[1]).abs() < 1e-6, "{} vs {}", f.f12, oracle[1]);
        assert!((f.f22 - oracle[2]).abs() < 1e-6, "{} vs {}", f.f22, oracle[2]);
        assert!(f.quad_error.iter().zip([f.f11, f.f12, f.f22]).all(|(e, v)| *e <= 1e-8 * v.abs().max(1e-7)));
    }

    #[test]
    fn matches_riemann_oracle_generic() {
        let f = fisher_matrix(&gaussian(1.4, 0.37, -1.1)).unwrap();
        let oracle = riemann_oracle(1.4, 0.37, -1.1);
        for (got, want) in [f.f11, f.f12, f.f22].into_iter().zip(oracle) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn zero_separation_carries_no_information_when_misaligned() {
        let f = fisher_matrix(&gaussian(1.0, 0.0, 0.8)).unwrap();
        assert_eq!(f.f11, 0.0);
        assert!(f.f22 > 0.0);
    }

    #[test]
    fn removable_singularity_limits() {
        // Commensurate a = b: D vanishes at dk = 2πj.
        let dk = 2.0 * std::f64::consts::PI;
        let (r11, r12, r22) = integrand_ratios(dk, 1.0, 0.5);
        assert!(r11.is_finite() && r12.is_finite() && r22.is_finite());
        let (l11, l12, l22) = integrand_ratios(0.0, 1.0, 0.5);
        assert!((l11 - 0.5).abs() < 1e-15 && (l12 - 0.5).abs() < 1e-15 && (l22 - 0.5).abs() < 1e-15);
        let near = integrand_ratios(1e-7, 1.0, 0.5);
        assert!((near.0 - l11).abs() < 1e-9);
        assert_eq!(integrand_ratios(0.0, 0.0, 0.0), (1.0, 0.0, 0.0));
        assert_eq!(integrand_ratios(3.0, 2.0 * std::f64::consts::PI / 3.0 * 2.0, 0.0).0, 1.0);
    }

    #[test]
    fn aligned_general_path_equals_analytic_path() {
        let spec = WavepacketSpec::gaussian(1.0).unwrap();
        for &dx in &[0.1, 1.0, 5.0] {
            let f = fisher_matrix(&Scene::aligned(spec.clone(), dx, 0.2).unwrap()).unwrap();
            assert!((f.f11 - fisher_aligned(&spec)).abs() < 1e-8 * 0.5);
        }
    }

    #[test]
    fn fisher_aligned_scales_quadratically() {
        assert_eq!(fisher_aligned(&WavepacketSpec::gaussian(1.0).unwrap()), 0.5);
        assert_eq!(fisher_aligned(&WavepacketSpec::gaussian(2.0).unwrap()), 2.0);
    }

    #[test]
    fn bucket_information() {
        let s = gaussian(1.0, 0.0, 0.0);
        assert_eq!(fisher_bucket(&s).unwrap(), 0.5);
        let tiny = fisher_bucket(&gaussian(1.0, 5e-4, 0.0)).unwrap();
        assert!((tiny - 0.5).abs() < 5e-4, "{tiny}");
        let far = fisher_bucket(&gaussian(1.0, 10.0, 0.0)).unwrap();
        assert!(far < 0.05, "{far}");
        assert!(fisher_bucket(&gaussian(1.0, 1.0, 0.3)).is_err());
    }

    #[test]
    fn bucket_information_matches_gaussian_closed_form() {
        // F = σ_k² u / (e^{2u} - 1), u = σ_k² Δx² / 4.
        for &(s, dx) in &[(1.0, 0.01), (1.0, 0.5), (1.0, 2.0), (2.0, 1.3), (0.7, 6.0)] {
            let u: f64 = s * s * dx * dx / 4.0;
            let exact = s * s * u / (2.0 * u).exp_m1();
            let got = fisher_bucket(&gaussian(s, dx, 0.0)).unwrap();
            assert!((got - exact).abs() <= 1e-8 * exact.max(1e-12), "{s} {dx}: {got} vs {exact}");
        }
    }

    #[test]
    fn bucket_never_exceeds_resolved() {
        let spec = WavepacketSpec::gaussian(1.0).unwrap();
        let full = fisher_aligned(&spec);
        for i in 0..=60 {
            let dx = 0.1 * i as f64;
            assert!(fisher_bucket(&gaussian(1.0, dx, 0.0)).unwrap() <= full);
        }
    }

    #[test]
    fn cramer_rao_bound() {
        assert!((crb(0.5, 2000).unwrap() - 1e-3).abs() < 1e-18);
        assert_eq!(crb(0.5, 1).unwrap(), 2.0);
        assert_eq!(crb(0.5, 4000).unwrap() * 2.0, crb(0.5, 2000).unwrap());
        assert_eq!(crb(0.0, 10).unwrap(), f64::INFINITY);
        assert!(crb(0.5, 0).is_err());
        assert!(crb(-1.0, 3).is_err());
    }
}
