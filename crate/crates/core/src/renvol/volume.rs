//! Volume of the compact core and the Krasnov–Schlenker functional.

use std::f64::consts::PI;

use crate::bundle::SurfaceBundle;
use crate::foliation::{mean_curvature_density, DensityForm, End};

/// `Vol([-t, t] x Sigma)` from the closed-form antiderivatives of
/// `cosh^2`, `sinh^2` and `cosh sinh` (the last is odd and drops out).
pub fn compact_volume(bundle: &SurfaceBundle, t: f64) -> f64 {
    let t = t.abs();
    let half_sinh = 0.5 * (2.0 * t).sinh();
    let cosh2 = t + half_sinh;
    let sinh2 = half_sinh - t;
    bundle
        .shape
        .entries
        .iter()
        .zip(bundle.face_areas())
        .map(|(a, area)| area * (cosh2 + a.det() * sinh2))
        .sum()
}

/// `int H^t dg_t` over one leaf.
pub fn mean_curvature_integral(bundle: &SurfaceBundle, end: End, t: f64) -> f64 {
    mean_curvature_density(bundle, end, t, DensityForm::DetA)
        .iter()
        .zip(bundle.face_areas())
        .map(|(h, a)| h * a)
        .sum()
}

/// `Vol(K_t) - 1/4 int_{dK_t} H dg + t pi chi(Sigma)`, where the boundary has
/// two components so `chi(Sigma) = 2 chi(mesh)`.
pub fn vol_ks(bundle: &SurfaceBundle, t: f64) -> f64 {
    let chi_total = 2.0 * bundle.chi() as f64;
    let h: f64 = End::BOTH.iter().map(|&e| mean_curvature_integral(bundle, e, t)).sum();
    compact_volume(bundle, t) - 0.25 * h + t * PI * chi_total
}

/// Values of `vol_ks` on a grid together with their spread.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KsSweep {
    pub t: Vec<f64>,
    pub vol_ks: Vec<f64>,
    pub spread: f64,
}

pub fn vol_ks_sweep(bundle: &SurfaceBundle, grid: &[f64]) -> KsSweep {
    let vol: Vec<f64> = grid.iter().map(|&t| vol_ks(bundle, t)).collect();
    let hi = vol.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = vol.iter().copied().fold(f64::INFINITY, f64::min);
    KsSweep {
        t: grid.to_vec(),
        spread: if vol.is_empty() { 0.0 } else { hi - lo },
        vol_ks: vol,
    }
}

#[cfg(test)]
mod tests {
    use std::num::NonZeroUsize;

    use approx::assert_relative_eq;
    use gauss_quad::GaussLegendre;

    use super::*;
    use crate::foliation::area_density;
    use crate::testkit;

    fn leaf_area(bundle: &SurfaceBundle, x: f64) -> f64 {
        let end = if x >= 0.0 { End::Plus } else { End::Minus };
        area_density(bundle, end, x.abs(), DensityForm::DetA)
            .iter()
            .zip(bundle.face_areas())
            .map(|(d, a)| d * a)
            .sum()
    }

    #[test]
    fn fuchsian_compact_volume_closed_form() {
        let b = testkit::fuchsian();
        let area = b.g0.total_area(&b.mesh);
        assert_eq!(compact_volume(b, 0.0), 0.0);
        assert_relative_eq!(compact_volume(b, 1.0), area * (1.0 + 0.5 * 2f64.sinh()), max_relative = 1e-14);
        assert_relative_eq!(compact_volume(b, 1.0), 4.0 * std::f64::consts::PI * (1.0 + 0.5 * 2f64.sinh()), max_relative = 1e-7);
    }

    #[test]
    fn compact_volume_matches_quadrature_of_leaf_areas() {
        let b = testkit::half();
        let rule = GaussLegendre::new(NonZeroUsize::new(40).unwrap());
        for &t in &[0.5, 1.5, 3.0] {
            // Split at 0 where the integrand switches ends.
            let q: f64 = rule.integrate(-t, 0.0, |x| leaf_area(b, x)) + rule.integrate(0.0, t, |x| leaf_area(b, x));
            assert_relative_eq!(compact_volume(b, t), q, max_relative = 1e-12);
        }
    }

    #[test]
    fn compact_volume_is_monotone_and_even() {
        let b = testkit::half();
        let mut prev = 0.0;
        for i in 1..12 {
            let v = compact_volume(b, 0.25 * i as f64);
            assert!(v > prev);
            prev = v;
        }
        assert_eq!(compact_volume(b, -1.3), compact_volume(b, 1.3));
    }

    #[test]
    fn ks_functional_reduces_to_gauss_residual() {
        // vol_ks(t) = t * int (det A - 1 - kappa0) dg0 identically in t.
        let b = testkit::half();
        let g: f64 = b.gauss_residual.iter().zip(b.face_areas()).map(|(r, a)| r * a).sum();
        for &t in &[0.0, 1.0, 2.0, 3.0] {
            let v = vol_ks(b, t);
            assert!((v - t * g).abs() <= 1e-9 * (1.0 + (2.0 * t).exp()), "t = {t}: {v} vs {}", t * g);
        }
        let sweep = vol_ks_sweep(b, &[0.0, 1.5, 3.0]);
        assert!(sweep.spread <= 1e-6 * (1.0 + 6f64.exp()));
        assert_eq!(vol_ks_sweep(b, &[]).spread, 0.0);
    }
}
