//! Change of `Vol_R` under conformal change of the boundary metric.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::mesh::{conformal_scale, dirichlet_energy, vertex_curvature, DiscreteMetric, TriMesh, VertexField};
use crate::{Error, Result};

/// `-1/4 (int |d omega|^2_h + 2 int kappa_h omega dh)`, so that
/// `Vol_R(e^{2 omega} h) = Vol_R(h) + shift`.
pub fn conformal_volume_shift(mesh: &TriMesh, h: &DiscreteMetric, omega: &VertexField) -> Result<f64> {
    let energy = dirichlet_energy(mesh, h, omega)?;
    let k = vertex_curvature(mesh, h);
    let linear: f64 = k.defect.iter().zip(omega.values()).map(|(d, w)| d * w).sum();
    Ok(-0.25 * (energy + 2.0 * linear))
}

/// `-1/2 int_0^1 sum_v K_v(e^{2 s omega} h) omega_v ds` with `K_v` the angle
/// defect. The defect is the gradient of a potential in the log scale
/// factors, so this version composes exactly:
/// `shift_h(a) + shift_{e^{2a}h}(b) = shift_h(a + b)`.
/// It agrees with [`conformal_volume_shift`] to second order in `omega`.
pub fn conformal_volume_shift_path(
    mesh: &TriMesh,
    h: &DiscreteMetric,
    omega: &VertexField,
    nodes: usize,
) -> Result<f64> {
    let degree = NonZeroUsize::new(nodes)
        .ok_or_else(|| Error::InvalidArgument("quadrature needs at least one node".into()))?;
    let rule = GaussLegendre::new(degree);
    let mut total = 0.0;
    for &(x, w) in rule.iter() {
        let s = 0.5 * (x + 1.0);
        let scaled = conformal_scale(mesh, h, &omega.map(|v| s * v))?;
        let k = vertex_curvature(mesh, &scaled);
        let dot: f64 = k.defect.iter().zip(omega.values()).map(|(d, v)| d * v).sum();
        total += 0.5 * w * dot;
    }
    Ok(-0.5 * total)
}

/// `Vol_R(c^2 h) - Vol_R(h) = -pi chi ln c`.
pub fn dilation_shift(chi: i64, c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "dilation factor must be positive, got {c}"
        )));
    }
    Ok(-PI * chi as f64 * c.ln())
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::foliation::{boundary_metric, End};
    use crate::testkit;

    fn smooth_field(mesh: &TriMesh, eps: f64) -> VertexField {
        let pos = mesh.positions().unwrap();
        VertexField::new(pos.iter().map(|p| eps * (p[0] * 0.7).sin() * (1.0 + 0.3 * p[1])).collect()).unwrap()
    }

    #[test]
    fn constant_scaling_is_exact_dilation() {
        let b = testkit::half();
        let h = boundary_metric(b, End::Plus).unwrap().metric;
        for c in [0.5, 1.0, 2.0, std::f64::consts::E] {
            let w = VertexField::constant(b.mesh.n_vertices(), c.ln());
            let want = dilation_shift(b.chi(), c).unwrap();
            assert!((conformal_volume_shift(&b.mesh, &h, &w).unwrap() - want).abs() <= 1e-9);
            assert!((conformal_volume_shift_path(&b.mesh, &h, &w, 4).unwrap() - want).abs() <= 1e-9);
        }
    }

    #[test]
    fn dilation_rejects_nonpositive_factor() {
        assert!(dilation_shift(-2, 0.0).is_err());
        assert!(dilation_shift(-2, -1.0).is_err());
        assert!(dilation_shift(-2, f64::INFINITY).is_err());
        assert_eq!(dilation_shift(-2, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn path_shift_is_a_cocycle() {
        let b = testkit::half();
        let h = boundary_metric(b, End::Minus).unwrap().metric;
        let a = smooth_field(&b.mesh, 0.2);
        let c = a.map(|x| -0.5 * x + 0.05);
        let ha = conformal_scale(&b.mesh, &h, &a).unwrap();
        let lhs = conformal_volume_shift_path(&b.mesh, &h, &a, 16).unwrap()
            + conformal_volume_shift_path(&b.mesh, &ha, &c, 16).unwrap();
        let rhs = conformal_volume_shift_path(&b.mesh, &h, &a.zip_with(&c, |x, y| x + y), 16).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-11);
    }

    #[test]
    fn quadratic_and_path_forms_agree_to_second_order() {
        let b = testkit::fuchsian();
        let h = boundary_metric(b, End::Plus).unwrap().metric;
        let gap = |eps: f64| {
            let w = smooth_field(&b.mesh, eps);
            conformal_volume_shift(&b.mesh, &h, &w).unwrap() - conformal_volume_shift_path(&b.mesh, &h, &w, 16).unwrap()
        };
        let (g1, g2) = (gap(0.02).abs(), gap(0.01).abs());
        // third order: halving eps cuts the gap by about 8
        assert!(g2 < g1 / 6.0, "gaps {g1} {g2}");
        assert!(conformal_volume_shift_path(&b.mesh, &h, &smooth_field(&b.mesh, 0.1), 0).is_err());
    }
}
