use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{DiscreteMetric, TriMesh, VertexField};
use crate::{Error, Result};

/// Angle defect and barycentric dual area per vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureField {
    pub defect: Vec<f64>,
    pub dual_area: Vec<f64>,
}

impl CurvatureField {
    /// Pointwise curvature `defect / dual_area`.
    pub fn pointwise(&self) -> Vec<f64> {
        self.defect
            .iter()
            .zip(&self.dual_area)
            .map(|(k, a)| k / a)
            .collect()
    }

    pub fn total_defect(&self) -> f64 {
        self.defect.iter().sum()
    }

    /// Per-face curvature: mean of the pointwise values at the three corners.
    pub fn face_average(&self, mesh: &TriMesh) -> Vec<f64> {
        let k = self.pointwise();
        mesh.faces()
            .iter()
            .map(|f| (k[f[0]] + k[f[1]] + k[f[2]]) / 3.0)
            .collect()
    }

    pub fn max_pointwise(&self) -> f64 {
        self.pointwise().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_pointwise(&self) -> f64 {
        self.pointwise().into_iter().fold(f64::INFINITY, f64::min)
    }
}

pub fn vertex_curvature(mesh: &TriMesh, metric: &DiscreteMetric) -> CurvatureField {
    let n = mesh.n_vertices();
    let mut defect = vec![2.0 * PI; n];
    let mut dual_area = vec![0.0; n];
    for (f, face) in mesh.faces().iter().enumerate() {
        let g = metric.face_geometry(mesh, f);
        for k in 0..3 {
            defect[face[k]] -= g.angles[k];
            dual_area[face[k]] += g.area / 3.0;
        }
    }
    CurvatureField { defect, dual_area }
}

/// `sum_v f_v * dual_area_v`
pub fn integrate_vertex(mesh: &TriMesh, metric: &DiscreteMetric, f: &VertexField) -> Result<f64> {
    f.check_len(mesh)?;
    let mut dual = vec![0.0; mesh.n_vertices()];
    for (fi, face) in mesh.faces().iter().enumerate() {
        let a = metric.face_area(mesh, fi) / 3.0;
        for &v in face {
            dual[v] += a;
        }
    }
    Ok(f.values().iter().zip(&dual).map(|(x, a)| x * a).sum())
}

/// `sum_F f_F * area_F`
pub fn integrate_face(mesh: &TriMesh, metric: &DiscreteMetric, f: &[f64]) -> Result<f64> {
    if f.len() != mesh.n_faces() {
        return Err(Error::SizeMismatch {
            what: "face values",
            expected: mesh.n_faces(),
            got: f.len(),
        });
    }
    Ok(f.iter()
        .enumerate()
        .map(|(fi, x)| x * metric.face_area(mesh, fi))
        .sum())
}

/// Cotangent edge weights `w_ij = (cot a_ij + cot b_ij) / 2`.
pub fn cotan_weights(mesh: &TriMesh, metric: &DiscreteMetric) -> Vec<f64> {
    let mut w = vec![0.0; mesh.n_edges()];
    for f in 0..mesh.n_faces() {
        let g = metric.face_geometry(mesh, f);
        let fe = mesh.face_edges(f);
        for k in 0..3 {
            w[fe[k]] += 0.5 * g.cots[k];
        }
    }
    w
}

/// Discrete Dirichlet energy `int |d omega|^2`.
pub fn dirichlet_energy(mesh: &TriMesh, metric: &DiscreteMetric, omega: &VertexField) -> Result<f64> {
    omega.check_len(mesh)?;
    let w = cotan_weights(mesh, metric);
    let negative = w.iter().filter(|&&x| x < 0.0).count();
    if negative > 0 {
        log::debug!("dirichlet_energy: {negative} negative cotangent weights");
    }
    let u = omega.values();
    Ok(mesh
        .edges()
        .iter()
        .zip(&w)
        .map(|(&[i, j], w)| w * (u[i] - u[j]).powi(2))
        .sum())
}

/// Discrete vertex scaling `l'_ij = exp((w_i + w_j) / 2) l_ij`, the
/// realization of `h -> exp(2 omega) h`.
pub fn conformal_scale(
    mesh: &TriMesh,
    metric: &DiscreteMetric,
    omega: &VertexField,
) -> Result<DiscreteMetric> {
    omega.check_len(mesh)?;
    let u = omega.values();
    let lengths = mesh
        .edges()
        .iter()
        .zip(metric.lengths())
        .map(|(&[i, j], l)| (0.5 * (u[i] + u[j])).exp() * l)
        .collect();
    DiscreteMetric::new(mesh, lengths)
}

/// Splits `omega = c + omega_perp` with `int omega_perp = 0`.
pub fn hodge_split(
    mesh: &TriMesh,
    metric: &DiscreteMetric,
    omega: &VertexField,
) -> Result<(f64, VertexField)> {
    let area = metric.total_area(mesh);
    let c = integrate_vertex(mesh, metric, omega)? / area;
    Ok((c, omega.map(|v| v - c)))
}
