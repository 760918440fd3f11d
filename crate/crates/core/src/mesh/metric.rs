use serde::{Deserialize, Serialize};

use super::TriMesh;
use crate::{Error, Result};

/// Intrinsic metric: one positive length per mesh edge, satisfying the
/// strict triangle inequality on every face.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMetric {
    lengths: Vec<f64>,
}

/// Real value per vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexField(Vec<f64>);

impl VertexField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self(values))
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, 0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self(self.0.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn sup_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check_len(&self, mesh: &TriMesh) -> Result<()> {
        if self.0.len() != mesh.n_vertices() {
            return Err(Error::SizeMismatch {
                what: "vertex values",
                expected: mesh.n_vertices(),
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for VertexField {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Angles, cotangents and area of one triangle given its three side lengths,
/// side `k` being opposite corner `k`.
#[derive(Clone, Copy, Debug)]
pub struct TriangleGeometry {
    pub lengths: [f64; 3],
    pub area: f64,
    pub angles: [f64; 3],
    pub cots: [f64; 3],
}

/// `Some(area)` when the strict triangle inequality holds.
pub fn triangle_area(l: [f64; 3]) -> Option<f64> {
    let mut s = l;
    s.sort_by(|a, b| b.total_cmp(a));
    let [a, b, c] = s;
    // Kahan's stable form of Heron's formula.
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if !(c - (a - b) > 0.0) || !(p > 0.0) || !p.is_finite() {
        return None;
    }
    Some(0.25 * p.sqrt())
}

impl TriangleGeometry {
    pub fn new(lengths: [f64; 3]) -> Option<Self> {
        let area = triangle_area(lengths)?;
        let mut angles = [0.0; 3];
        let mut cots = [0.0; 3];
        for k in 0..3 {
            let a = lengths[k];
            let b = lengths[(k + 1) % 3];
            let c = lengths[(k + 2) % 3];
            let num = b * b + c * c - a * a;
            angles[k] = (4.0 * area).atan2(num);
            cots[k] = num / (4.0 * area);
        }
        Some(Self {
            lengths,
            area,
            angles,
            cots,
        })
    }

    /// Planar layout: corner 0 at the origin, corner 1 on the positive x axis,
    /// corner 2 in the upper half plane.
    pub fn layout(&self) -> [[f64; 2]; 3] {
        let l01 = self.lengths[2];
        let l02 = self.lengths[1];
        let a0 = self.angles[0];
        [[0.0, 0.0], [l01, 0.0], [l02 * a0.cos(), l02 * a0.sin()]]
    }
}

impl DiscreteMetric {
    pub fn new(mesh: &TriMesh, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() != mesh.n_edges() {
            return Err(Error::SizeMismatch {
                what: "edge lengths",
                expected: mesh.n_edges(),
                got: lengths.len(),
            });
        }
        if let Some((edge, &length)) = lengths
            .iter()
            .enumerate()
            .find(|(_, l)| !(l.is_finite() && **l > 0.0))
        {
            return Err(Error::BadLength { edge, length });
        }
        let m = Self { lengths };
        for f in 0..mesh.n_faces() {
            let l = m.face_lengths(mesh, f);
            if triangle_area(l).is_none() {
                return Err(Error::TriangleInequality { face: f, lengths: l });
            }
        }
        Ok(m)
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn face_lengths(&self, mesh: &TriMesh, f: usize) -> [f64; 3] {
        let e = mesh.face_edges(f);
        [self.lengths[e[0]], self.lengths[e[1]], self.lengths[e[2]]]
    }

    pub fn face_geometry(&self, mesh: &TriMesh, f: usize) -> TriangleGeometry {
        TriangleGeometry::new(self.face_lengths(mesh, f))
            .expect("validated metric satisfies triangle inequalities")
    }

    pub fn face_area(&self, mesh: &TriMesh, f: usize) -> f64 {
        triangle_area(self.face_lengths(mesh, f)).expect("validated metric")
    }

    pub fn face_areas(&self, mesh: &TriMesh) -> Vec<f64> {
        (0..mesh.n_faces()).map(|f| self.face_area(mesh, f)).collect()
    }

    pub fn total_area(&self, mesh: &TriMesh) -> f64 {
        self.face_areas(mesh).iter().sum()
    }

    /// Uniform rescaling of all lengths by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            lengths: self.lengths.iter().map(|l| l * c).collect(),
        }
    }

    /// Count of faces with an obtuse corner.
    pub fn obtuse_faces(&self, mesh: &TriMesh) -> usize {
        (0..mesh.n_faces())
            .filter(|&f| self.face_geometry(mesh, f).cots.iter().any(|&c| c < 0.0))
            .count()
    }
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Edge lengths of the embedding.
pub fn induced_metric(mesh: &TriMesh) -> Result<DiscreteMetric> {
    let pos = mesh.positions().ok_or(Error::MissingEmbedding)?;
    let lengths: Vec<f64> = mesh
        .edges()
        .iter()
        .map(|&[a, b]| dist(pos[a], pos[b]))
        .collect();
    for (f, face) in mesh.faces().iter().enumerate() {
        let [p, q, r] = face.map(|v| pos[v]);
        let u = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
        let v = [r[0] - p[0], r[1] - p[1], r[2] - p[2]];
        let n = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let twice_area = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let scale = dist(p, q).max(dist(p, r)).powi(2);
        if !(twice_area > 1e-14 * scale) {
            return Err(Error::DegenerateFace { face: f });
        }
    }
    DiscreteMetric::new(mesh, lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn equilateral_geometry() {
        let g = TriangleGeometry::new([1.0; 3]).unwrap();
        assert_relative_eq!(g.area, 3f64.sqrt() / 4.0, epsilon = 1e-15);
        for k in 0..3 {
            assert_relative_eq!(g.angles[k], PI / 3.0, epsilon = 1e-15);
            assert_relative_eq!(g.cots[k], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        }
        let lay = g.layout();
        assert_relative_eq!(lay[2][0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(lay[2][1], 3f64.sqrt() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_triangles_have_no_area() {
        assert!(triangle_area([1.0, 1.0, 2.0]).is_none());
        assert!(triangle_area([1.0, 1.0, 2.5]).is_none());
        assert!(triangle_area([3.0, 4.0, 5.0]).is_some());
    }

    #[test]
    fn right_triangle_angles() {
        let g = TriangleGeometry::new([5.0, 4.0, 3.0]).unwrap();
        assert_relative_eq!(g.angles[0], PI / 2.0, epsilon = 1e-14);
        assert_relative_eq!(g.angles.iter().sum::<f64>(), PI, epsilon = 1e-14);
        assert_relative_eq!(g.area, 6.0, epsilon = 1e-14);
    }

    #[test]
    fn non_finite_field_rejected() {
        assert!(VertexField::new(vec![0.0, f64::NAN]).is_err());
    }
}
