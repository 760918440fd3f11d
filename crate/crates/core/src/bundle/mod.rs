//! Discrete almost-Fuchsian data: a closed surface with metric `g0` and a
//! shape operator `A` tied to it by the Gauss equation `det A = kappa0 + 1`.

mod generate;
mod io;
mod shape;

use std::path::PathBuf;
#[cfg(test)]
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use generate::{make_almost_fuchsian, make_fuchsian, smooth_line_field, Band, LambdaRecipe, LineField};
pub use io::{load_bundle, save_bundle, BundleFile};
pub use shape::{ShapeField, Sym2};

use crate::mesh::{vertex_curvature, DiscreteMetric, TriMesh};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleKind {
    Fuchsian,
    AlmostFuchsian,
    Custom,
}

impl std::fmt::Display for BundleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Fuchsian => "fuchsian",
            Self::AlmostFuchsian => "almost_fuchsian",
            Self::Custom => "custom",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BundleMeta {
    pub amplitude: Option<f64>,
    pub gauss_tol: f64,
    pub solver_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<LambdaRecipe>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceBundle {
    pub mesh: TriMesh,
    pub mesh_path: Option<PathBuf>,
    pub g0: DiscreteMetric,
    pub shape: ShapeField,
    /// Per-face curvature of `g0` (mean of the corner values).
    pub kappa0: Vec<f64>,
    /// `det A - (kappa0 + 1)` per face.
    pub gauss_residual: Vec<f64>,
    /// Per-edge Codazzi proxy; diagnostic only.
    pub codazzi_residual: Vec<f64>,
    pub kind: BundleKind,
    pub meta: BundleMeta,
}

impl SurfaceBundle {
    /// Assembles a bundle and its derived fields. No tolerance is enforced
    /// here; see [`SurfaceBundle::validate`].
    pub fn new(
        mesh: TriMesh,
        g0: DiscreteMetric,
        shape: ShapeField,
        kind: BundleKind,
        meta: BundleMeta,
    ) -> Result<Self> {
        if shape.len() != mesh.n_faces() || shape.frames.len() != mesh.n_faces() {
            return Err(Error::SizeMismatch {
                what: "shape entries",
                expected: mesh.n_faces(),
                got: shape.len(),
            });
        }
        for (f, fr) in shape.frames.iter().enumerate() {
            if ((fr[0] * fr[0] + fr[1] * fr[1]).sqrt() - 1.0).abs() > 1e-9 {
                return Err(Error::Shape {
                    face: f,
                    reason: format!("frame vector {fr:?} is not unit length"),
                });
            }
        }
        let kappa0 = vertex_curvature(&mesh, &g0).face_average(&mesh);
        let mut b = Self {
            mesh,
            mesh_path: None,
            g0,
            shape,
            kappa0,
            gauss_residual: Vec::new(),
            codazzi_residual: Vec::new(),
            kind,
            meta,
        };
        b.gauss_residual = gauss_residual(&b);
        b.codazzi_residual = codazzi_residual(&b);
        Ok(b)
    }

    pub fn chi(&self) -> i64 {
        self.mesh.euler_characteristic()
    }

    pub fn gauss_residual_sup(&self) -> f64 {
        sup_abs(&self.gauss_residual)
    }

    pub fn codazzi_residual_sup(&self) -> f64 {
        sup_abs(&self.codazzi_residual)
    }

    pub fn face_areas(&self) -> Vec<f64> {
        self.g0.face_areas(&self.mesh)
    }

    /// Checks the generator invariants: negative Euler characteristic,
    /// principal curvatures in (-1, 1), and the Gauss equation to `gauss_tol`.
    pub fn validate(&self, gauss_tol: f64) -> Result<()> {
        let chi = self.chi();
        if chi >= 0 {
            return Err(Error::NonHyperbolic { chi });
        }
        for (f, s) in self.shape.entries.iter().enumerate() {
            let (l1, l2) = s.eigenvalues();
            if !(l1.abs() < 1.0 && l2.abs() < 1.0) {
                return Err(Error::Shape {
                    face: f,
                    reason: format!("principal curvatures ({l1}, {l2}) leave (-1, 1)"),
                });
            }
        }
        let residual = self.gauss_residual_sup();
        if !(residual <= gauss_tol) {
            return Err(Error::GaussResidual {
                residual,
                tol: gauss_tol,
            });
        }
        Ok(())
    }

    pub fn is_minimal(&self) -> bool {
        self.shape.entries.iter().all(|s| s.trace() == 0.0)
    }
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `det A - (kappa0 + 1)` per face.
pub fn gauss_residual(bundle: &SurfaceBundle) -> Vec<f64> {
    bundle
        .shape
        .entries
        .iter()
        .zip(&bundle.kappa0)
        .map(|(s, k)| s.det() - (k + 1.0))
        .collect()
}

/// For every edge, the jump of `II(t, t)` across it, `t` the unit edge
/// vector expressed in each adjacent face's layout.
pub fn codazzi_residual(bundle: &SurfaceBundle) -> Vec<f64> {
    let mesh = &bundle.mesh;
    let layouts: Vec<[[f64; 2]; 3]> = (0..mesh.n_faces())
        .map(|f| bundle.g0.face_geometry(mesh, f).layout())
        .collect();
    let unit_edge = |f: usize, a: usize, b: usize| {
        let face = mesh.faces()[f];
        let ia = face.iter().position(|&v| v == a).expect("edge vertex in face");
        let ib = face.iter().position(|&v| v == b).expect("edge vertex in face");
        let (p, q) = (layouts[f][ia], layouts[f][ib]);
        let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
        let n = (dx * dx + dy * dy).sqrt();
        [dx / n, dy / n]
    };
    mesh.edges()
        .iter()
        .enumerate()
        .map(|(e, &[a, b])| {
            let [f1, f2] = mesh.edge_faces(e);
            let ii1 = bundle.shape.layout(f1).quad(unit_edge(f1, a, b));
            let ii2 = bundle.shape.layout(f2).quad(unit_edge(f2, a, b));
            ii1 - ii2
        })
        .collect()
}

/// Per-face eigenvalues `(l1, l2)`, `l1 >= l2`.
pub fn principal_curvatures(bundle: &SurfaceBundle) -> Vec<(f64, f64)> {
    bundle.shape.entries.iter().map(Sym2::eigenvalues).collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_relative_eq;

    use super::*;
    use crate::testkit;

    #[test]
    fn fuchsian_has_area_four_pi_and_no_shape() {
        let b = testkit::fuchsian();
        assert_relative_eq!(b.g0.total_area(&b.mesh), 4.0 * PI, max_relative = 1e-7);
        assert!(b.is_minimal());
        assert_eq!(b.shape.max_abs_eigenvalue(), 0.0);
        assert!(b.gauss_residual_sup() <= 1e-6);
        assert_eq!(b.codazzi_residual_sup(), 0.0);
        assert_eq!(b.chi(), -2);
    }

    #[test]
    fn zero_amplitude_reduces_to_fuchsian() {
        let b = testkit::almost(0.0);
        let f = testkit::fuchsian();
        let dl = b
            .g0
            .lengths()
            .iter()
            .zip(f.g0.lengths())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(dl <= 1e-8, "edge lengths differ by {dl}");
        assert_eq!(b.shape.max_abs_eigenvalue(), 0.0);
    }

    #[test]
    fn half_amplitude_bundle_is_admissible() {
        let b = testkit::half();
        b.validate(1e-6).unwrap();
        let (lo, hi) = b
            .kappa0
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| (lo.min(k), hi.max(k)));
        assert!(lo >= -1.25 - 1e-6 && hi <= -1.0 + 1e-6, "kappa0 in [{lo}, {hi}]");
        let top = principal_curvatures(b).iter().fold(0.0f64, |m, p| m.max(p.0));
        assert!((top - 0.5).abs() <= 1e-3, "sup lambda = {top}");
        for s in &b.shape.entries {
            assert!(s.trace().abs() < 1e-14);
        }
        let gb: f64 = b.kappa0.iter().zip(b.face_areas()).map(|(k, a)| k * a).sum();
        assert_relative_eq!(gb, -4.0 * PI, max_relative = 1e-6);
    }

    #[test]
    fn identity_shape_residual_is_minus_kappa() {
        let f = testkit::fuchsian();
        let n = f.mesh.n_faces();
        let shape = ShapeField {
            entries: vec![Sym2::diag(1.0, 1.0); n],
            frames: vec![[1.0, 0.0]; n],
        };
        let b = SurfaceBundle::new(f.mesh.clone(), f.g0.clone(), shape, BundleKind::Custom, BundleMeta::default()).unwrap();
        for (r, k) in b.gauss_residual.iter().zip(&b.kappa0) {
            assert!((r + k).abs() < 1e-15);
        }
        // II = g0 is parallel, so its edge jumps vanish up to layout rounding
        assert!(b.codazzi_residual_sup() < 1e-12);
        assert!(matches!(b.validate(1e-6), Err(Error::Shape { .. })));
    }

    #[test]
    fn rejects_bad_frames_and_sizes() {
        let f = testkit::fuchsian();
        let n = f.mesh.n_faces();
        let short = ShapeField::zeros(n - 1);
        assert!(matches!(
            SurfaceBundle::new(f.mesh.clone(), f.g0.clone(), short, BundleKind::Custom, BundleMeta::default()),
            Err(Error::SizeMismatch { .. })
        ));
        let mut bad = ShapeField::zeros(n);
        bad.frames[3] = [2.0, 0.0];
        assert!(matches!(
            SurfaceBundle::new(f.mesh.clone(), f.g0.clone(), bad, BundleKind::Custom, BundleMeta::default()),
            Err(Error::Shape { face: 3, .. })
        ));
    }

    #[test]
    fn json_round_trip_is_bit_identical() {
        let b = testkit::half();
        let dir = tempfile::tempdir().unwrap();
        let mesh_path = dir.path().join("g.off");
        crate::mesh::io::save_off(&b.mesh, &mesh_path).unwrap();
        let path = dir.path().join("b.json");
        save_bundle(b, Path::new("g.off"), &path).unwrap();
        let back = load_bundle(&path).unwrap();
        assert_eq!(back.g0.lengths(), b.g0.lengths());
        assert_eq!(back.shape, b.shape);
        assert_eq!(back.kappa0, b.kappa0);
        assert_eq!(back.meta, b.meta);
        assert_eq!(back.kind, BundleKind::AlmostFuchsian);
    }

    #[test]
    fn recipe_rejects_out_of_range_amplitude() {
        assert!(LambdaRecipe::new(1.0).validate().is_err());
        assert!(LambdaRecipe::new(-0.1).validate().is_err());
        assert!(LambdaRecipe::new(0.9).validate().is_ok());
    }
}
