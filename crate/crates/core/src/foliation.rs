//! Equidistant foliation `g = dt^2 + g0((cosh t + A sinh t)^2 ., .)` around
//! the minimal surface, evaluated face by face.
//!
//! Every routine takes the end (`Plus` uses `A`, `Minus` uses `-A`) and the
//! distance `t` into that end.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::bundle::{SurfaceBundle, Sym2};
use crate::mesh::{vertex_curvature, CurvatureField, DiscreteMetric};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum End {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl End {
    pub const BOTH: [End; 2] = [End::Plus, End::Minus];

    pub fn sign(self) -> f64 {
        match self {
            End::Plus => 1.0,
            End::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for End {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            End::Plus => "+",
            End::Minus => "-",
        })
    }
}

/// Which quantity stands in for `kappa0 + 1` in the densities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DensityForm {
    /// `det A`, exact on the stored shape operator.
    #[default]
    DetA,
    /// `kappa0 + 1` from the metric curvature.
    Kappa,
}

/// Per-face trace and determinant of the end's shape operator.
fn trace_det(bundle: &SurfaceBundle, end: End, form: DensityForm) -> impl Iterator<Item = (f64, f64)> + '_ {
    let s = end.sign();
    bundle
        .shape
        .entries
        .iter()
        .zip(&bundle.kappa0)
        .map(move |(a, k)| {
            let d = match form {
                DensityForm::DetA => a.det(),
                DensityForm::Kappa => k + 1.0,
            };
            (s * a.trace(), d)
        })
}

/// `dg_t / dg0 = cosh^2 t + det A sinh^2 t + H0 cosh t sinh t` per face.
pub fn area_density(bundle: &SurfaceBundle, end: End, t: f64, form: DensityForm) -> Vec<f64> {
    let (c, s) = (t.cosh(), t.sinh());
    trace_det(bundle, end, form)
        .map(|(h, d)| c * c + d * s * s + h * c * s)
        .collect()
}

/// `A_t = (cosh t + A sinh t)^{-1} (sinh t + A cosh t)` per face, in the
/// stored frame.
pub fn shape_operator_t(bundle: &SurfaceBundle, end: End, t: f64) -> Result<Vec<Matrix2<f64>>> {
    let (c, s) = (t.cosh(), t.sinh());
    let id = Matrix2::identity();
    bundle
        .shape
        .entries
        .iter()
        .enumerate()
        .map(|(f, a)| {
            let a = a.matrix() * end.sign();
            let lhs = id * c + a * s;
            let inv = lhs.try_inverse().filter(|m| m.iter().all(|x| x.is_finite()));
            match inv {
                Some(inv) if lhs.determinant().abs() > 1e-300 => Ok(inv * (id * s + a * c)),
                _ => Err(Error::Shape {
                    face: f,
                    reason: format!("cosh t + A sinh t is singular at t = {t}"),
                }),
            }
        })
        .collect()
}

/// `H^t dg_t / dg0 = cosh(2t) H0 + sinh(2t) (det A + 1)` per face.
pub fn mean_curvature_density(bundle: &SurfaceBundle, end: End, t: f64, form: DensityForm) -> Vec<f64> {
    let (c2, s2) = ((2.0 * t).cosh(), (2.0 * t).sinh());
    trace_det(bundle, end, form)
        .map(|(h, d)| c2 * h + s2 * (d + 1.0))
        .collect()
}

/// Leaf curvature `det A_t - 1` per face.
pub fn leaf_curvature(bundle: &SurfaceBundle, end: End, t: f64) -> Result<Vec<f64>> {
    Ok(shape_operator_t(bundle, end, t)?
        .iter()
        .map(|m| m.determinant() - 1.0)
        .collect())
}

/// Everything known about one leaf.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoliationSample {
    pub t: f64,
    pub end: End,
    pub area_density: Vec<f64>,
    pub h_t: Vec<f64>,
    pub det_at: Vec<f64>,
    pub kappa_gt: Vec<f64>,
}

pub fn sample(bundle: &SurfaceBundle, end: End, t: f64) -> Result<FoliationSample> {
    let at = shape_operator_t(bundle, end, t)?;
    let det_at: Vec<f64> = at.iter().map(|m| m.determinant()).collect();
    Ok(FoliationSample {
        t,
        end,
        area_density: area_density(bundle, end, t, DensityForm::DetA),
        h_t: at.iter().map(|m| m.trace()).collect(),
        kappa_gt: det_at.iter().map(|d| d - 1.0).collect(),
        det_at,
    })
}

/// Metric at infinity `h0 = 1/4 g0((1 +- A)^2 ., .)` of one end.
#[derive(Clone, Debug)]
pub struct BoundaryMetric {
    pub end: End,
    pub metric: DiscreteMetric,
    /// `dh0 / dg0 = det(1 +- A) / 4` per face.
    pub area_density: Vec<f64>,
    pub curvature: CurvatureField,
    /// Edges whose length was moved off the two-face average by
    /// [`boundary_metric`] to keep every triangle valid.
    pub repaired_edges: usize,
}

impl BoundaryMetric {
    /// Area from the per-face densities.
    pub fn density_area(&self, bundle: &SurfaceBundle) -> f64 {
        self.area_density
            .iter()
            .zip(bundle.face_areas())
            .map(|(d, a)| d * a)
            .sum()
    }
}

/// Edge lengths of `h0`. Each face maps its own `g0` triangle to a valid
/// triangle; an edge gets the mean of the squared lengths its two faces
/// assign. Where strong anisotropy turns that mean into a degenerate
/// triangle, the face's edges are pulled toward that face's own values,
/// staying inside the interval spanned by the two candidates.
pub fn boundary_metric(bundle: &SurfaceBundle, end: End) -> Result<BoundaryMetric> {
    let mesh = &bundle.mesh;
    let s = end.sign();
    let mut tensors = Vec::with_capacity(mesh.n_faces());
    let mut area_density = Vec::with_capacity(mesh.n_faces());
    for f in 0..mesh.n_faces() {
        let a = bundle.shape.layout(f).scaled(s);
        let (l1, l2) = a.eigenvalues();
        if !(1.0 + l2 > 0.0) {
            return Err(Error::Shape {
                face: f,
                reason: format!("1 + A is not positive definite (eigenvalues {l1}, {l2})"),
            });
        }
        let b = Sym2::new(1.0 + a.a, a.b, 1.0 + a.d);
        let m = b.matrix() * b.matrix() * 0.25;
        tensors.push(Sym2::new(m[(0, 0)], m[(0, 1)], m[(1, 1)]));
        area_density.push(0.25 * b.det());
    }
    let layouts: Vec<[[f64; 2]; 3]> = (0..mesh.n_faces())
        .map(|f| bundle.g0.face_geometry(mesh, f).layout())
        .collect();
    let sq_len = |f: usize, a: usize, b: usize| {
        let face = mesh.faces()[f];
        let ia = face.iter().position(|&v| v == a).expect("edge vertex in face");
        let ib = face.iter().position(|&v| v == b).expect("edge vertex in face");
        let (p, q) = (layouts[f][ia], layouts[f][ib]);
        tensors[f].quad([q[0] - p[0], q[1] - p[1]])
    };
    let candidates: Vec<[f64; 2]> = mesh
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &[a, b])| {
            let [f1, f2] = mesh.edge_faces(e);
            [sq_len(f1, a, b), sq_len(f2, a, b)]
        })
        .collect();
    let (lengths, repaired_edges) = reconcile_edges(mesh, &candidates);
    let metric = DiscreteMetric::new(mesh, lengths)?;
    let curvature = vertex_curvature(mesh, &metric);
    Ok(BoundaryMetric {
        end,
        metric,
        area_density,
        curvature,
        repaired_edges,
    })
}

/// Squared-length candidates per edge `[from face 1, from face 2]` to
/// lengths; returns the number of edges not at the midpoint.
fn reconcile_edges(mesh: &crate::mesh::TriMesh, candidates: &[[f64; 2]]) -> (Vec<f64>, usize) {
    const SLACK: f64 = 1e-6;
    let mut w = vec![0.5; candidates.len()];
    let len = |w: &[f64], e: usize| ((1.0 - w[e]) * candidates[e][0] + w[e] * candidates[e][1]).sqrt();
    for _ in 0..64 {
        let mut pull = vec![0.0; candidates.len()];
        let mut bad = false;
        for f in 0..mesh.n_faces() {
            let es = mesh.face_edges(f);
            let mut l = es.map(|e| len(&w, e));
            l.sort_by(|a, b| b.total_cmp(a));
            if l[1] + l[2] - l[0] >= SLACK * l[0] {
                continue;
            }
            bad = true;
            for e in es {
                let side = if mesh.edge_faces(e)[0] == f { 0.0 } else { 1.0 };
                pull[e] += 0.5 * (side - w[e]);
            }
        }
        if !bad {
            break;
        }
        for (w, p) in w.iter_mut().zip(&pull) {
            *w = (*w + p).clamp(0.0, 1.0);
        }
    }
    let repaired = w.iter().filter(|&&x| x != 0.5).count();
    ((0..candidates.len()).map(|e| len(&w, e)).collect(), repaired)
}

/// `lim e^{2t} kappa_{g_t} = -2 ((1 - l) / (1 + l) + (1 + l) / (1 - l))`.
pub fn limit_curvature_closed_form(lambda: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!(
            "principal curvature must lie in [0, 1), got {lambda}"
        )));
    }
    Ok(-2.0 * ((1.0 - lambda) / (1.0 + lambda) + (1.0 + lambda) / (1.0 - lambda)))
}

/// One row of a t-sweep table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeafSummary {
    pub t: f64,
    pub total_area: f64,
    pub total_h_integral: f64,
    pub min_leaf_curvature: f64,
    pub max_leaf_curvature: f64,
}

pub fn leaf_summary(bundle: &SurfaceBundle, end: End, t: f64) -> Result<LeafSummary> {
    let areas = bundle.face_areas();
    let dens = area_density(bundle, end, t, DensityForm::DetA);
    let mcd = mean_curvature_density(bundle, end, t, DensityForm::DetA);
    let k = leaf_curvature(bundle, end, t)?;
    Ok(LeafSummary {
        t,
        total_area: dens.iter().zip(&areas).map(|(d, a)| d * a).sum(),
        total_h_integral: mcd.iter().zip(&areas).map(|(d, a)| d * a).sum(),
        min_leaf_curvature: k.iter().copied().fold(f64::INFINITY, f64::min),
        max_leaf_curvature: k.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::bundle::principal_curvatures;
    use crate::testkit;

    #[test]
    fn leaf_eigenvalues_follow_tanh_addition() {
        let b = testkit::half();
        let lam = principal_curvatures(b);
        for &t in &[0.0, 0.3, 1.0, 2.5] {
            let tau = f64::tanh(t);
            for end in End::BOTH {
                let at = shape_operator_t(b, end, t).unwrap();
                for (m, &(l1, l2)) in at.iter().zip(&lam).step_by(7) {
                    let ev = m.symmetric_eigenvalues();
                    let (hi, lo) = (ev[0].max(ev[1]), ev[0].min(ev[1]));
                    let f = |l: f64| (l + tau) / (1.0 + l * tau);
                    let (mut e1, mut e2) = (f(end.sign() * l1), f(end.sign() * l2));
                    if e1 < e2 {
                        std::mem::swap(&mut e1, &mut e2);
                    }
                    assert!((hi - e1).abs() < 1e-12 && (lo - e2).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mean_curvature_density_is_trace_times_area_density() {
        let b = testkit::half();
        for &t in &[0.0, 0.7, 2.0] {
            for end in End::BOTH {
                let at = shape_operator_t(b, end, t).unwrap();
                let dens = area_density(b, end, t, DensityForm::DetA);
                let mcd = mean_curvature_density(b, end, t, DensityForm::DetA);
                for ((m, d), h) in at.iter().zip(&dens).zip(&mcd) {
                    assert_relative_eq!(m.trace() * d, *h, epsilon = 1e-12, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn leaf_curvature_times_density_is_constant() {
        let b = testkit::half();
        for &t in &[0.4, 1.5, 3.0] {
            let k = leaf_curvature(b, End::Plus, t).unwrap();
            let dens = area_density(b, End::Plus, t, DensityForm::DetA);
            for ((k, d), s) in k.iter().zip(&dens).zip(&b.shape.entries) {
                assert_relative_eq!(k * d, s.det() - 1.0, epsilon = 1e-11, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn minus_end_is_plus_end_reflected() {
        let b = testkit::half();
        for &t in &[0.2, 1.1] {
            let m = area_density(b, End::Minus, t, DensityForm::DetA);
            let p = area_density(b, End::Plus, -t, DensityForm::DetA);
            assert_eq!(m, p);
            let m = mean_curvature_density(b, End::Minus, t, DensityForm::Kappa);
            let p = mean_curvature_density(b, End::Plus, -t, DensityForm::Kappa);
            for (x, y) in m.iter().zip(&p) {
                assert_relative_eq!(*x, -*y, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn fuchsian_boundary_metric_halves_lengths() {
        let b = testkit::fuchsian();
        for end in End::BOTH {
            let h0 = boundary_metric(b, end).unwrap();
            for (l, l0) in h0.metric.lengths().iter().zip(b.g0.lengths()) {
                assert_relative_eq!(*l, 0.5 * l0, max_relative = 1e-14);
            }
            let k = h0.curvature.pointwise();
            let err = k.iter().fold(0.0f64, |m, k| m.max((k + 4.0).abs()));
            assert!(err < 1e-7, "h0 curvature off by {err}");
            assert_relative_eq!(h0.density_area(b), std::f64::consts::PI, max_relative = 1e-7);
        }
    }

    #[test]
    fn limit_closed_form_values() {
        assert_eq!(limit_curvature_closed_form(0.0).unwrap(), -4.0);
        let mut prev = -4.0;
        for i in 1..20 {
            let k = limit_curvature_closed_form(i as f64 / 20.0).unwrap();
            assert!(k < prev);
            prev = k;
        }
        assert!(limit_curvature_closed_form(1.0).is_err());
        assert!(limit_curvature_closed_form(-0.1).is_err());
        assert!(limit_curvature_closed_form(f64::NAN).is_err());
    }

    #[test]
    fn rescaled_leaf_curvature_approaches_closed_form() {
        let b = testkit::half();
        let t = 8.0;
        let k = leaf_curvature(b, End::Plus, t).unwrap();
        for (k, &(l, _)) in k.iter().zip(&principal_curvatures(b)) {
            let want = limit_curvature_closed_form(l).unwrap();
            assert!(((2.0 * t).exp() * k - want).abs() < 1e-4);
        }
    }

    #[test]
    fn summary_matches_pieces() {
        let b = testkit::half();
        let s = leaf_summary(b, End::Minus, 1.0).unwrap();
        let x = sample(b, End::Minus, 1.0).unwrap();
        let area: f64 = x.area_density.iter().zip(b.face_areas()).map(|(d, a)| d * a).sum();
        assert_relative_eq!(s.total_area, area, max_relative = 1e-14);
        assert!(s.min_leaf_curvature <= s.max_leaf_curvature && s.max_leaf_curvature < 0.0);
    }
}
