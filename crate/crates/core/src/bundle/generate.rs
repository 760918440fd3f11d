use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BundleKind, BundleMeta, ShapeField, SurfaceBundle, Sym2};
use crate::mesh::{prescribe_curvature, uniformize, DiscreteMetric, NewtonOptions, TriMesh, VertexField};
use crate::{Error, Result, Tolerances};

/// Recipe for the principal-curvature magnitude `lambda` on an embedded mesh.
///
/// `lambda = amplitude * m(p) * prod_k z_k`, where `p` is the length of the
/// reference axis projected on the tangent plane (so `m` vanishes where the
/// projected eigendirection field degenerates), `m` is a smoothstep ramp
/// between `plateau[0]` and `plateau[1]`, and each `z_k` is a smoothstep
/// cutoff vanishing within `zero_radius / 2` of a designated zero point.
/// Each band multiplies by a further smoothstep window in one coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaRecipe {
    pub amplitude: f64,
    pub axis: [f64; 3],
    pub plateau: [f64; 2],
    #[serde(default)]
    pub zero_points: Vec<[f64; 3]>,
    #[serde(default)]
    pub zero_radius: f64,
    #[serde(default)]
    pub bands: Vec<Band>,
    /// Length scale, in `g0` units, over which the eigendirection field is
    /// smoothed.
    #[serde(default = "default_smoothing")]
    pub direction_smoothing: f64,
    /// Field-magnitude ramp below which `lambda` is switched off, keeping it
    /// away from the zeros of the eigendirection field.
    #[serde(default = "default_coherence")]
    pub coherence: [f64; 2],
}

fn default_coherence() -> [f64; 2] {
    [0.5, 0.9]
}

fn default_smoothing() -> f64 {
    0.6
}

/// Window `smoothstep(ramp[0], ramp[1], |x_coord|)`; a decreasing ramp
/// (`ramp[0] > ramp[1]`) keeps the inside instead of the outside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub coord: usize,
    pub ramp: [f64; 2],
}

fn smoothstep(lo: f64, hi: f64, x: f64) -> f64 {
    let t = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

impl LambdaRecipe {
    pub fn new(amplitude: f64) -> Self {
        Self {
            amplitude,
            axis: [1.0, 0.0, 0.0],
            plateau: [0.2, 0.7],
            zero_points: Vec::new(),
            zero_radius: 0.0,
            bands: Vec::new(),
            direction_smoothing: default_smoothing(),
            coherence: default_coherence(),
        }
    }

    /// Random axis and up to two extra zero points drawn from mesh vertices.
    pub fn random(mesh: &TriMesh, amplitude: f64, rng: &mut impl Rng) -> Result<Self> {
        let pos = mesh.positions().ok_or(Error::MissingEmbedding)?;
        let axis = loop {
            let v = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let n = dot(v, v);
            if n > 1e-2 && n <= 1.0 {
                break normalize(v);
            }
        };
        let count = rng.random_range(0..=2);
        let zero_points = (0..count)
            .map(|_| pos[rng.random_range(0..pos.len())])
            .collect();
        Ok(Self {
            amplitude,
            axis,
            plateau: [0.2, 0.7],
            zero_points,
            zero_radius: rng.random_range(0.5..1.0),
            bands: Vec::new(),
            direction_smoothing: default_smoothing(),
            coherence: default_coherence(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.amplitude) {
            return Err(Error::InvalidArgument(format!(
                "amplitude must lie in [0, 1), got {}",
                self.amplitude
            )));
        }
        if !(self.plateau[0] >= 0.0 && self.plateau[0] < self.plateau[1] && self.plateau[1] <= 1.0) {
            return Err(Error::InvalidArgument("plateau must satisfy 0 <= lo < hi <= 1".into()));
        }
        for b in &self.bands {
            if b.coord > 2 || b.ramp[0] == b.ramp[1] || !b.ramp.iter().all(|r| r.is_finite()) {
                return Err(Error::InvalidArgument(format!("bad band {b:?}")));
            }
        }
        if !(self.direction_smoothing > 0.0 && self.direction_smoothing.is_finite()) {
            return Err(Error::InvalidArgument("direction_smoothing must be positive".into()));
        }
        if !(0.0 <= self.coherence[0] && self.coherence[0] < self.coherence[1]) {
            return Err(Error::InvalidArgument("coherence must satisfy 0 <= lo < hi".into()));
        }
        if dot(self.axis, self.axis) < 1e-12 {
            return Err(Error::InvalidArgument("axis must be non-zero".into()));
        }
        Ok(())
    }

    /// Per-vertex `lambda`.
    pub fn evaluate(&self, mesh: &TriMesh) -> Result<VertexField> {
        self.validate()?;
        let pos = mesh.positions().ok_or(Error::MissingEmbedding)?;
        let axis = normalize(self.axis);
        let mut normals = vec![[0.0; 3]; mesh.n_vertices()];
        for face in mesh.faces() {
            let [p, q, r] = face.map(|v| pos[v]);
            let n = cross(sub(q, p), sub(r, p));
            for &v in face {
                for c in 0..3 {
                    normals[v][c] += n[c];
                }
            }
        }
        let values = (0..mesh.n_vertices())
            .map(|v| {
                let n = normalize(normals[v]);
                let cos = dot(n, axis);
                let p = (1.0 - cos * cos).max(0.0).sqrt();
                let mut lam = self.amplitude * smoothstep(self.plateau[0], self.plateau[1], p);
                for z in &self.zero_points {
                    let d = dot(sub(pos[v], *z), sub(pos[v], *z)).sqrt();
                    lam *= smoothstep(0.5 * self.zero_radius, self.zero_radius, d);
                }
                for b in &self.bands {
                    lam *= smoothstep(b.ramp[0], b.ramp[1], pos[v][b.coord].abs());
                }
                lam
            })
            .collect();
        VertexField::new(values)
    }

    /// Unit eigendirection per face in the layout of `g0`: the reference
    /// axis projected on the embedded face, carried over by the affine map
    /// between the embedded and the `g0` triangle. Falls back to the layout x
    /// axis where the projection degenerates.
    /// Projected axis per face as `(|d|^2, angle)`, the angle measured from
    /// the first edge of the face.
    pub fn axis_directions(&self, mesh: &TriMesh) -> Result<Vec<(f64, f64)>> {
        let pos = mesh.positions().ok_or(Error::MissingEmbedding)?;
        let axis = normalize(self.axis);
        Ok(mesh
            .faces()
            .iter()
            .map(|face| {
                let [p0, p1, p2] = face.map(|v| pos[v]);
                let u = sub(p1, p0);
                let n = normalize(cross(u, sub(p2, p0)));
                let c = dot(axis, n);
                let d = [axis[0] - c * n[0], axis[1] - c * n[1], axis[2] - c * n[2]];
                (dot(d, d), dot(cross(u, d), n).atan2(dot(u, d)))
            })
            .collect())
    }
}

/// Smoothed line field per face: `(magnitude, angle)` with the angle measured
/// from the first edge of the face in the metric it was computed on.
/// Magnitudes near 1 mean the data was coherent; zeros of the field sit where
/// the magnitude collapses.
pub type LineField = Vec<(f64, f64)>;

/// Minimizes `sum_e |z_g - r_e z_f|^2 + L^-2 sum_f a_f w_f |z_f - e^{2i psi_f}|^2`
/// over doubled-angle fields `z`, where `r_e` is the unfolding rotation
/// across edge `e` and `w` is rescaled to a maximum of 1.
pub fn smooth_line_field(mesh: &TriMesh, g0: &DiscreteMetric, raw: &[(f64, f64)], length: f64) -> Result<LineField> {
    let nf = mesh.n_faces();
    let layouts: Vec<[[f64; 2]; 3]> = (0..nf).map(|f| g0.face_geometry(mesh, f).layout()).collect();
    let edge_angle = |f: usize, a: usize, b: usize| {
        let face = mesh.faces()[f];
        let ia = face.iter().position(|&v| v == a).expect("vertex in face");
        let ib = face.iter().position(|&v| v == b).expect("vertex in face");
        let (p, q) = (layouts[f][ia], layouts[f][ib]);
        (q[1] - p[1]).atan2(q[0] - p[0])
    };
    let mu = 1.0 / (length * length);
    let areas = g0.face_areas(mesh);
    let mut trip = Vec::new();
    let mut rhs = Mat::<f64>::zeros(2 * nf, 1);
    let mut diag = vec![0.0; nf];
    for (e, &[a, b]) in mesh.edges().iter().enumerate() {
        let [f, g] = mesh.edge_faces(e);
        let rot = 2.0 * (edge_angle(g, a, b) - edge_angle(f, a, b));
        let (c, s) = (rot.cos(), rot.sin());
        diag[f] += 1.0;
        diag[g] += 1.0;
        // z_g - R z_f: block (g, f) = -R, block (f, g) = -R^T.
        for (r, cc, v) in [(0, 0, c), (0, 1, -s), (1, 0, s), (1, 1, c)] {
            trip.push(Triplet::new(2 * g + r, 2 * f + cc, -v));
            trip.push(Triplet::new(2 * f + cc, 2 * g + r, -v));
        }
    }
    let wmax = raw.iter().map(|r| r.0).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for f in 0..nf {
        let w = mu * areas[f] * raw[f].0 / wmax;
        for r in 0..2 {
            trip.push(Triplet::new(2 * f + r, 2 * f + r, diag[f] + w));
        }
        rhs[(2 * f, 0)] = w * (2.0 * raw[f].1).cos();
        rhs[(2 * f + 1, 0)] = w * (2.0 * raw[f].1).sin();
    }
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(2 * nf, 2 * nf, &trip)
        .map_err(|e| Error::InvalidArgument(format!("line field assembly: {e:?}")))?;
    let lu = mat
        .sp_lu()
        .map_err(|e| Error::InvalidArgument(format!("line field factorization: {e:?}")))?;
    lu.solve_in_place(&mut rhs);
    Ok((0..nf)
        .map(|f| {
            let (x, y) = (rhs[(2 * f, 0)], rhs[(2 * f + 1, 0)]);
            (x.hypot(y), 0.5 * y.atan2(x))
        })
        .collect())
}

fn meta(tol: &Tolerances, amplitude: Option<f64>, recipe: Option<LambdaRecipe>) -> BundleMeta {
    BundleMeta {
        amplitude,
        gauss_tol: tol.gauss,
        solver_residual: tol.solver_residual,
        recipe,
    }
}

/// Fuchsian datum: `g0` the curvature -1 metric conformal to `seed`, `A = 0`.
pub fn make_fuchsian(mesh: TriMesh, seed: &DiscreteMetric, tol: &Tolerances) -> Result<SurfaceBundle> {
    tol.validate()?;
    let sol = uniformize(&mesh, seed, -1.0, &NewtonOptions::from(tol))?;
    let n = mesh.n_faces();
    let bundle = SurfaceBundle::new(
        mesh,
        sol.metric,
        ShapeField::zeros(n),
        BundleKind::Fuchsian,
        meta(tol, Some(0.0), None),
    )?;
    bundle.validate(tol.gauss)?;
    Ok(bundle)
}

/// Minimal-surface datum with principal curvatures `+-lambda`:
/// `g0` has curvature `-1 - lambda^2` and `A = lambda (e1 e1 - e2 e2)`.
pub fn make_almost_fuchsian(
    mesh: TriMesh,
    seed: &DiscreteMetric,
    recipe: &LambdaRecipe,
    tol: &Tolerances,
) -> Result<SurfaceBundle> {
    tol.validate()?;
    recipe.validate()?;
    let raw_lambda = recipe.evaluate(&mesh)?;
    let scale = recipe.amplitude.max(f64::MIN_POSITIVE);
    // Directions only matter where lambda does; elsewhere the smoother is free
    // to place the zeros of the field.
    let raw: Vec<(f64, f64)> = recipe
        .axis_directions(&mesh)?
        .into_iter()
        .zip(mesh.faces())
        .map(|((w, angle), f)| {
            let l = f.iter().map(|&v| raw_lambda[v]).sum::<f64>() / (3.0 * scale);
            (w * l * l, angle)
        })
        .collect();
    // The field lives on the hyperbolic metric of the conformal class, which
    // differs from g0 by a factor of order lambda^2, so its zeros stay put
    // when it is carried over to g0.
    let opts = NewtonOptions::from(tol);
    let hyperbolic = uniformize(&mesh, seed, -1.0, &opts)?.metric;
    let field = smooth_line_field(&mesh, &hyperbolic, &raw, recipe.direction_smoothing)?;
    let lambda = taper(&mesh, &hyperbolic, &raw_lambda, &field, recipe.coherence);
    let target = lambda.map(|l| -1.0 - l * l);
    let sol = prescribe_curvature(&mesh, &hyperbolic, &target, &opts)?;
    let weighted: Vec<(f64, f64)> = field.iter().map(|&(m, a)| (m * m, a)).collect();
    let frames = smooth_line_field(&mesh, &sol.metric, &weighted, recipe.direction_smoothing)?
        .into_iter()
        .map(|(_, a)| [a.cos(), a.sin()])
        .collect();
    // The face value reproduces the face-averaged curvature exactly:
    // -lambda_f^2 = mean(-lambda_v^2) = kappa0_f + 1.
    let entries = mesh
        .faces()
        .iter()
        .map(|f| {
            let l2 = f.iter().map(|&v| lambda[v] * lambda[v]).sum::<f64>() / 3.0;
            let l = l2.sqrt();
            Sym2::diag(l, -l)
        })
        .collect();
    let bundle = SurfaceBundle::new(
        mesh,
        sol.metric,
        ShapeField { entries, frames },
        BundleKind::AlmostFuchsian,
        meta(tol, Some(recipe.amplitude), Some(recipe.clone())),
    )?;
    bundle.validate(tol.gauss)?;
    Ok(bundle)
}

/// `lambda_v * smoothstep(coherence[0], coherence[1], m_v)` with `m_v` the
/// area-weighted field magnitude around `v`, relative to its maximum.
fn taper(mesh: &TriMesh, metric: &DiscreteMetric, lambda: &VertexField, field: &LineField, coherence: [f64; 2]) -> VertexField {
    let areas = metric.face_areas(mesh);
    let mut num = vec![0.0; mesh.n_vertices()];
    let mut den = vec![0.0; mesh.n_vertices()];
    for (f, face) in mesh.faces().iter().enumerate() {
        for &v in face {
            num[v] += areas[f] * field[f].0;
            den[v] += areas[f];
        }
    }
    let m: Vec<f64> = num.iter().zip(&den).map(|(n, d)| n / d).collect();
    let top = m.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    VertexField::new(
        (0..mesh.n_vertices())
            .map(|v| lambda[v] * smoothstep(coherence[0], coherence[1], m[v] / top))
            .collect(),
    )
    .expect("finite taper")
}
