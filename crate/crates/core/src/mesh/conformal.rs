//! Prescribed-curvature solves by discrete vertex scaling.
//!
//! The unknown is a vertex field `u` with scaled lengths
//! `l_ij = exp((u_i + u_j) / 2) l0_ij`. The residual is
//! `F_v(u) = defect_v(u) - kappa_v * dual_area_v(u)`, solved by damped Newton
//! with a sparse LU factorization of the exact Jacobian.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use super::curvature::vertex_curvature;
use super::metric::TriangleGeometry;
use super::{conformal_scale, DiscreteMetric, TriMesh, VertexField};
use crate::error::SolveError;
use crate::{Error, Result, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    /// Sup-norm bound on `|defect_v / dual_area_v - kappa_v|`.
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self::from(&Tolerances::default())
    }
}

impl From<&Tolerances> for NewtonOptions {
    fn from(t: &Tolerances) -> Self {
        Self {
            tol: t.solver_residual,
            max_iter: t.max_newton_iter,
            max_halvings: 60,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConformalSolution {
    pub omega: VertexField,
    pub metric: DiscreteMetric,
    /// Sup-norm pointwise curvature error, recomputed from `metric` alone.
    pub curvature_error: f64,
    pub iterations: usize,
}

/// Residual map and Jacobian of the prescribed-curvature problem around a
/// fixed base metric.
pub struct CurvatureProblem<'a> {
    mesh: &'a TriMesh,
    base: &'a DiscreteMetric,
    target: Vec<f64>,
}

/// Evaluation of the residual at one iterate.
pub struct Evaluation {
    pub residual: Vec<f64>,
    pub dual_area: Vec<f64>,
}

impl Evaluation {
    pub fn pointwise_error(&self) -> f64 {
        self.residual
            .iter()
            .zip(&self.dual_area)
            .fold(0.0, |m, (f, a)| m.max((f / a).abs()))
    }

    pub fn norm(&self) -> f64 {
        self.residual.iter().map(|f| f * f).sum::<f64>().sqrt()
    }
}

impl<'a> CurvatureProblem<'a> {
    pub fn new(mesh: &'a TriMesh, base: &'a DiscreteMetric, target: Vec<f64>) -> Result<Self> {
        if target.len() != mesh.n_vertices() {
            return Err(Error::SizeMismatch {
                what: "target curvatures",
                expected: mesh.n_vertices(),
                got: target.len(),
            });
        }
        Ok(Self { mesh, base, target })
    }

    fn face_lengths(&self, f: usize, u: &[f64]) -> [f64; 3] {
        let face = self.mesh.faces()[f];
        let l = self.base.face_lengths(self.mesh, f);
        std::array::from_fn(|k| {
            let a = face[(k + 1) % 3];
            let b = face[(k + 2) % 3];
            (0.5 * (u[a] + u[b])).exp() * l[k]
        })
    }

    /// `None` when some scaled face violates the triangle inequality.
    pub fn evaluate(&self, u: &[f64]) -> Option<Evaluation> {
        let n = self.mesh.n_vertices();
        let mut residual = vec![2.0 * std::f64::consts::PI; n];
        let mut dual_area = vec![0.0; n];
        for (f, face) in self.mesh.faces().iter().enumerate() {
            let g = TriangleGeometry::new(self.face_lengths(f, u))?;
            for k in 0..3 {
                residual[face[k]] -= g.angles[k];
                dual_area[face[k]] += g.area / 3.0;
            }
        }
        for v in 0..n {
            residual[v] -= self.target[v] * dual_area[v];
        }
        Some(Evaluation {
            residual,
            dual_area,
        })
    }

    /// Exact Jacobian `dF/du` as (row, col, value) triplets; duplicates add.
    pub fn jacobian(&self, u: &[f64]) -> Option<Vec<(usize, usize, f64)>> {
        let mut trip = Vec::with_capacity(self.mesh.n_faces() * 27);
        for (f, face) in self.mesh.faces().iter().enumerate() {
            let l = self.face_lengths(f, u);
            let g = TriangleGeometry::new(l)?;
            // d angle_i / d u_j = cot_k / 2 ; d angle_i / d u_i = -(cot_j + cot_k) / 2
            // d area / d u_i = (l_ij^2 cot_k + l_ik^2 cot_j) / 4
            let mut d_area = [0.0; 3];
            for i in 0..3 {
                let j = (i + 1) % 3;
                let k = (i + 2) % 3;
                // edge ij is opposite k, edge ik is opposite j
                d_area[i] = 0.25 * (l[k] * l[k] * g.cots[k] + l[j] * l[j] * g.cots[j]);
                let (vi, vj, vk) = (face[i], face[j], face[k]);
                trip.push((vi, vi, 0.5 * (g.cots[j] + g.cots[k])));
                trip.push((vi, vj, -0.5 * g.cots[k]));
                trip.push((vi, vk, -0.5 * g.cots[j]));
            }
            for &v in face {
                let kv = self.target[v];
                for i in 0..3 {
                    trip.push((v, face[i], -kv * d_area[i] / 3.0));
                }
            }
        }
        Some(trip)
    }

    /// Jacobian-vector product, assembled from [`Self::jacobian`].
    pub fn jacobian_apply(&self, u: &[f64], x: &[f64]) -> Option<Vec<f64>> {
        let mut y = vec![0.0; x.len()];
        for (r, c, v) in self.jacobian(u)? {
            y[r] += v * x[c];
        }
        Some(y)
    }

    fn newton_step(&self, u: &[f64], residual: &[f64], iteration: usize) -> Result<Vec<f64>, SolveError> {
        let n = u.len();
        let trip: Vec<Triplet<usize, usize, f64>> = self
            .jacobian(u)
            .expect("iterate is a valid metric")
            .into_iter()
            .map(|(r, c, v)| Triplet::new(r, c, v))
            .collect();
        let linear = |message: String| SolveError::Linear { iteration, message };
        let jac = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trip)
            .map_err(|e| linear(format!("{e:?}")))?;
        let lu = jac.sp_lu().map_err(|e| linear(format!("{e:?}")))?;
        let mut rhs = Mat::from_fn(n, 1, |i, _| -residual[i]);
        lu.solve_in_place(&mut rhs);
        let step: Vec<f64> = (0..n).map(|i| rhs[(i, 0)]).collect();
        if step.iter().any(|s| !s.is_finite()) {
            return Err(linear("singular Jacobian".into()));
        }
        Ok(step)
    }

    /// Damped Newton from `u0`.
    pub fn solve(&self, u0: Vec<f64>, opts: &NewtonOptions) -> Result<(Vec<f64>, usize), SolveError> {
        let mut u = u0;
        let mut eval = self.evaluate(&u).ok_or(SolveError::LineSearch {
            iteration: 0,
            residual: f64::NAN,
        })?;
        let mut err = eval.pointwise_error();
        let mut converged_at = None;
        let mut iter = 0;
        while iter < opts.max_iter {
            if err <= opts.tol && converged_at.is_none() {
                converged_at = Some(iter);
            }
            // a few polishing steps past the tolerance, kept only while they help
            if let Some(c) = converged_at {
                if iter >= c + 3 || err < 1e-13 {
                    break;
                }
            }
            let step = self.newton_step(&u, &eval.residual, iter)?;
            let norm0 = eval.norm();
            let mut tau = 1.0;
            let mut accepted = None;
            let mut any_valid = false;
            for _ in 0..opts.max_halvings {
                let trial: Vec<f64> = u.iter().zip(&step).map(|(a, s)| a + tau * s).collect();
                if let Some(e) = self.evaluate(&trial) {
                    any_valid = true;
                    if e.norm() <= (1.0 - 1e-4 * tau) * norm0 {
                        accepted = Some((trial, e));
                        break;
                    }
                }
                tau *= 0.5;
            }
            iter += 1;
            match accepted {
                Some((trial, e)) => {
                    let new_err = e.pointwise_error();
                    if converged_at.is_some() && new_err >= err {
                        break;
                    }
                    u = trial;
                    eval = e;
                    err = new_err;
                }
                None if converged_at.is_some() => break,
                None if !any_valid => {
                    return Err(SolveError::LineSearch {
                        iteration: iter,
                        residual: err,
                    })
                }
                None => {
                    return Err(SolveError::Stagnated {
                        iterations: iter,
                        residual: err,
                    })
                }
            }
            log::trace!("newton iteration {iter}: pointwise residual {err:.3e}, step {tau}");
        }
        if err <= opts.tol {
            Ok((u, iter))
        } else {
            Err(SolveError::NotConverged {
                iterations: iter,
                residual: err,
            })
        }
    }
}

fn require_hyperbolic(mesh: &TriMesh) -> Result<()> {
    let chi = mesh.euler_characteristic();
    if chi >= 0 {
        return Err(Error::NonHyperbolic { chi });
    }
    Ok(())
}

fn certify(
    mesh: &TriMesh,
    metric: &DiscreteMetric,
    target: &[f64],
    u: Vec<f64>,
    iterations: usize,
    opts: &NewtonOptions,
) -> Result<ConformalSolution> {
    let omega = VertexField::new(u)?;
    let scaled = conformal_scale(mesh, metric, &omega)?;
    let k = vertex_curvature(mesh, &scaled).pointwise();
    let curvature_error = k
        .iter()
        .zip(target)
        .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
    if curvature_error > opts.tol {
        return Err(SolveError::NotConverged {
            iterations,
            residual: curvature_error,
        }
        .into());
    }
    Ok(ConformalSolution {
        omega,
        metric: scaled,
        curvature_error,
        iterations,
    })
}

/// Conformal factor `omega` such that `exp(2 omega) metric` has constant
/// curvature `target` at every vertex.
pub fn uniformize(
    mesh: &TriMesh,
    metric: &DiscreteMetric,
    target: f64,
    opts: &NewtonOptions,
) -> Result<ConformalSolution> {
    if !(target < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "uniformization target curvature must be negative, got {target}"
        )));
    }
    prescribe_curvature(mesh, metric, &VertexField::constant(mesh.n_vertices(), target), opts)
}

/// Conformal factor realizing a strictly negative per-vertex curvature.
pub fn prescribe_curvature(
    mesh: &TriMesh,
    metric: &DiscreteMetric,
    target: &VertexField,
    opts: &NewtonOptions,
) -> Result<ConformalSolution> {
    require_hyperbolic(mesh)?;
    target.check_len(mesh)?;
    if let Some(v) = target.values().iter().position(|k| !(*k < 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "target curvature must be strictly negative (vertex {v} has {})",
            target[v]
        )));
    }
    let problem = CurvatureProblem::new(mesh, metric, target.values().to_vec())?;

    // Start from the constant factor that matches total area to Gauss-Bonnet.
    let chi = mesh.euler_characteristic() as f64;
    let dual = vertex_curvature(mesh, metric).dual_area;
    let area: f64 = dual.iter().sum();
    let mean_current = 2.0 * std::f64::consts::PI * chi / area;
    let mean_target = target.values().iter().zip(&dual).map(|(k, a)| k * a).sum::<f64>() / area;
    let u0 = 0.5 * (mean_current / mean_target).ln();

    let (u, iterations) = problem.solve(vec![u0; mesh.n_vertices()], opts)?;
    log::debug!("curvature solve converged in {iterations} iterations");
    certify(mesh, metric, target.values(), u, iterations, opts)
}
