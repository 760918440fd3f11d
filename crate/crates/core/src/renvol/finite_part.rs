//! Riesz finite part of `int_{t}^{inf} e^{-z x} dg` over one funnel end.
//!
//! The integrand is a sum of three exponential modes, so the continuation in
//! `z` is explicit:
//! `I(z) = a e^{(2-z)t}/(z-2) + b e^{-(2+z)t}/(z+2) - c e^{-zt}/z`
//! and `FP_{z=0} I = -a e^{2t}/2 + b e^{-2t}/2 + c t`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bundle::SurfaceBundle;
use crate::foliation::{area_density, mean_curvature_density, DensityForm, End};
use crate::{Error, Result};

/// Coefficients of the three modes in the basis above.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCoeffs {
    /// `e^{(2-z)x}` mode.
    pub a: f64,
    /// `e^{-(2+z)x}` mode.
    pub b: f64,
    /// `-e^{-zx}` mode; equals `int kappa_t / 2 dg_t`.
    pub c: f64,
}

impl GrowthCoeffs {
    pub fn finite_part(&self, t: f64) -> f64 {
        -0.5 * self.a * (2.0 * t).exp() + 0.5 * self.b * (-2.0 * t).exp() + self.c * t
    }

    /// `I(z)` for `Re z > 2`.
    pub fn evaluate(&self, t: f64, z: f64) -> f64 {
        let [p, q, r] = basis(t, z);
        self.a * p + self.b * q + self.c * r
    }
}

fn basis(t: f64, z: f64) -> [f64; 3] {
    [
        ((2.0 - z) * t).exp() / (z - 2.0),
        (-(2.0 + z) * t).exp() / (z + 2.0),
        -(-z * t).exp() / z,
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitePartResult {
    pub end: End,
    pub t: f64,
    pub fp: f64,
    /// Coefficient `c` of the `-e^{-zt}/z` mode, i.e. `int kappa_t / 2 dg_t`.
    /// The Laurent coefficient of `1/z` in `I(z)` is `-c`.
    pub pole_residue: f64,
    pub growth_coeffs: GrowthCoeffs,
    /// `max |I - model| / max |I|` over the grid (numeric path only).
    pub fit_residual: Option<f64>,
    /// Condition number of the column-scaled design matrix (numeric path only).
    pub condition: Option<f64>,
}

/// Leaf integrals `alpha = int (k/4 + 1/2 + H/4)`, `beta = int (k/4 + 1/2 - H/4)`
/// and `gamma = int k/2` over `Sigma_t`, using `k dg_t = (det A - 1) dg0`.
pub fn leaf_modes(bundle: &SurfaceBundle, end: End, t: f64) -> (f64, f64, f64) {
    let areas = bundle.face_areas();
    let dens = area_density(bundle, end, t, DensityForm::DetA);
    let mcd = mean_curvature_density(bundle, end, t, DensityForm::DetA);
    let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
    for (f, a) in bundle.shape.entries.iter().enumerate() {
        let k = a.det() - 1.0;
        alpha += areas[f] * (0.25 * k + 0.5 * dens[f] + 0.25 * mcd[f]);
        beta += areas[f] * (0.25 * k + 0.5 * dens[f] - 0.25 * mcd[f]);
        gamma += areas[f] * 0.5 * k;
    }
    (alpha, beta, gamma)
}

/// Finite part from the leaf decomposition at `t`.
pub fn riesz_fp_symbolic(bundle: &SurfaceBundle, t: f64, end: End) -> FinitePartResult {
    let (alpha, beta, gamma) = leaf_modes(bundle, end, t);
    let coeffs = GrowthCoeffs {
        a: alpha * (-2.0 * t).exp(),
        b: beta * (2.0 * t).exp(),
        c: gamma,
    };
    FinitePartResult {
        end,
        t,
        fp: -0.5 * alpha + 0.5 * beta + gamma * t,
        pole_residue: gamma,
        growth_coeffs: coeffs,
        fit_residual: None,
        condition: None,
    }
}

/// `I(z) = int_t^inf e^{-zx} int_Sigma dg_x dx`, integrated face by face in
/// closed form from the `g0` expansion
/// `dg_x / dg0 = e^{2x}(1+H+d)/4 + e^{-2x}(1-H+d)/4 + (1-d)/2`.
pub fn funnel_integral(bundle: &SurfaceBundle, t: f64, end: End, z: f64) -> Result<f64> {
    if !(z > 2.0) {
        return Err(Error::InvalidArgument(format!(
            "funnel integral needs z > 2, got {z}"
        )));
    }
    let [p, q, r] = basis(t, z);
    let s = end.sign();
    Ok(bundle
        .shape
        .entries
        .iter()
        .zip(bundle.face_areas())
        .map(|(a, area)| {
            let (h, d) = (s * a.trace(), a.det());
            area * ((1.0 + h + d) / 4.0 * p + (1.0 - h + d) / 4.0 * q - (1.0 - d) / 2.0 * r)
        })
        .sum())
}

/// Least-squares fit of the three modes to `I(z)` on `z_grid`, then the
/// finite part of the fitted model.
pub fn riesz_fp_numeric(
    bundle: &SurfaceBundle,
    t: f64,
    end: End,
    z_grid: &[f64],
    max_condition: f64,
) -> Result<FinitePartResult> {
    if z_grid.len() < 6 {
        return Err(Error::InvalidArgument(format!(
            "z grid needs at least 6 points, got {}",
            z_grid.len()
        )));
    }
    let values = z_grid
        .iter()
        .map(|&z| funnel_integral(bundle, t, end, z))
        .collect::<Result<Vec<_>>>()?;
    let n = z_grid.len();
    let mut design = DMatrix::from_fn(n, 3, |i, j| basis(t, z_grid[i])[j]);
    let scale: Vec<f64> = (0..3).map(|j| design.column(j).norm()).collect();
    for (j, s) in scale.iter().enumerate() {
        design.column_mut(j).unscale_mut(*s);
    }
    let svd = design.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond <= max_condition) {
        return Err(Error::IllConditioned { cond });
    }
    let rhs = DVector::from_vec(values.clone());
    let x = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::InvalidArgument(format!("least squares: {e}")))?;
    let coeffs = GrowthCoeffs {
        a: x[0] / scale[0],
        b: x[1] / scale[1],
        c: x[2] / scale[2],
    };
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let misfit = z_grid
        .iter()
        .zip(&values)
        .fold(0.0f64, |m, (&z, v)| m.max((coeffs.evaluate(t, z) - v).abs()));
    Ok(FinitePartResult {
        end,
        t,
        fp: coeffs.finite_part(t),
        pole_residue: coeffs.c,
        growth_coeffs: coeffs,
        fit_residual: Some(if peak > 0.0 { misfit / peak } else { misfit }),
        condition: Some(cond),
    })
}
