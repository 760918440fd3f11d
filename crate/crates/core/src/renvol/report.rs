//! Canonical renormalized volume and the positivity report.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::finite_part::{riesz_fp_numeric, riesz_fp_symbolic, FinitePartResult};
use super::shift::{conformal_volume_shift, conformal_volume_shift_path, dilation_shift};
use super::volume::{compact_volume, mean_curvature_integral, vol_ks, vol_ks_sweep, KsSweep};
use crate::bundle::{BundleKind, SurfaceBundle};
use crate::foliation::{boundary_metric, End};
use crate::mesh::{uniformize, NewtonOptions};
use crate::{Error, Result, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VolumeOptions {
    pub t_grid: Vec<f64>,
    pub z_grid: Vec<f64>,
    /// Leaves at which both finite-part paths are evaluated.
    pub fp_t: Vec<f64>,
    pub max_condition: f64,
    /// Gauss–Legendre nodes for the path-integrated shift.
    pub path_nodes: usize,
    pub tolerances: Tolerances,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        Self {
            t_grid: vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
            z_grid: vec![2.5, 3.0, 3.5, 4.0, 5.0, 6.0],
            fp_t: vec![0.0, 1.0, 2.0],
            max_condition: 1e12,
            path_nodes: 16,
            tolerances: Tolerances::default(),
        }
    }
}

impl VolumeOptions {
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::InvalidArgument("t grid must be non-empty and non-negative".into()));
        }
        if self.z_grid.len() < 6 || self.z_grid.iter().any(|z| !(*z > 2.0 && z.is_finite())) {
            return Err(Error::InvalidArgument("z grid needs at least 6 points, all > 2".into()));
        }
        if self.path_nodes == 0 {
            return Err(Error::InvalidArgument("path_nodes must be positive".into()));
        }
        Ok(())
    }

    pub fn t_star(&self) -> f64 {
        self.t_grid.iter().copied().fold(0.0, f64::max)
    }
}

/// A checked inequality; `margin >= -tolerance` passes. Only asserted
/// verdicts count toward [`VolumeReport::passed`]; the others are reported
/// as warnings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    pub tolerance: f64,
    pub asserted: bool,
}

impl Verdict {
    pub fn new(name: &str, margin: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: margin >= -tolerance,
            margin,
            tolerance,
            asserted: true,
        }
    }

    pub fn warning(name: &str, margin: f64, tolerance: f64) -> Self {
        Self {
            asserted: false,
            ..Self::new(name, margin, tolerance)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndReport {
    pub end: End,
    pub fp_symbolic: Vec<FinitePartResult>,
    pub fp_numeric: Vec<FinitePartResult>,
    /// Area of the discrete boundary metric.
    pub h0_area: f64,
    /// `int det(1 +- A) / 4 dg0`.
    pub h0_density_area: f64,
    pub h0_curvature_max: f64,
    pub h0_curvature_min: f64,
    /// See [`crate::foliation::BoundaryMetric::repaired_edges`].
    pub h0_repaired_edges: usize,
    pub uniformization_iterations: usize,
    pub uniformization_residual: f64,
    pub hf_area: f64,
    /// `c = sqrt(area(h_F) / area(h0))`.
    pub c: f64,
    pub shift: f64,
    pub shift_path: f64,
    pub dilation_shift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub end: End,
    pub c: f64,
    /// `0 <= -pi chi ln c`.
    pub dilation: Verdict,
    /// `Vol_R(c^2 h0) <= Vol_R(h_F)` on this end.
    pub maximality: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainVerdict {
    pub steps: Vec<ChainStep>,
    /// `c >= 1` on every end.
    pub c_at_least_one: Verdict,
    /// `Vol_R(h0) + sum dilation <= vol_r_canonical`.
    pub total: Verdict,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub kind: BundleKind,
    pub amplitude: Option<f64>,
    /// Euler characteristic of one boundary component.
    pub chi_end: i64,
    /// `chi(Sigma)` of the two-component boundary.
    pub chi_total: i64,
    pub n_faces: usize,
    pub area_g0: f64,
    pub gauss_residual_sup: f64,
    pub codazzi_residual_sup: f64,
    pub ks: KsSweep,
    pub t_star: f64,
    pub vol_r_h0: f64,
    pub ends: Vec<EndReport>,
    pub vol_r_canonical: f64,
    pub chain: ChainVerdict,
    pub verdicts: Vec<Verdict>,
    pub fuchsian: bool,
}

impl VolumeReport {
    /// Every asserted verdict holds.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed || !v.asserted)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        crate::mesh::io::write(path, &self.to_json()?)
    }
}

fn end_report(bundle: &SurfaceBundle, end: End, opts: &VolumeOptions) -> Result<EndReport> {
    let mesh = &bundle.mesh;
    let fp_symbolic = opts.fp_t.iter().map(|&t| riesz_fp_symbolic(bundle, t, end)).collect();
    let fp_numeric = opts
        .fp_t
        .iter()
        .map(|&t| riesz_fp_numeric(bundle, t, end, &opts.z_grid, opts.max_condition))
        .collect::<Result<Vec<_>>>()?;
    let h0 = boundary_metric(bundle, end)?;
    let sol = uniformize(mesh, &h0.metric, -4.0, &NewtonOptions::from(&opts.tolerances))?;
    let h0_area = h0.metric.total_area(mesh);
    let hf_area = sol.metric.total_area(mesh);
    let c = (hf_area / h0_area).sqrt();
    Ok(EndReport {
        end,
        fp_symbolic,
        fp_numeric,
        h0_area,
        h0_density_area: h0.density_area(bundle),
        h0_curvature_max: h0.curvature.max_pointwise(),
        h0_curvature_min: h0.curvature.min_pointwise(),
        h0_repaired_edges: h0.repaired_edges,
        uniformization_iterations: sol.iterations,
        uniformization_residual: sol.curvature_error,
        hf_area,
        c,
        shift: conformal_volume_shift(mesh, &h0.metric, &sol.omega)?,
        shift_path: conformal_volume_shift_path(mesh, &h0.metric, &sol.omega, opts.path_nodes)?,
        dilation_shift: dilation_shift(bundle.chi(), c)?,
    })
}

fn chain_from(ends: &[EndReport], vol_r_h0: f64, vol_r_canonical: f64, tol: f64) -> ChainVerdict {
    let steps: Vec<ChainStep> = ends
        .iter()
        .map(|e| ChainStep {
            end: e.end,
            c: e.c,
            dilation: Verdict::new("dilation", e.dilation_shift, tol),
            maximality: Verdict::new("maximality", e.shift - e.dilation_shift, tol),
        })
        .collect();
    let c_min = ends.iter().map(|e| e.c).fold(f64::INFINITY, f64::min);
    let dilation: f64 = ends.iter().map(|e| e.dilation_shift).sum();
    let c_at_least_one = Verdict::new("c_at_least_one", c_min - 1.0, tol);
    let total = Verdict::new("chain_total", vol_r_canonical - (vol_r_h0 + dilation), tol);
    let passed = c_at_least_one.passed
        && total.passed
        && steps.iter().all(|s| s.dilation.passed && s.maximality.passed);
    ChainVerdict {
        steps,
        c_at_least_one,
        total,
        passed,
    }
}

/// `Vol_R(X, g)` normalized by the curvature -4 metrics at infinity.
pub fn renormalized_volume_canonical(bundle: &SurfaceBundle, opts: &VolumeOptions) -> Result<VolumeReport> {
    opts.validate()?;
    let tol = &opts.tolerances;
    let chi = bundle.chi();
    let area_g0 = bundle.g0.total_area(&bundle.mesh);
    let ks = vol_ks_sweep(bundle, &opts.t_grid);
    let t_star = opts.t_star();
    let vol_r_h0 = vol_ks(bundle, t_star);
    let ends = End::BOTH
        .iter()
        .map(|&e| end_report(bundle, e, opts))
        .collect::<Result<Vec<_>>>()?;
    let vol_r_canonical = vol_r_h0 + ends.iter().map(|e| e.shift).sum::<f64>();
    let chain = chain_from(&ends, vol_r_h0, vol_r_canonical, tol.volume);

    let kappa_max = ends.iter().map(|e| e.h0_curvature_max).fold(f64::NEG_INFINITY, f64::max);
    let area_max = ends.iter().map(|e| e.h0_area).fold(f64::NEG_INFINITY, f64::max);
    let t_max = opts.t_grid.iter().copied().fold(0.0, f64::max);
    let fuchsian = bundle.shape.entries.iter().all(|a| a.trace() == 0.0 && a.det() == 0.0);
    // The pointwise curvature bound is a diagnostic: with a shape operator
    // that only satisfies Codazzi approximately it fails near the zeros of
    // the principal line field, while the volume inequalities do not depend
    // on it.
    let mut verdicts = vec![
        Verdict::new("gauss_equation", -bundle.gauss_residual_sup(), tol.gauss),
        Verdict::warning("curvature_bound", -4.0 - kappa_max, tol.curvature_bound),
        Verdict::new("area_bound", -PI * chi as f64 / 2.0 - area_max, tol.volume),
        Verdict::new("t_independence", 0.0 - ks.spread, tol.volume * (1.0 + (2.0 * t_max).exp())),
        Verdict::new("chain", chain_min_margin(&chain), tol.volume),
        Verdict::new("positivity", vol_r_canonical, tol.volume * area_g0),
    ];
    if fuchsian {
        verdicts.push(Verdict::new("fuchsian_equality", -vol_r_canonical.abs(), tol.volume));
    }
    Ok(VolumeReport {
        kind: bundle.kind,
        amplitude: bundle.meta.amplitude,
        chi_end: chi,
        chi_total: 2 * chi,
        n_faces: bundle.mesh.n_faces(),
        area_g0,
        gauss_residual_sup: bundle.gauss_residual_sup(),
        codazzi_residual_sup: bundle.codazzi_residual_sup(),
        ks,
        t_star,
        vol_r_h0,
        ends,
        vol_r_canonical,
        chain,
        verdicts,
        fuchsian,
    })
}

fn chain_min_margin(chain: &ChainVerdict) -> f64 {
    chain
        .steps
        .iter()
        .flat_map(|s| [s.dilation.margin, s.maximality.margin])
        .chain([chain.c_at_least_one.margin, chain.total.margin])
        .fold(f64::INFINITY, f64::min)
}

/// The two-step comparison `Vol_R(h0) <= Vol_R(c^2 h0) <= Vol_R(h_F)`.
pub fn inequality_chain(bundle: &SurfaceBundle, opts: &VolumeOptions) -> Result<ChainVerdict> {
    Ok(renormalized_volume_canonical(bundle, opts)?.chain)
}

/// One row per leaf: `t, vol(K_t), int H over both ends, vol_ks`.
pub fn ks_table(bundle: &SurfaceBundle, grid: &[f64]) -> Vec<[f64; 4]> {
    grid.iter()
        .map(|&t| {
            let h: f64 = End::BOTH.iter().map(|&e| mean_curvature_integral(bundle, e, t)).sum();
            [t, compact_volume(bundle, t), h, vol_ks(bundle, t)]
        })
        .collect()
}
