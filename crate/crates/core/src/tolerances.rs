use serde::{Deserialize, Serialize};

/// Library-wide numerical tolerances. Every check in the crate reads its
/// threshold from here so a run can be reconfigured in one place.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Sup-norm bound on pointwise curvature error of a conformal solve.
    pub solver_residual: f64,
    /// Relative tolerance for integral identities.
    pub integral_rel: f64,
    /// Relative tolerance for cross-validation between independent routes.
    pub cross_rel: f64,
    /// Bound on `sup |det A - (kappa0 + 1)|` accepted by the generator.
    pub gauss: f64,
    /// Slack for the pointwise curvature bound on the boundary metric.
    pub curvature_bound: f64,
    /// Slack for the volume inequalities.
    pub volume: f64,
    pub max_newton_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            solver_residual: 1e-8,
            integral_rel: 1e-10,
            cross_rel: 1e-6,
            gauss: 1e-6,
            curvature_bound: 1e-3,
            volume: 1e-6,
            max_newton_iter: 100,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            self.solver_residual,
            self.integral_rel,
            self.cross_rel,
            self.gauss,
            self.curvature_bound,
            self.volume,
        ];
        if all.iter().any(|t| !(t.is_finite() && *t > 0.0)) || self.max_newton_iter == 0 {
            return Err(crate::Error::InvalidArgument(
                "tolerances must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}
