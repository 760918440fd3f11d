//! Volume functionals of the funnel foliation and the canonical
//! renormalized volume.

mod finite_part;
mod report;
mod shift;
mod volume;

pub use finite_part::{
    funnel_integral, leaf_modes, riesz_fp_numeric, riesz_fp_symbolic, FinitePartResult, GrowthCoeffs,
};
pub use report::{
    inequality_chain, ks_table, renormalized_volume_canonical, ChainStep, ChainVerdict, EndReport, Verdict,
    VolumeOptions, VolumeReport,
};
pub use shift::{conformal_volume_shift, conformal_volume_shift_path, dilation_shift};
pub use volume::{compact_volume, mean_curvature_integral, vol_ks, vol_ks_sweep, KsSweep};
