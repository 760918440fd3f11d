//! Renormalized volume of almost-Fuchsian manifolds from discrete surface
//! data: a triangulated minimal surface with metric `g0` and shape operator
//! `A`, its equidistant foliation, and the volume functionals built on it.

// `!(x > 0.0)` is used on purpose so that NaN lands in the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bundle;
pub mod error;
pub mod fixtures;
pub mod foliation;
pub mod mesh;
pub mod renvol;
pub mod table;
pub mod tolerances;

pub use bundle::{BundleKind, LambdaRecipe, ShapeField, SurfaceBundle, Sym2};
pub use error::{Error, Result, SolveError};
pub use foliation::{BoundaryMetric, End, FoliationSample};
pub use mesh::{CurvatureField, DiscreteMetric, TriMesh, VertexField};
pub use renvol::{FinitePartResult, VolumeOptions, VolumeReport};
pub use tolerances::Tolerances;
