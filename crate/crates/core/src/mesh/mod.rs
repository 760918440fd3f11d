//! Discrete surfaces: combinatorics, intrinsic metrics, curvature, and the
//! conformal (vertex-scaling) solver.

mod conformal;
mod curvature;
pub mod io;
mod metric;
mod trimesh;

pub use conformal::{
    prescribe_curvature, uniformize, ConformalSolution, CurvatureProblem, Evaluation, NewtonOptions,
};
pub use curvature::{
    conformal_scale, cotan_weights, dirichlet_energy, hodge_split, integrate_face, integrate_vertex,
    vertex_curvature, CurvatureField,
};
pub use io::load_mesh;
pub use metric::{induced_metric, triangle_area, DiscreteMetric, TriangleGeometry, VertexField};
pub use trimesh::TriMesh;
