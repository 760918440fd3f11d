use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{BundleKind, BundleMeta, ShapeField, SurfaceBundle, Sym2};
use crate::mesh::io::{write, MetricOverlay};
use crate::mesh::{load_mesh, TriMesh};
use crate::{Error, Result};

/// On-disk bundle; `mesh` is a path, relative paths resolve against the
/// directory of the bundle file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleFile {
    pub mesh: PathBuf,
    pub edge_lengths: Vec<(usize, usize, f64)>,
    /// `[a, b, d]` per face.
    pub shape_field: Vec<[f64; 3]>,
    pub frames: Vec<[f64; 2]>,
    pub kind: BundleKind,
    pub meta: BundleMeta,
}

impl BundleFile {
    pub fn from_bundle(bundle: &SurfaceBundle, mesh_path: &Path) -> Self {
        Self {
            mesh: mesh_path.to_path_buf(),
            edge_lengths: MetricOverlay::from_metric(&bundle.mesh, &bundle.g0).edge_lengths,
            shape_field: bundle.shape.entries.iter().map(|s| [s.a, s.b, s.d]).collect(),
            frames: bundle.shape.frames.clone(),
            kind: bundle.kind,
            meta: bundle.meta.clone(),
        }
    }

    pub fn into_bundle(self, mesh: TriMesh) -> Result<SurfaceBundle> {
        let g0 = MetricOverlay {
            edge_lengths: self.edge_lengths,
        }
        .to_metric(&mesh)?;
        let shape = ShapeField {
            entries: self
                .shape_field
                .iter()
                .map(|&[a, b, d]| Sym2::new(a, b, d))
                .collect(),
            frames: self.frames,
        };
        let mut bundle = SurfaceBundle::new(mesh, g0, shape, self.kind, self.meta)?;
        bundle.mesh_path = Some(self.mesh);
        Ok(bundle)
    }
}

/// Writes the bundle JSON. `mesh_path` is recorded verbatim.
pub fn save_bundle(bundle: &SurfaceBundle, mesh_path: &Path, path: impl AsRef<Path>) -> Result<()> {
    let file = BundleFile::from_bundle(bundle, mesh_path);
    write(path.as_ref(), &serde_json::to_string_pretty(&file)?)
}

pub fn load_bundle(path: impl AsRef<Path>) -> Result<SurfaceBundle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: BundleFile = serde_json::from_str(&text)?;
    let mesh_path = if file.mesh.is_relative() {
        path.parent().unwrap_or(Path::new(".")).join(&file.mesh)
    } else {
        file.mesh.clone()
    };
    let mesh = load_mesh(&mesh_path)?;
    file.into_bundle(mesh)
}
