use std::collections::HashMap;

type Incidence = (usize, usize, bool);

use crate::{Error, Result};

/// Closed, oriented, manifold triangle mesh.
///
/// Edge `k` of a face is the edge opposite its corner `k`, i.e. the edge
/// between corners `k + 1` and `k + 2` (mod 3).
#[derive(Clone, Debug, PartialEq)]
pub struct TriMesh {
    n_vertices: usize,
    faces: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    face_edges: Vec<[usize; 3]>,
    edge_faces: Vec<[usize; 2]>,
    edge_lookup: HashMap<(usize, usize), usize>,
    positions: Option<Vec<[f64; 3]>>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TriMesh {
    /// Builds and validates a mesh. Faces must be triangles; `positions`,
    /// when given, must have one entry per vertex.
    pub fn new(
        n_vertices: usize,
        faces: Vec<[usize; 3]>,
        positions: Option<Vec<[f64; 3]>>,
    ) -> Result<Self> {
        if let Some(p) = &positions {
            if p.len() != n_vertices {
                return Err(Error::SizeMismatch {
                    what: "vertex positions",
                    expected: n_vertices,
                    got: p.len(),
                });
            }
        }
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= n_vertices {
                    return Err(Error::VertexOutOfRange { face: fi, vertex: v });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::RepeatedVertex { face: fi });
            }
        }

        // (directed half-edge, face, corner opposite)
        let mut incident: HashMap<(usize, usize), Vec<Incidence>> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let a = f[(k + 1) % 3];
                let b = f[(k + 2) % 3];
                incident
                    .entry(key(a, b))
                    .or_default()
                    .push((fi, k, a < b));
            }
        }

        let mut keys: Vec<(usize, usize)> = incident.keys().copied().collect();
        keys.sort_unstable();
        let mut edges = Vec::with_capacity(keys.len());
        let mut edge_faces = Vec::with_capacity(keys.len());
        let mut edge_lookup = HashMap::with_capacity(keys.len());
        let mut face_edges = vec![[usize::MAX; 3]; faces.len()];
        for (ei, k) in keys.iter().enumerate() {
            let inc = &incident[k];
            let edge = [k.0, k.1];
            match inc.len() {
                1 => return Err(Error::OpenBoundary { edge }),
                2 => {}
                n => return Err(Error::NonManifoldEdge { edge, count: n }),
            }
            if inc[0].2 == inc[1].2 {
                return Err(Error::Orientation { edge });
            }
            for &(fi, corner, _) in inc {
                face_edges[fi][corner] = ei;
            }
            edges.push(edge);
            edge_faces.push([inc[0].0, inc[1].0]);
            edge_lookup.insert(*k, ei);
        }

        let mesh = Self {
            n_vertices,
            faces,
            edges,
            face_edges,
            edge_faces,
            edge_lookup,
            positions,
        };
        mesh.check_vertex_links()?;
        Ok(mesh)
    }

    fn check_vertex_links(&self) -> Result<()> {
        let mut next: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n_vertices];
        for f in &self.faces {
            for k in 0..3 {
                next[f[k]].push((f[(k + 1) % 3], f[(k + 2) % 3]));
            }
        }
        for (v, pairs) in next.iter().enumerate() {
            if pairs.is_empty() {
                return Err(Error::IsolatedVertex { vertex: v });
            }
            let map: HashMap<usize, usize> = pairs.iter().copied().collect();
            if map.len() != pairs.len() {
                return Err(Error::VertexLink { vertex: v });
            }
            let start = pairs[0].0;
            let mut cur = start;
            let mut steps = 0;
            loop {
                cur = match map.get(&cur) {
                    Some(&n) => n,
                    None => return Err(Error::VertexLink { vertex: v }),
                };
                steps += 1;
                if cur == start || steps > pairs.len() {
                    break;
                }
            }
            if cur != start || steps != pairs.len() {
                return Err(Error::VertexLink { vertex: v });
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Edge indices of face `f`, ordered so entry `k` is opposite corner `k`.
    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        self.face_edges[f]
    }

    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&key(a, b)).copied()
    }

    pub fn positions(&self) -> Option<&[[f64; 3]]> {
        self.positions.as_deref()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// One-ring neighbours of every vertex (unordered).
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.n_vertices];
        for &[a, b] in &self.edges {
            nb[a].push(b);
            nb[b].push(a);
        }
        nb
    }

    pub fn with_positions(mut self, positions: Vec<[f64; 3]>) -> Result<Self> {
        if positions.len() != self.n_vertices {
            return Err(Error::SizeMismatch {
                what: "vertex positions",
                expected: self.n_vertices,
                got: positions.len(),
            });
        }
        self.positions = Some(positions);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> Vec<[usize; 3]> {
        vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]
    }

    #[test]
    fn tetrahedron_counts() {
        let m = TriMesh::new(4, tetra(), None).unwrap();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (4, 6, 4));
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(m.genus(), 0);
        for f in 0..4 {
            let fe = m.face_edges(f);
            let face = m.faces()[f];
            for k in 0..3 {
                let [a, b] = m.edges()[fe[k]];
                assert!(!(a == face[k] || b == face[k]));
            }
        }
    }

    #[test]
    fn open_boundary_is_rejected() {
        let mut faces = tetra();
        faces.pop();
        assert!(matches!(
            TriMesh::new(4, faces, None),
            Err(Error::OpenBoundary { .. })
        ));
    }

    #[test]
    fn flipped_face_is_rejected() {
        let mut faces = tetra();
        faces[3] = [1, 3, 2];
        assert!(matches!(
            TriMesh::new(4, faces, None),
            Err(Error::Orientation { .. })
        ));
    }

    #[test]
    fn non_manifold_edge_is_rejected() {
        let mut faces = tetra();
        // second tetrahedron sharing edge (0, 1)
        faces.extend([[0, 1, 4], [0, 4, 5], [1, 5, 4], [0, 5, 1]]);
        assert!(matches!(
            TriMesh::new(6, faces, None),
            Err(Error::NonManifoldEdge { .. })
        ));
    }

    #[test]
    fn pinched_vertex_is_rejected() {
        // two tetrahedra sharing only vertex 0
        let mut faces = tetra();
        faces.extend([[0, 5, 4], [0, 4, 6], [0, 6, 5], [4, 5, 6]]);
        assert!(matches!(
            TriMesh::new(7, faces, None),
            Err(Error::VertexLink { vertex: 0 })
        ));
    }
}
