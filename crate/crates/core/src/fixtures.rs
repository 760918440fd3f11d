//! Test and demo surfaces.
//!
//! The genus-2 fixture is the boundary of a 5 x 3 x 1 slab of unit cubes
//! with two cubes removed, subdivided `n` times per unit and smoothed; the
//! shipped OFF files under `fixtures/` are generated by this module.

use std::collections::HashMap;

use crate::mesh::{DiscreteMetric, TriMesh};

pub fn tetrahedron() -> TriMesh {
    let s = 1.0 / 2f64.sqrt();
    let pos = vec![
        [1.0, 0.0, -s],
        [-1.0, 0.0, -s],
        [0.0, 1.0, s],
        [0.0, -1.0, s],
    ];
    TriMesh::new(4, vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]], Some(pos))
        .expect("tetrahedron is a closed manifold")
}

fn torus_faces(n: usize) -> Vec<[usize; 3]> {
    let idx = |i: usize, j: usize| (i % n) + n * (j % n);
    let mut faces = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (p00, p10, p11, p01) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([p00, p10, p11]);
            faces.push([p00, p11, p01]);
        }
    }
    faces
}

/// Grid coordinates in `[0, 1)^2` of the flat torus vertices.
pub fn flat_torus_coords(n: usize) -> Vec<[f64; 2]> {
    (0..n * n)
        .map(|v| [(v % n) as f64 / n as f64, (v / n) as f64 / n as f64])
        .collect()
}

/// Unit-square flat torus on an `n x n` grid (`n >= 3`), with its flat metric.
pub fn flat_torus(n: usize) -> (TriMesh, DiscreteMetric) {
    assert!(n >= 3);
    let mesh = TriMesh::new(n * n, torus_faces(n), None).expect("torus grid is manifold");
    let h = 1.0 / n as f64;
    let lengths = mesh
        .edges()
        .iter()
        .map(|&[a, b]| {
            let (ai, aj, bi, bj) = (a % n, a / n, b % n, b / n);
            if ai != bi && aj != bj {
                h * 2f64.sqrt()
            } else {
                h
            }
        })
        .collect();
    let metric = DiscreteMetric::new(&mesh, lengths).expect("flat torus metric");
    (mesh, metric)
}

/// Genus-2 surface with `n` subdivisions per unit cube edge (`2 * 50 * n^2` faces).
pub fn genus2(n: usize) -> TriMesh {
    assert!(n >= 2);
    let holes = [(1, 1), (3, 1)];
    let filled = |i: i64, j: i64, k: i64| {
        (0..5).contains(&i) && (0..3).contains(&j) && k == 0 && !holes.contains(&(i, j))
    };
    // (axis, sign, u axis, v axis) with u x v the outward normal
    let dirs: [(usize, i64, usize, usize); 6] = [
        (0, 1, 1, 2),
        (0, -1, 2, 1),
        (1, 1, 2, 0),
        (1, -1, 0, 2),
        (2, 1, 0, 1),
        (2, -1, 1, 0),
    ];
    let n_i = n as i64;
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut lattice: Vec<[i64; 3]> = Vec::new();
    let mut vid = |p: [i64; 3]| {
        *index.entry(p).or_insert_with(|| {
            lattice.push(p);
            lattice.len() - 1
        })
    };
    let mut faces = Vec::new();
    for j in 0..3 {
        for i in 0..5 {
            if !filled(i, j, 0) {
                continue;
            }
            let cell = [i, j, 0];
            for &(axis, sign, ua, va) in &dirs {
                let mut nb = cell;
                nb[axis] += sign;
                if filled(nb[0], nb[1], nb[2]) {
                    continue;
                }
                let mut base = cell.map(|c| c * n_i);
                if sign > 0 {
                    base[axis] += n_i;
                }
                let at = |a: i64, b: i64| {
                    let mut p = base;
                    p[ua] += a;
                    p[va] += b;
                    p
                };
                for b in 0..n_i {
                    for a in 0..n_i {
                        let p00 = vid(at(a, b));
                        let p10 = vid(at(a + 1, b));
                        let p11 = vid(at(a + 1, b + 1));
                        let p01 = vid(at(a, b + 1));
                        faces.push([p00, p10, p11]);
                        faces.push([p00, p11, p01]);
                    }
                }
            }
        }
    }
    let mut pos: Vec<[f64; 3]> = lattice
        .iter()
        .map(|p| [p[0] as f64 / n as f64 - 2.5, p[1] as f64 / n as f64 - 1.5, p[2] as f64 / n as f64 - 0.5])
        .collect();
    let mesh = TriMesh::new(pos.len(), faces, None).expect("voxel boundary is manifold");
    taubin_smooth(&mesh, &mut pos, 2 * n * n);
    mesh.with_positions(pos).expect("one position per vertex")
}

fn taubin_smooth(mesh: &TriMesh, pos: &mut [[f64; 3]], iterations: usize) {
    let nb = mesh.vertex_neighbors();
    for _ in 0..iterations {
        for factor in [0.5, -0.53] {
            let snapshot = pos.to_vec();
            for (v, p) in pos.iter_mut().enumerate() {
                let inv = 1.0 / nb[v].len() as f64;
                for c in 0..3 {
                    let avg = nb[v].iter().map(|&w| snapshot[w][c]).sum::<f64>() * inv;
                    p[c] += factor * (avg - snapshot[v][c]);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::induced_metric;

    #[test]
    fn genus2_topology() {
        for n in [2, 3] {
            let m = genus2(n);
            assert_eq!(m.euler_characteristic(), -2);
            assert_eq!(m.genus(), 2);
            assert_eq!(m.n_faces(), 100 * n * n);
            let metric = induced_metric(&m).unwrap();
            assert!(metric.face_areas(&m).iter().all(|&a| a > 0.0));
        }
    }

    #[test]
    fn torus_topology() {
        let (m, _) = flat_torus(5);
        assert_eq!(m.euler_characteristic(), 0);
        assert_eq!(m.genus(), 1);
    }
}
