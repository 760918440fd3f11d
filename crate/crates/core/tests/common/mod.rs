#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renvol::bundle::{make_almost_fuchsian, make_fuchsian};
use renvol::mesh::{induced_metric, load_mesh, DiscreteMetric, TriMesh};
use renvol::{LambdaRecipe, SurfaceBundle, Tolerances, VertexField};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn shipped_mesh() -> TriMesh {
    load_mesh(fixture_path("genus2_n5.off")).expect("shipped fixture loads")
}

pub fn seed_metric(mesh: &TriMesh) -> DiscreteMetric {
    induced_metric(mesh).expect("embedded fixture")
}

pub fn fuchsian(mesh: &TriMesh) -> SurfaceBundle {
    make_fuchsian(mesh.clone(), &seed_metric(mesh), &Tolerances::default()).expect("fuchsian bundle")
}

pub fn almost(mesh: &TriMesh, s: f64) -> SurfaceBundle {
    make_almost_fuchsian(mesh.clone(), &seed_metric(mesh), &LambdaRecipe::new(s), &Tolerances::default())
        .expect("almost-Fuchsian bundle")
}

/// Bundle from a randomized recipe, amplitude drawn from `(0.01, s_max)`.
pub fn random_bundle(mesh: &TriMesh, seed: u64, s_max: f64) -> SurfaceBundle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = rng.random_range(0.01..s_max);
    let recipe = LambdaRecipe::random(mesh, s, &mut rng).expect("recipe");
    make_almost_fuchsian(mesh.clone(), &seed_metric(mesh), &recipe, &Tolerances::default())
        .unwrap_or_else(|e| panic!("seed {seed}, amplitude {s}: {e}"))
}

/// Sum of a few random low-frequency plane waves in the embedding, scaled to
/// sup-norm `amp`.
pub fn smooth_field(mesh: &TriMesh, rng: &mut impl Rng, amp: f64) -> VertexField {
    let pos = mesh.positions().expect("embedded mesh");
    let waves: Vec<([f64; 3], f64, f64)> = (0..4)
        .map(|_| {
            let k = [
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
            ];
            (k, rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(-1.0..1.0))
        })
        .collect();
    let raw: Vec<f64> = pos
        .iter()
        .map(|p| {
            waves
                .iter()
                .map(|(k, phase, c)| c * (k[0] * p[0] + k[1] * p[1] + k[2] * p[2] + phase).sin())
                .sum()
        })
        .collect();
    let top = raw.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-12);
    VertexField::new(raw.iter().map(|x| amp * x / top).collect()).expect("finite field")
}
