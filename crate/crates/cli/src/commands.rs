use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use renvol::bundle::{load_bundle, make_almost_fuchsian, make_fuchsian, principal_curvatures, save_bundle};
use renvol::foliation::End;
use renvol::mesh::io::{load_metric, save_field, save_metric, save_off};
use renvol::mesh::{induced_metric, load_mesh, uniformize, NewtonOptions};
use renvol::renvol::{
    funnel_integral, ks_table, renormalized_volume_canonical, riesz_fp_numeric, riesz_fp_symbolic, Verdict,
    VolumeReport,
};
use renvol::table::{save_csv, save_csv_with_footer};
use renvol::{LambdaRecipe, SurfaceBundle};
use serde::Serialize;

use crate::config::{Kind, RunConfig};

/// Name of the mesh copy stored next to a generated bundle.
const MESH_COPY: &str = "mesh.off";

fn end_code(end: End) -> f64 {
    end.sign()
}

fn status(v: &Verdict) -> &'static str {
    match (v.passed, v.asserted) {
        (true, _) => "PASS",
        (false, true) => "FAIL",
        (false, false) => "WARN",
    }
}

fn build_bundle(cfg: &RunConfig, mesh_path: &Path) -> Result<SurfaceBundle> {
    let mesh = load_mesh(mesh_path)?;
    let seed_metric = induced_metric(&mesh)?;
    let tol = &cfg.volume.tolerances;
    Ok(match cfg.kind {
        Kind::Fuchsian => make_fuchsian(mesh, &seed_metric, tol)?,
        Kind::AlmostFuchsian => {
            let recipe = match cfg.seed {
                Some(seed) => LambdaRecipe::random(&mesh, cfg.amplitude, &mut ChaCha8Rng::seed_from_u64(seed))?,
                None => LambdaRecipe::new(cfg.amplitude),
            };
            make_almost_fuchsian(mesh, &seed_metric, &recipe, tol)?
        }
    })
}

/// Writes `bundle.json` and a copy of the mesh into the output directory.
pub fn gen(cfg: &RunConfig) -> Result<bool> {
    let bundle = build_bundle(cfg, cfg.require_mesh()?)?;
    save_off(&bundle.mesh, cfg.out_file(MESH_COPY)?)?;
    let path = cfg.out_file("bundle.json")?;
    save_bundle(&bundle, Path::new(MESH_COPY), &path)?;
    let sup_lambda = principal_curvatures(&bundle).iter().fold(0.0f64, |m, p| m.max(p.0.abs()));
    println!("wrote {}", path.display());
    println!("  kind            {}", bundle.kind);
    println!("  faces           {}", bundle.mesh.n_faces());
    println!("  chi             {}", bundle.chi());
    println!("  area(g0)        {:.12}", bundle.g0.total_area(&bundle.mesh));
    println!("  sup lambda      {sup_lambda:.6}");
    println!("  gauss residual  {:.3e}", bundle.gauss_residual_sup());
    println!("  codazzi proxy   {:.3e}", bundle.codazzi_residual_sup());
    Ok(true)
}

fn load(cfg: &RunConfig) -> Result<SurfaceBundle> {
    let path = cfg.require_bundle()?;
    load_bundle(path).with_context(|| format!("loading bundle {}", path.display()))
}

fn print_summary(r: &VolumeReport) {
    println!("Vol_R (canonical)  {:.12}", r.vol_r_canonical);
    println!("Vol_R (h0, t={})    {:.12}", r.t_star, r.vol_r_h0);
    for e in &r.ends {
        println!(
            "  end {}: c = {:.9}, shift = {:.9}, area(h0) = {:.9}, max kappa(h0) = {:.4}",
            e.end, e.c, e.shift, e.h0_area, e.h0_curvature_max
        );
    }
    for v in &r.verdicts {
        println!("  {:<4} {:<18} margin {:+.3e} (tol {:.1e})", status(v), v.name, v.margin, v.tolerance);
    }
}

pub fn volr(cfg: &RunConfig) -> Result<bool> {
    let bundle = load(cfg)?;
    if let Err(e) = bundle.validate(cfg.volume.tolerances.gauss) {
        println!("WARN bundle does not validate: {e}");
    }
    let report = renormalized_volume_canonical(&bundle, &cfg.volume)?;
    report.save_json(&cfg.out_file("report.json")?)?;
    let ks: Vec<Vec<f64>> = ks_table(&bundle, &cfg.volume.t_grid).iter().map(|r| r.to_vec()).collect();
    save_csv(&cfg.out_file("ks.csv")?, &["t", "vol_core", "mean_curvature_integral", "vol_ks"], &ks)?;
    let mut fp_rows = Vec::new();
    for e in &report.ends {
        for (s, n) in e.fp_symbolic.iter().zip(&e.fp_numeric) {
            fp_rows.push(vec![
                end_code(e.end),
                s.t,
                s.fp,
                n.fp,
                s.pole_residue,
                n.pole_residue,
                n.fit_residual.unwrap_or(f64::NAN),
                n.condition.unwrap_or(f64::NAN),
            ]);
        }
    }
    save_csv(
        &cfg.out_file("fp.csv")?,
        &["end", "t", "fp_symbolic", "fp_numeric", "pole_symbolic", "pole_numeric", "fit_residual", "condition"],
        &fp_rows,
    )?;
    print_summary(&report);
    let passed = report.passed();
    println!("{}", if passed { "verdict PASS" } else { "verdict FAIL" });
    Ok(passed)
}

pub fn sweep(cfg: &RunConfig) -> Result<bool> {
    let bundle = load(cfg)?;
    let opts = &cfg.volume;
    let tol = &opts.tolerances;

    let rows: Vec<Vec<f64>> = ks_table(&bundle, &opts.t_grid).iter().map(|r| r.to_vec()).collect();
    let vals: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    let spread = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max) - vals.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = opts.t_star();
    let spread_tol = tol.volume * (1.0 + (2.0 * t_max).exp());
    save_csv_with_footer(
        &cfg.out_file("sweep_t.csv")?,
        &["t", "vol_core", "mean_curvature_integral", "vol_ks"],
        &rows,
        &[("spread".into(), spread)],
    )?;

    let mut z_rows = Vec::new();
    let mut footer = Vec::new();
    let mut fp_err = 0.0f64;
    for end in End::BOTH {
        for &t in &opts.fp_t {
            let num = riesz_fp_numeric(&bundle, t, end, &opts.z_grid, opts.max_condition)?;
            let sym = riesz_fp_symbolic(&bundle, t, end);
            for &z in &opts.z_grid {
                z_rows.push(vec![
                    end_code(end),
                    t,
                    z,
                    funnel_integral(&bundle, t, end, z)?,
                    num.growth_coeffs.evaluate(t, z),
                ]);
            }
            footer.push((format!("fp_numeric[{end};t={t}]"), num.fp));
            footer.push((format!("fp_symbolic[{end};t={t}]"), sym.fp));
            fp_err = fp_err.max((num.fp - sym.fp).abs() / sym.fp.abs().max(1.0));
        }
    }
    save_csv_with_footer(
        &cfg.out_file("sweep_z.csv")?,
        &["end", "t", "z", "integral", "fitted_model"],
        &z_rows,
        &footer,
    )?;

    let checks = [
        Verdict::new("t_spread", -spread, spread_tol),
        Verdict::new("fp_numeric_vs_symbolic", -fp_err, tol.cross_rel),
    ];
    for v in &checks {
        println!("  {:<4} {:<24} {:.3e} (tol {:.1e})", status(v), v.name, -v.margin, v.tolerance);
    }
    Ok(checks.iter().all(|v| v.passed))
}

pub fn uniformize_cmd(cfg: &RunConfig, metric: Option<&Path>, target: f64) -> Result<bool> {
    let mesh = load_mesh(cfg.require_mesh()?)?;
    let base = match metric {
        Some(p) => load_metric(&mesh, p).with_context(|| format!("loading metric {}", p.display()))?,
        None => induced_metric(&mesh)?,
    };
    let tol = cfg.volume.tolerances;
    let sol = uniformize(&mesh, &base, target, &NewtonOptions::from(&tol))?;
    save_metric(&mesh, &sol.metric, cfg.out_file("metric.json")?)?;
    save_field(&sol.omega, cfg.out_file("omega.json")?)?;
    println!("target curvature   {target}");
    println!("newton iterations  {}", sol.iterations);
    println!("residual (sup)     {:.3e}", sol.curvature_error);
    println!("sup |omega|        {:.6e}", sol.omega.sup_abs());
    println!("area               {:.12}", sol.metric.total_area(&mesh));
    Ok(sol.curvature_error <= tol.solver_residual)
}

#[derive(Serialize)]
struct CheckRow {
    label: String,
    amplitude: f64,
    vol_r_canonical: f64,
    passed: bool,
    verdicts: Vec<Verdict>,
}

/// Reports on the Fuchsian bundle, the graded amplitudes and `random`
/// randomized recipes.
pub fn check(cfg: &RunConfig, random: usize) -> Result<bool> {
    let mesh_path = cfg.require_mesh()?;
    let mut jobs: Vec<(String, RunConfig)> = vec![(
        "fuchsian".into(),
        RunConfig {
            kind: Kind::Fuchsian,
            amplitude: 0.0,
            seed: None,
            ..cfg.clone()
        },
    )];
    for s in [0.25, 0.5, 0.75] {
        jobs.push((
            format!("s={s}"),
            RunConfig {
                kind: Kind::AlmostFuchsian,
                amplitude: s,
                seed: None,
                ..cfg.clone()
            },
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    for i in 0..random {
        let seed = rand::Rng::random::<u64>(&mut rng);
        let s = rand::Rng::random_range(&mut rng, 0.01..0.9);
        jobs.push((
            format!("random#{i}"),
            RunConfig {
                kind: Kind::AlmostFuchsian,
                amplitude: s,
                seed: Some(seed),
                ..cfg.clone()
            },
        ));
    }
    let mut rows = Vec::new();
    let mut all = true;
    for (label, job) in &jobs {
        let row = match build_bundle(job, mesh_path).and_then(|b| Ok(renormalized_volume_canonical(&b, &job.volume)?)) {
            Ok(r) => {
                let failing: Vec<String> = r
                    .verdicts
                    .iter()
                    .filter(|v| !v.passed)
                    .map(|v| format!("{} {}", status(v), v.name))
                    .collect();
                println!(
                    "{} {label:<10} s={:.3} Vol_R={:.9} {}",
                    if r.passed() { "PASS" } else { "FAIL" },
                    job.amplitude,
                    r.vol_r_canonical,
                    failing.join(", ")
                );
                CheckRow {
                    label: label.clone(),
                    amplitude: r.amplitude.unwrap_or(0.0),
                    vol_r_canonical: r.vol_r_canonical,
                    passed: r.passed(),
                    verdicts: r.verdicts,
                }
            }
            Err(e) => {
                println!("FAIL {label:<10} s={:.3} error: {e:#}", job.amplitude);
                CheckRow {
                    label: label.clone(),
                    amplitude: job.amplitude,
                    vol_r_canonical: f64::NAN,
                    passed: false,
                    verdicts: Vec::new(),
                }
            }
        };
        all &= row.passed;
        rows.push(row);
    }
    let path = cfg.out_file("check.json")?;
    std::fs::write(&path, serde_json::to_string_pretty(&rows)?).with_context(|| format!("writing {}", path.display()))?;
    if rows.is_empty() {
        bail!("nothing to check");
    }
    Ok(all)
}
