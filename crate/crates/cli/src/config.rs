//! Run configuration: command-line flags layered over an optional flat
//! `key = value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use renvol::{Tolerances, VolumeOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Fuchsian,
    AlmostFuchsian,
}

/// Flags shared by every subcommand. Each one may also be given in the
/// config file under the flag's long name (`t-grid = 0, 1, 2`); flags win.
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// Closed triangle mesh (OFF or OBJ)
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Bundle JSON written by `gen`
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Peak principal curvature `s` in [0, 1)
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Comma-separated leaf distances, e.g. `0,0.5,1`
    #[arg(long)]
    pub t_grid: Option<String>,
    /// Comma-separated Riesz parameters, all > 2
    #[arg(long)]
    pub z_grid: Option<String>,
    /// Tolerance override `name=value` (repeatable), e.g. `gauss=1e-5`
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized recipes and sweeps
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mesh: Option<PathBuf>,
    pub bundle: Option<PathBuf>,
    pub kind: Kind,
    pub amplitude: f64,
    pub volume: VolumeOptions,
    pub out: PathBuf,
    pub seed: Option<u64>,
    /// Leftover file keys, for subcommand-specific settings.
    pub extra: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs, file: Option<&Path>) -> Result<Self> {
        let mut kv = match file {
            Some(p) => parse_file(p)?,
            None => BTreeMap::new(),
        };
        let mut take = |key: &str| kv.remove(key);

        let path = |flag: &Option<PathBuf>, v: Option<String>| flag.clone().or(v.map(PathBuf::from));
        let mesh = path(&args.mesh, take("mesh"));
        let bundle = path(&args.bundle, take("bundle"));
        let out = path(&args.out, take("out")).unwrap_or_else(|| PathBuf::from("."));
        let kind = match (args.kind, take("kind")) {
            (Some(k), _) => k,
            (None, Some(v)) => Kind::from_str(&v, true).map_err(|e| anyhow::anyhow!("config kind: {e}"))?,
            (None, None) => Kind::AlmostFuchsian,
        };
        let amplitude = match (args.amplitude, take("amplitude")) {
            (Some(a), _) => a,
            (None, Some(v)) => parse_f64("amplitude", &v)?,
            (None, None) => 0.5,
        };
        if !(0.0..1.0).contains(&amplitude) {
            bail!("amplitude must lie in [0, 1), got {amplitude}");
        }
        let seed = match (args.seed, take("seed")) {
            (Some(s), _) => Some(s),
            (None, Some(v)) => Some(v.trim().parse().with_context(|| format!("config seed {v:?}"))?),
            (None, None) => None,
        };

        let mut volume = VolumeOptions::default();
        if let Some(g) = args.t_grid.clone().or(take("t-grid")) {
            volume.t_grid = parse_grid("t-grid", &g)?;
        }
        if let Some(g) = args.z_grid.clone().or(take("z-grid")) {
            volume.z_grid = parse_grid("z-grid", &g)?;
        }
        let mut overrides: Vec<(String, String)> = Vec::new();
        for key in kv.keys().filter(|k| k.starts_with("tol.")).cloned().collect::<Vec<_>>() {
            let v = kv.remove(&key).expect("key just listed");
            overrides.push((key["tol.".len()..].to_string(), v));
        }
        for t in &args.tol {
            let (k, v) = t
                .split_once('=')
                .with_context(|| format!("--tol expects NAME=VALUE, got {t:?}"))?;
            overrides.push((k.trim().to_string(), v.trim().to_string()));
        }
        volume.tolerances = apply_tolerances(volume.tolerances, &overrides)?;
        volume.validate()?;

        Ok(Self {
            mesh,
            bundle,
            kind,
            amplitude,
            volume,
            out,
            seed,
            extra: kv,
        })
    }

    pub fn require_mesh(&self) -> Result<&Path> {
        self.mesh.as_deref().context("--mesh is required")
    }

    pub fn require_bundle(&self) -> Result<&Path> {
        self.bundle.as_deref().context("--bundle is required")
    }

    pub fn out_file(&self, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("creating output directory {}", self.out.display()))?;
        Ok(self.out.join(name))
    }
}

/// `key = value` per line; `#` starts a comment.
pub fn parse_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse_pairs(&text).with_context(|| format!("in config {}", path.display()))
}

pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key = value", i + 1);
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_f64(what: &str, s: &str) -> Result<f64> {
    s.trim().parse().with_context(|| format!("{what}: {s:?} is not a number"))
}

pub fn parse_grid(what: &str, s: &str) -> Result<Vec<f64>> {
    let grid = s
        .split(',')
        .map(|x| parse_f64(what, x))
        .collect::<Result<Vec<_>>>()?;
    if grid.is_empty() {
        bail!("{what} is empty");
    }
    Ok(grid)
}

/// Sets tolerance fields by name through their serde representation.
fn apply_tolerances(base: Tolerances, overrides: &[(String, String)]) -> Result<Tolerances> {
    let mut value = serde_json::to_value(base)?;
    let fields = value.as_object_mut().expect("tolerances serialize to an object");
    for (k, v) in overrides {
        let Some(slot) = fields.get_mut(k) else {
            let known: Vec<&String> = fields.keys().collect();
            bail!("unknown tolerance {k:?}; expected one of {known:?}");
        };
        *slot = if slot.is_u64() {
            serde_json::Value::from(v.parse::<u64>().with_context(|| format!("tolerance {k}: {v:?}"))?)
        } else {
            serde_json::Value::from(parse_f64(k, v)?)
        };
    }
    let tol: Tolerances = serde_json::from_value(value)?;
    tol.validate()?;
    Ok(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("run.cfg");
        std::fs::write(&file, "amplitude = 0.3\nt-grid = 0, 1\ntol.gauss = 1e-5  # looser\nseed = 4\n").unwrap();
        let args = RunArgs {
            amplitude: Some(0.6),
            ..Default::default()
        };
        let c = RunConfig::resolve(&args, Some(&file)).unwrap();
        assert_eq!(c.amplitude, 0.6);
        assert_eq!(c.volume.t_grid, vec![0.0, 1.0]);
        assert_eq!(c.volume.tolerances.gauss, 1e-5);
        assert_eq!(c.seed, Some(4));
    }

    #[test]
    fn rejects_bad_values() {
        let bad = |args: RunArgs| RunConfig::resolve(&args, None).is_err();
        assert!(bad(RunArgs {
            amplitude: Some(1.2),
            ..Default::default()
        }));
        assert!(bad(RunArgs {
            tol: vec!["gauss=-1".into()],
            ..Default::default()
        }));
        assert!(bad(RunArgs {
            tol: vec!["nonsense=1".into()],
            ..Default::default()
        }));
        assert!(bad(RunArgs {
            z_grid: Some("1,3,4,5,6,7".into()),
            ..Default::default()
        }));
        assert!(parse_pairs("no equals sign").is_err());
    }

    #[test]
    fn integer_tolerance_fields_stay_integers() {
        let t = apply_tolerances(Tolerances::default(), &[("max_newton_iter".into(), "7".into())]).unwrap();
        assert_eq!(t.max_newton_iter, 7);
        assert!(apply_tolerances(Tolerances::default(), &[("max_newton_iter".into(), "0.5".into())]).is_err());
    }
}
