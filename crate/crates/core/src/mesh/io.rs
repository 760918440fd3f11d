//! ASCII OFF/OBJ mesh IO and the JSON overlays for metrics and vertex fields.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DiscreteMetric, TriMesh, VertexField};
use crate::{Error, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads an OFF or OBJ file, dispatching on the extension.
pub fn load_mesh(path: impl AsRef<Path>) -> Result<TriMesh> {
    let path = path.as_ref();
    let text = read(path)?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("obj") => parse_obj(&text),
        Some("off") => parse_off(&text),
        _ if text.trim_start().starts_with("OFF") => parse_off(&text),
        _ => parse_obj(&text),
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
        line,
        message: format!("expected {what}"),
    })
}

pub fn parse_off(text: &str) -> Result<TriMesh> {
    // (line number, tokens) with comments stripped
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    });
    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let mut counts_line = header.strip_prefix("OFF").ok_or(Error::Parse {
        line: ln,
        message: "missing OFF header".into(),
    })?;
    let mut ln = ln;
    if counts_line.trim().is_empty() {
        let (l, c) = lines.next().ok_or(Error::Parse {
            line: ln,
            message: "missing counts".into(),
        })?;
        counts_line = c;
        ln = l;
    }
    let mut it = counts_line.split_whitespace();
    let nv: usize = parse_num(it.next(), ln, "vertex count")?;
    let nf: usize = parse_num(it.next(), ln, "face count")?;

    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, s) = lines.next().ok_or(Error::Parse {
            line: ln,
            message: "unexpected end of vertex block".into(),
        })?;
        let mut it = s.split_whitespace();
        let p = [
            parse_num(it.next(), l, "x")?,
            parse_num(it.next(), l, "y")?,
            parse_num(it.next(), l, "z")?,
        ];
        positions.push(p);
    }
    let mut faces = Vec::with_capacity(nf);
    for fi in 0..nf {
        let (l, s) = lines.next().ok_or(Error::Parse {
            line: ln,
            message: "unexpected end of face block".into(),
        })?;
        let mut it = s.split_whitespace();
        let arity: usize = parse_num(it.next(), l, "face arity")?;
        if arity != 3 {
            return Err(Error::NonTriangleFace { face: fi, arity });
        }
        faces.push([
            parse_num(it.next(), l, "vertex index")?,
            parse_num(it.next(), l, "vertex index")?,
            parse_num(it.next(), l, "vertex index")?,
        ]);
    }
    TriMesh::new(nv, faces, Some(positions))
}

pub fn parse_obj(text: &str) -> Result<TriMesh> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        let mut it = l.split_whitespace();
        match it.next() {
            Some("v") => positions.push([
                parse_num(it.next(), line, "x")?,
                parse_num(it.next(), line, "y")?,
                parse_num(it.next(), line, "z")?,
            ]),
            Some("f") => {
                let mut idx = Vec::with_capacity(3);
                for tok in it {
                    let v = tok.split('/').next().unwrap_or("");
                    let v: i64 = parse_num(Some(v), line, "vertex index")?;
                    let v = if v < 0 {
                        positions.len() as i64 + v
                    } else {
                        v - 1
                    };
                    if v < 0 {
                        return Err(Error::Parse {
                            line,
                            message: "vertex index out of range".into(),
                        });
                    }
                    idx.push(v as usize);
                }
                if idx.len() != 3 {
                    return Err(Error::NonTriangleFace {
                        face: faces.len(),
                        arity: idx.len(),
                    });
                }
                faces.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    TriMesh::new(positions.len(), faces, Some(positions))
}

pub fn off_string(mesh: &TriMesh) -> Result<String> {
    let pos = mesh.positions().ok_or(Error::MissingEmbedding)?;
    let mut s = String::new();
    writeln!(s, "OFF").unwrap();
    writeln!(s, "{} {} {}", mesh.n_vertices(), mesh.n_faces(), mesh.n_edges()).unwrap();
    for p in pos {
        writeln!(s, "{:?} {:?} {:?}", p[0], p[1], p[2]).unwrap();
    }
    for f in mesh.faces() {
        writeln!(s, "3 {} {} {}", f[0], f[1], f[2]).unwrap();
    }
    Ok(s)
}

pub fn save_off(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &off_string(mesh)?)
}

/// `{"edge_lengths": [[i, j, length], ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricOverlay {
    pub edge_lengths: Vec<(usize, usize, f64)>,
}

impl MetricOverlay {
    pub fn from_metric(mesh: &TriMesh, metric: &DiscreteMetric) -> Self {
        Self {
            edge_lengths: mesh
                .edges()
                .iter()
                .zip(metric.lengths())
                .map(|(&[a, b], &l)| (a, b, l))
                .collect(),
        }
    }

    pub fn to_metric(&self, mesh: &TriMesh) -> Result<DiscreteMetric> {
        let mut lengths = vec![f64::NAN; mesh.n_edges()];
        for &(a, b, l) in &self.edge_lengths {
            let e = mesh.edge_index(a, b).ok_or(Error::UnknownEdge(a, b))?;
            lengths[e] = l;
        }
        if let Some(e) = lengths.iter().position(|l| l.is_nan()) {
            return Err(Error::MissingEdge(mesh.edges()[e]));
        }
        DiscreteMetric::new(mesh, lengths)
    }
}

pub fn load_metric(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<DiscreteMetric> {
    let overlay: MetricOverlay = serde_json::from_str(&read(path.as_ref())?)?;
    overlay.to_metric(mesh)
}

pub fn save_metric(mesh: &TriMesh, metric: &DiscreteMetric, path: impl AsRef<Path>) -> Result<()> {
    let s = serde_json::to_string(&MetricOverlay::from_metric(mesh, metric))?;
    write(path.as_ref(), &s)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<VertexField> {
    let values: Vec<f64> = serde_json::from_str(&read(path.as_ref())?)?;
    VertexField::new(values)
}

pub fn save_field(field: &VertexField, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &serde_json::to_string(field.values())?)
}
