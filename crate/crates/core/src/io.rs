//! Reading and writing chains, meshes and metric spaces.
//!
//! Chain JSON:
//!
//! ```json
//! {"complex": {"vertices": [[0, 0], [1, 0], [0, 1]],
//!              "simplices": {"1": [[0, 1], [1, 2], [2, 0]]}},
//!  "current": {"dim": 1, "coeffs": [[0, 1], [1, 1], [2, 1]]}}
//! ```
//!
//! Simplices are oriented by their listed vertex order and coefficients
//! refer to positions in the list of their dimension. The complex may carry
//! a `metric` (default Euclidean), or a `distances` matrix in place of
//! `vertices` for complexes over a finite metric space.

use crate::complex::{Embedding, GeometricComplex};
use crate::current::SimplicialCurrent;
use crate::error::{arg, Error, Result};
use crate::metric::Metric;
use crate::metricspace::FiniteMetricSpace;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub simplices: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CurrentJson {
    pub dim: usize,
    pub coeffs: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChainJson {
    pub complex: ComplexJson,
    pub current: CurrentJson,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    let p = path.as_ref();
    std::fs::read_to_string(p).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))))
}

pub fn parse_chain(text: &str) -> Result<SimplicialCurrent> {
    let cj: ChainJson = serde_json::from_str(text).map_err(json_error)?;
    chain_from_json(&cj)
}

pub fn read_chain(path: impl AsRef<Path>) -> Result<SimplicialCurrent> {
    parse_chain(&read_text(path)?)
}

fn embedding_of(c: &ComplexJson) -> Result<Embedding> {
    match (&c.vertices, &c.distances) {
        (Some(v), None) => {
            if c.labels.is_some() {
                return arg("labels are only allowed with a distance matrix");
            }
            Embedding::with_metric(v, c.metric.clone().unwrap_or(Metric::Euclidean))
        }
        (None, Some(d)) => {
            if c.metric.is_some() {
                return arg("a metric is only allowed with vertex coordinates");
            }
            Ok(Embedding::points(Arc::new(FiniteMetricSpace::new(d.clone(), c.labels.clone())?)))
        }
        (Some(_), Some(_)) => arg("give either vertices or distances, not both"),
        (None, None) => arg("complex needs vertices or distances"),
    }
}

pub fn chain_from_json(cj: &ChainJson) -> Result<SimplicialCurrent> {
    let emb = embedding_of(&cj.complex)?;
    let n = emb.len();
    let mut lists: BTreeMap<usize, &Vec<Vec<usize>>> = BTreeMap::new();
    for (key, list) in &cj.complex.simplices {
        let k: usize = key.parse().map_err(|_| Error::Argument(format!("simplex dimension '{key}' is not an integer")))?;
        for (i, s) in list.iter().enumerate() {
            if s.len() != k + 1 {
                return arg(format!("simplex {i} of dimension {k} has {} vertices", s.len()));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return arg(format!("simplex {i} of dimension {k} uses vertex {v}, but there are {n}"));
            }
        }
        lists.insert(k, list);
    }
    let all: Vec<Vec<usize>> = lists.values().flat_map(|l| l.iter().cloned()).collect();
    let complex = Arc::new(GeometricComplex::new(emb, &all)?);
    let k = cj.current.dim;
    let empty = Vec::new();
    let list = if k == 0 && !lists.contains_key(&0) { &empty } else { lists.get(&k).copied().unwrap_or(&empty) };
    let mut tuples = Vec::with_capacity(cj.current.coeffs.len());
    for &(i, c) in &cj.current.coeffs {
        let s = if k == 0 && list.is_empty() {
            if i >= n {
                return arg(format!("vertex {i} out of range"));
            }
            vec![i]
        } else {
            list.get(i)
                .ok_or_else(|| Error::Argument(format!("coefficient refers to simplex {i} of dimension {k}, which is not listed")))?
                .clone()
        };
        tuples.push((s, c));
    }
    SimplicialCurrent::from_oriented(complex, k, &tuples)
}

/// Chain JSON for a current; simplices are listed in the complex's order
/// with sorted vertices.
pub fn chain_to_json(t: &SimplicialCurrent) -> ChainJson {
    let c = t.complex();
    let n = c.num_vertices();
    let mut complex = ComplexJson { vertices: None, metric: None, distances: None, labels: None, simplices: BTreeMap::new() };
    match c.embedding() {
        Embedding::Coordinates { metric, .. } => {
            complex.vertices = Some((0..n).map(|v| c.coords(v).unwrap().to_vec()).collect());
            if *metric != Metric::Euclidean {
                complex.metric = Some(metric.clone());
            }
        }
        Embedding::Points { space, index } => {
            complex.distances = Some(index.iter().map(|&i| index.iter().map(|&j| space.d(i, j)).collect()).collect());
            complex.labels = space.labels().map(|l| index.iter().map(|&i| l[i].clone()).collect());
        }
    }
    for k in 1..=c.dim() {
        let list = (0..c.count(k)).map(|i| c.simplex(k, i).iter().map(|&v| v as usize).collect()).collect();
        complex.simplices.insert(k.to_string(), list);
    }
    ChainJson { complex, current: CurrentJson { dim: t.dim(), coeffs: t.iter().collect() } }
}

/// Deterministic JSON text: keys sorted, floats in shortest round-trip
/// form, non-finite floats as null.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Argument(format!("serialization failed: {e}")))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Argument(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Point-set JSON for 0-dimensional fillings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PointSetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<f64>>>,
    pub theta: Vec<i64>,
    pub sigma: Vec<i64>,
}

pub struct PointSet {
    pub space: FiniteMetricSpace,
    pub theta: Vec<i64>,
    pub sigma: Vec<i64>,
}

pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let p: PointSetJson = serde_json::from_str(text).map_err(json_error)?;
    let space = match (&p.points, &p.distances) {
        (Some(pts), None) => {
            let dim = pts.first().map_or(0, |x| x.len());
            if let Some(i) = pts.iter().position(|x| x.len() != dim) {
                return arg(format!("point {i} has {} coordinates, expected {dim}", pts[i].len()));
            }
            FiniteMetricSpace::from_points(pts, &p.metric.clone().unwrap_or(Metric::Euclidean))?
        }
        (None, Some(d)) => FiniteMetricSpace::new(d.clone(), None)?,
        _ => return arg("point set needs exactly one of points or distances"),
    };
    if p.theta.len() != space.len() || p.sigma.len() != space.len() {
        return arg(format!("theta and sigma need {} entries", space.len()));
    }
    Ok(PointSet { space, theta: p.theta, sigma: p.sigma })
}

/// Fields of a CSV line with their 1-based starting columns.
fn csv_fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in line.char_indices() {
        if ch == ',' {
            out.push((start, &line[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &line[start..]));
    out.into_iter()
        .map(|(s, f)| {
            let lead = f.len() - f.trim_start().len();
            (s + lead + 1, f.trim())
        })
        .collect()
}

fn parse_rows(text: &str, allow_header: bool) -> Result<(Option<Vec<String>>, Vec<Vec<f64>>)> {
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields = csv_fields(line);
        if allow_header && header.is_none() && rows.is_empty() && fields.iter().all(|(_, f)| f.parse::<f64>().is_err()) {
            header = Some(fields.iter().map(|(_, f)| f.to_string()).collect::<Vec<_>>());
            width = Some(fields.len());
            continue;
        }
        if let Some(w) = width {
            if fields.len() != w {
                return Err(Error::Parse {
                    line: line_no,
                    column: line.len() + 1,
                    message: format!("ragged row: {} fields, expected {w}", fields.len()),
                });
            }
        }
        width = Some(fields.len());
        let mut row = Vec::with_capacity(fields.len());
        for (col, f) in fields {
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                line: line_no,
                column: col,
                message: format!("'{f}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { line: line_no, column: col, message: format!("'{f}' is not finite") });
            }
            row.push(v);
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// n lines of n comma-separated distances, with an optional header row of
/// labels. The result is fully validated.
pub fn parse_distance_csv(text: &str) -> Result<FiniteMetricSpace> {
    let (labels, rows) = parse_rows(text, true)?;
    if rows.is_empty() {
        return Err(Error::Parse { line: 1, column: 1, message: "no rows".into() });
    }
    if rows.len() != rows[0].len() {
        return Err(Error::Parse {
            line: text.lines().count(),
            column: 1,
            message: format!("{} rows for {} columns", rows.len(), rows[0].len()),
        });
    }
    FiniteMetricSpace::new(rows, labels)
}

/// One point per line, d coordinates each.
pub fn parse_point_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let (_, rows) = parse_rows(text, false)?;
    if rows.is_empty() {
        return Err(Error::Parse { line: 1, column: 1, message: "no points".into() });
    }
    Ok(rows)
}

/// Euclidean metric space of a point cloud CSV.
pub fn parse_point_cloud(text: &str) -> Result<FiniteMetricSpace> {
    FiniteMetricSpace::from_points(&parse_point_csv(text)?, &Metric::Euclidean)
}

/// OFF mesh: polygons are fanned into triangles oriented as listed.
pub fn parse_off(text: &str) -> Result<SimplicialCurrent> {
    let mut tokens = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap();
        let mut col = 0;
        for piece in body.split_whitespace() {
            let at = body[col..].find(piece).unwrap() + col;
            tokens.push((ln + 1, at + 1, piece));
            col = at + piece.len();
        }
    }
    let mut it = tokens.into_iter().peekable();
    let eof = || Error::Parse { line: text.lines().count().max(1), column: 1, message: "unexpected end of file".into() };
    match it.next() {
        Some((_, _, "OFF")) => {}
        Some((l, c, t)) => return Err(Error::Parse { line: l, column: c, message: format!("expected OFF, found '{t}'") }),
        None => return Err(eof()),
    }
    let int = |it: &mut std::iter::Peekable<std::vec::IntoIter<(usize, usize, &str)>>| -> Result<usize> {
        let (l, c, t) = it.next().ok_or_else(eof)?;
        t.parse().map_err(|_| Error::Parse { line: l, column: c, message: format!("'{t}' is not a count") })
    };
    let nv = int(&mut it)?;
    let nf = int(&mut it)?;
    let _ne = int(&mut it)?;
    let mut pts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut p = Vec::with_capacity(3);
        for _ in 0..3 {
            let (l, c, t) = it.next().ok_or_else(eof)?;
            p.push(t.parse::<f64>().map_err(|_| Error::Parse { line: l, column: c, message: format!("'{t}' is not a coordinate") })?);
        }
        pts.push(p);
    }
    let mut tris = Vec::new();
    for _ in 0..nf {
        let (l, c, _) = *it.peek().ok_or_else(eof)?;
        let k = int(&mut it)?;
        if k < 3 {
            return Err(Error::Parse { line: l, column: c, message: format!("face with {k} vertices") });
        }
        let mut f = Vec::with_capacity(k);
        for _ in 0..k {
            let (l, c, t) = *it.peek().ok_or_else(eof)?;
            let v = int(&mut it)?;
            if v >= nv {
                return Err(Error::Parse { line: l, column: c, message: format!("vertex {t} out of range") });
            }
            f.push(v);
        }
        for i in 1..k - 1 {
            tris.push((vec![f[0], f[i], f[i + 1]], 1i64));
        }
    }
    let mut simplices: Vec<Vec<usize>> = tris
        .iter()
        .map(|(s, _)| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .collect();
    simplices.sort();
    simplices.dedup();
    let complex = Arc::new(GeometricComplex::new(Embedding::euclidean(&pts)?, &simplices)?);
    SimplicialCurrent::from_oriented(complex, 2, &tris)
}
