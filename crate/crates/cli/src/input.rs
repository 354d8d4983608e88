//! Reading chains, metric spaces and field descriptions.

use currentlab::current::{Anchor, Field};
use currentlab::error::{Error, Result};
use currentlab::io::{self, ChainJson};
use currentlab::{FiniteMetricSpace, PLFunction, SimplicialCurrent};
use serde_json::Value;
use std::path::Path;
use std::sync::Arc;

/// Reads Chain JSON, the `chain` member of a command report, or an OFF mesh.
pub fn chain(path: &Path) -> Result<SimplicialCurrent> {
    let text = io::read_text(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("off")) {
        return io::parse_off(&text);
    }
    // command reports wrap their chain as {"chain": ..., "summary": ...}
    if let Ok(Value::Object(map)) = serde_json::from_str::<Value>(&text) {
        if let Some(inner) = map.get("chain") {
            let cj: ChainJson = serde_json::from_value(inner.clone())
                .map_err(|e| Error::Parse { line: 0, column: 0, message: format!("chain member: {e}") })?;
            return io::chain_from_json(&cj);
        }
    }
    io::parse_chain(&text)
}

/// Distance CSV (square), point CSV, or point-set JSON.
pub fn metric_space(path: &Path) -> Result<FiniteMetricSpace> {
    let text = io::read_text(path)?;
    if text.trim_start().starts_with('{') {
        return Ok(io::parse_point_set(&text)?.space);
    }
    let square = io::parse_distance_csv(&text);
    match square {
        Ok(s) => Ok(s),
        Err(Error::Parse { .. }) | Err(Error::Argument(_)) | Err(Error::Metric(_)) => io::parse_point_cloud(&text),
        Err(e) => Err(e),
    }
}

/// Parses a field: `x<i>` (coordinate i), `dist:<v>` (distance to vertex
/// v), `dist:<a,b,..>` (distance to a point) or `const:<c>`.
pub fn field(spec: &str, t: &SimplicialCurrent) -> Result<PLFunction> {
    let c = t.complex();
    let bad = || Error::Argument(format!("cannot parse field '{spec}' (expected x<i>, dist:<vertex>, dist:<coords> or const:<c>)"));
    if let Some(i) = spec.strip_prefix('x') {
        let axis: usize = i.parse().map_err(|_| bad())?;
        return PLFunction::sample(c.clone(), &Field::Coordinate(axis));
    }
    if let Some(rest) = spec.strip_prefix("const:") {
        let v: f64 = rest.parse().map_err(|_| bad())?;
        return Ok(PLFunction::constant(c.clone(), v));
    }
    if let Some(rest) = spec.strip_prefix("dist:") {
        if rest.contains(',') {
            let p: Vec<f64> = rest.split(',').map(|s| s.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
            return PLFunction::sample(c.clone(), &Field::Distance(Anchor::Coords(p)));
        }
        let v: usize = rest.parse().map_err(|_| bad())?;
        return PLFunction::distance_from_vertex(c.clone(), v);
    }
    Err(bad())
}

pub fn fields(specs: &[String], t: &SimplicialCurrent) -> Result<Vec<PLFunction>> {
    specs.iter().map(|s| field(s, t)).collect()
}

pub fn check_vertex(t: &SimplicialCurrent, v: usize) -> Result<()> {
    let n = t.complex().num_vertices();
    if v >= n {
        return arg(format!("vertex {v} out of range (complex has {n} vertices)"));
    }
    Ok(())
}

pub fn same_complex(a: &SimplicialCurrent, b: &SimplicialCurrent) -> Result<SimplicialCurrent> {
    // chains read from separate files carry equal but distinct complexes
    let ca = a.complex();
    let cb = b.complex();
    if Arc::ptr_eq(ca, cb) {
        return Ok(b.clone());
    }
    let same = ca.num_vertices() == cb.num_vertices()
        && ca.dim() == cb.dim()
        && (0..=ca.dim()).all(|k| ca.count(k) == cb.count(k) && (0..ca.count(k)).all(|i| ca.simplex(k, i) == cb.simplex(k, i)))
        && (0..ca.num_vertices()).all(|v| ca.coords(v) == cb.coords(v));
    if !same {
        return arg("the two chains live on different complexes");
    }
    SimplicialCurrent::new(ca.clone(), b.dim(), b.iter())
}

pub fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
