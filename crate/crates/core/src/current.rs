//! Integer chains (simplicial integral currents) and PL functions.

use crate::complex::{sort_with_sign, Compaction, Embedding, GeometricComplex, MAX_VERTS};
use crate::error::{arg, Error, Result};
use crate::linalg;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// A point of the ambient space that distance functions are measured from.
#[derive(Debug, Clone, PartialEq)]
pub enum Anchor {
    /// Coordinates under the complex's metric.
    Coords(Vec<f64>),
    /// Point index in the complex's finite metric space.
    Point(usize),
}

/// A scalar field that can be sampled exactly at the vertices of any
/// complex sharing an embedding type.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Coordinate(usize),
    Distance(Anchor),
}

impl GeometricComplex {
    /// Anchor at vertex `v`, stable under refinement and compaction.
    pub fn anchor(&self, v: usize) -> Anchor {
        match self.embedding() {
            Embedding::Coordinates { .. } => Anchor::Coords(self.coords(v).unwrap().to_vec()),
            Embedding::Points { index, .. } => Anchor::Point(index[v]),
        }
    }

    pub fn distance_to_anchor(&self, v: usize, a: &Anchor) -> Result<f64> {
        match (self.embedding(), a) {
            (Embedding::Coordinates { dim, data, metric }, Anchor::Coords(p)) => {
                if p.len() != *dim {
                    return arg(format!("anchor has {} coordinates, complex has {dim}", p.len()));
                }
                Ok(metric.distance(&data[v * dim..(v + 1) * dim], p))
            }
            (Embedding::Points { space, index }, Anchor::Point(q)) => {
                if *q >= space.len() {
                    return arg(format!("anchor point {q} out of range"));
                }
                Ok(space.d(index[v], *q))
            }
            _ => arg("anchor type does not match the embedding"),
        }
    }
}

/// Real function given by its vertex values, extended linearly over each
/// simplex.
#[derive(Clone)]
pub struct PLFunction {
    complex: Arc<GeometricComplex>,
    values: Vec<f64>,
    lip: OnceLock<f64>,
}

impl fmt::Debug for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PLFunction").field("values", &self.values.len()).finish()
    }
}

impl PLFunction {
    pub fn new(complex: Arc<GeometricComplex>, values: Vec<f64>) -> Result<Self> {
        if values.len() != complex.num_vertices() {
            return arg(format!(
                "{} values for {} vertices",
                values.len(),
                complex.num_vertices()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return arg("PL function values must be finite");
        }
        Ok(PLFunction { complex, values, lip: OnceLock::new() })
    }

    pub fn constant(complex: Arc<GeometricComplex>, c: f64) -> Self {
        let n = complex.num_vertices();
        PLFunction { complex, values: vec![c; n], lip: OnceLock::new() }
    }

    /// Samples a field at every vertex.
    pub fn sample(complex: Arc<GeometricComplex>, field: &Field) -> Result<Self> {
        let n = complex.num_vertices();
        let values = match field {
            Field::Coordinate(i) => {
                let mut out = Vec::with_capacity(n);
                for v in 0..n {
                    match complex.coords(v) {
                        Some(c) if *i < c.len() => out.push(c[*i]),
                        Some(c) => return arg(format!("coordinate {i} out of range for dimension {}", c.len())),
                        None => return arg("coordinate functions need a coordinate embedding"),
                    }
                }
                out
            }
            Field::Distance(a) => (0..n).map(|v| complex.distance_to_anchor(v, a)).collect::<Result<_>>()?,
        };
        Self::new(complex, values)
    }

    /// Distance from vertex `p`: the ambient metric when there is one,
    /// which is always the case for both embedding kinds.
    pub fn distance_from_vertex(complex: Arc<GeometricComplex>, p: usize) -> Result<Self> {
        if p >= complex.num_vertices() {
            return arg(format!("vertex {p} out of range"));
        }
        let a = complex.anchor(p);
        Self::sample(complex, &Field::Distance(a))
    }

    /// Edge-path distance from vertex `p`.
    pub fn graph_distance_from_vertex(complex: Arc<GeometricComplex>, p: usize) -> Result<Self> {
        if p >= complex.num_vertices() {
            return arg(format!("vertex {p} out of range"));
        }
        let d = complex.graph_geodesic_from(p);
        if d.iter().any(|x| !x.is_finite()) {
            return arg("graph distance undefined: complex is disconnected");
        }
        Self::new(complex, d)
    }

    pub fn complex(&self) -> &Arc<GeometricComplex> {
        &self.complex
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, v: usize) -> f64 {
        self.values[v]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Lipschitz constant of the PL extension: the largest gradient norm
    /// over all simplices, which dominates every edge quotient.
    pub fn lip(&self) -> f64 {
        *self.lip.get_or_init(|| pl_lipschitz(&self.complex, &self.values))
    }

    /// Largest |f(a) - f(b)| / |ab| over edges.
    pub fn edge_lip(&self) -> f64 {
        let c = &self.complex;
        (0..c.count(1))
            .map(|e| {
                let s = c.simplex(1, e);
                let len = c.simplex_mass(1, e);
                let df = (self.values[s[1] as usize] - self.values[s[0] as usize]).abs();
                if len > 0.0 {
                    df / len
                } else if df > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.complex.clone(), self.values.iter().map(|&v| g(v)).collect())
    }

    pub fn linear_combination(&self, a: f64, other: &PLFunction, b: f64) -> Result<Self> {
        same_complex(&self.complex, &other.complex)?;
        Self::new(
            self.complex.clone(),
            self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
        )
    }
}

fn pl_lipschitz(c: &GeometricComplex, values: &[f64]) -> f64 {
    let mut lip: f64 = 0.0;
    for e in 0..c.count(1) {
        let s = c.simplex(1, e);
        let len = c.simplex_mass(1, e);
        let df = (values[s[1] as usize] - values[s[0] as usize]).abs();
        if len > 0.0 {
            lip = lip.max(df / len);
        } else if df > 0.0 {
            return f64::INFINITY;
        }
    }
    for k in 2..=c.dim() {
        for i in 0..c.count(k) {
            let s = c.simplex(k, i);
            let g = c.embedding().gram(s);
            let df: Vec<f64> = s[1..].iter().map(|&v| values[v as usize] - values[s[0] as usize]).collect();
            if let Some(x) = linalg::solve(&g, &df, k) {
                let q: f64 = df.iter().zip(&x).map(|(a, b)| a * b).sum();
                if q.is_finite() && q > 0.0 {
                    lip = lip.max(q.sqrt());
                }
            }
        }
    }
    lip
}

pub(crate) fn same_complex(a: &Arc<GeometricComplex>, b: &Arc<GeometricComplex>) -> Result<()> {
    if Arc::ptr_eq(a, b) {
        Ok(())
    } else {
        arg("operands live on different complexes")
    }
}

/// Integer-coefficient oriented k-chain on a geometric complex. A positive
/// coefficient orients a simplex by its ascending vertex order.
#[derive(Clone)]
pub struct SimplicialCurrent {
    complex: Arc<GeometricComplex>,
    dim: usize,
    coeffs: BTreeMap<u32, i64>,
}

impl fmt::Debug for SimplicialCurrent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialCurrent(dim {}, {:?})", self.dim, self.coeffs)
    }
}

impl PartialEq for SimplicialCurrent {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex) && self.dim == other.dim && self.coeffs == other.coeffs
    }
}

impl SimplicialCurrent {
    pub fn zero(complex: Arc<GeometricComplex>, dim: usize) -> Self {
        SimplicialCurrent { complex, dim, coeffs: BTreeMap::new() }
    }

    /// Chain from (simplex index, coefficient) pairs; repeated indices add up.
    pub fn new(complex: Arc<GeometricComplex>, dim: usize, coeffs: impl IntoIterator<Item = (usize, i64)>) -> Result<Self> {
        let count = complex.count(dim);
        if dim > complex.dim() && dim > 0 {
            return arg(format!("dimension {dim} exceeds complex dimension {}", complex.dim()));
        }
        let mut map = BTreeMap::new();
        for (i, c) in coeffs {
            if i >= count {
                return arg(format!("{dim}-simplex index {i} out of range ({count} simplices)"));
            }
            *map.entry(i as u32).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        Ok(SimplicialCurrent { complex, dim, coeffs: map })
    }

    /// Chain from oriented vertex tuples; a tuple in odd order contributes
    /// with flipped sign.
    pub fn from_oriented(complex: Arc<GeometricComplex>, dim: usize, tuples: &[(Vec<usize>, i64)]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(tuples.len());
        for (t, c) in tuples {
            if t.len() != dim + 1 {
                return arg(format!("tuple {t:?} does not have {} vertices", dim + 1));
            }
            match complex.find_oriented(t) {
                Some((i, s)) => pairs.push((i, s * c)),
                None => return arg(format!("simplex {t:?} is not in the complex")),
            }
        }
        Self::new(complex, dim, pairs)
    }

    /// Sum of all k-simplices with coefficient 1.
    pub fn fundamental(complex: Arc<GeometricComplex>, dim: usize) -> Self {
        let n = complex.count(dim);
        let coeffs = (0..n as u32).map(|i| (i, 1)).collect();
        SimplicialCurrent { complex, dim, coeffs }
    }

    pub(crate) fn from_map(complex: Arc<GeometricComplex>, dim: usize, mut coeffs: BTreeMap<u32, i64>) -> Self {
        coeffs.retain(|_, c| *c != 0);
        SimplicialCurrent { complex, dim, coeffs }
    }

    pub fn complex(&self) -> &Arc<GeometricComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of simplices with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(&(i as u32)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i as usize, c))
    }

    /// Simplicial boundary; the zero 0-current for k = 0.
    pub fn boundary(&self) -> SimplicialCurrent {
        if self.dim == 0 {
            return SimplicialCurrent::zero(self.complex.clone(), 0);
        }
        let mut out: BTreeMap<u32, i64> = BTreeMap::new();
        for (&i, &c) in &self.coeffs {
            for (f, s) in self.complex.faces(self.dim, i as usize) {
                *out.entry(f as u32).or_insert(0) += s * c;
            }
        }
        Self::from_map(self.complex.clone(), self.dim - 1, out)
    }

    /// Sum over simplices of |coefficient| times volume.
    pub fn mass(&self) -> f64 {
        let m = self.complex.masses(self.dim);
        self.coeffs.iter().map(|(&i, &c)| c.unsigned_abs() as f64 * m[i as usize]).sum()
    }

    /// Mass plus boundary mass.
    pub fn total_mass(&self) -> f64 {
        self.mass() + self.boundary().mass()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        same_complex(&self.complex, &other.complex)?;
        if self.dim != other.dim && !(self.is_zero() || other.is_zero()) {
            return arg(format!("cannot add currents of dimensions {} and {}", self.dim, other.dim));
        }
        let dim = if self.is_zero() { other.dim } else { self.dim };
        let mut out = self.coeffs.clone();
        for (&i, &c) in &other.coeffs {
            *out.entry(i).or_insert(0) += sign * c;
        }
        Ok(Self::from_map(self.complex.clone(), dim, out))
    }

    pub fn scale(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&i, &c)| (i, c * k)).collect();
        Self::from_map(self.complex.clone(), self.dim, coeffs)
    }

    /// Vertices of simplices in the support, ascending.
    pub fn support_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .coeffs
            .keys()
            .flat_map(|&i| self.complex.simplex(self.dim, i as usize).iter().map(|&x| x as usize))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Keeps simplices all of whose vertices satisfy `keep`.
    pub fn restrict_vertices(&self, keep: impl Fn(usize) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&i, _)| self.complex.simplex(self.dim, i as usize).iter().all(|&v| keep(v as usize)))
            .map(|(&i, &c)| (i, c))
            .collect();
        Self::from_map(self.complex.clone(), self.dim, coeffs)
    }

    /// Keeps simplices whose barycenter satisfies `pred`.
    pub fn restrict_barycenter(&self, pred: impl Fn(&[f64]) -> bool) -> Result<Self> {
        let c = &self.complex;
        let mut coeffs = BTreeMap::new();
        for (&i, &coef) in &self.coeffs {
            let s = c.simplex(self.dim, i as usize);
            let first = c.coords(s[0] as usize).ok_or_else(|| {
                Error::Argument("barycenter restriction needs a coordinate embedding".into())
            })?;
            let mut bary = vec![0.0; first.len()];
            for &v in s {
                for (b, x) in bary.iter_mut().zip(c.coords(v as usize).unwrap()) {
                    *b += x / s.len() as f64;
                }
            }
            if pred(&bary) {
                coeffs.insert(i, coef);
            }
        }
        Ok(Self::from_map(c.clone(), self.dim, coeffs))
    }

    /// Push-forward along a vertex map into `target`. Simplices whose image
    /// repeats a vertex contribute nothing.
    pub fn push_forward(&self, target: &Arc<GeometricComplex>, vmap: &[usize]) -> Result<Self> {
        if vmap.len() < self.complex.num_vertices() {
            return arg(format!(
                "vertex map covers {} of {} vertices",
                vmap.len(),
                self.complex.num_vertices()
            ));
        }
        let mut out: BTreeMap<u32, i64> = BTreeMap::new();
        let mut img = [0u32; MAX_VERTS];
        for (&i, &c) in &self.coeffs {
            let s = self.complex.simplex(self.dim, i as usize);
            for (j, &v) in s.iter().enumerate() {
                let w = vmap[v as usize];
                if w >= target.num_vertices() {
                    return arg(format!("vertex {v} maps to {w}, outside the target"));
                }
                img[j] = w as u32;
            }
            let t = &mut img[..s.len()];
            let sign = sort_with_sign(t);
            if sign == 0 {
                continue;
            }
            match target.find(t) {
                Some(k) => *out.entry(k as u32).or_insert(0) += sign * c,
                None => return arg(format!("image {t:?} of simplex {s:?} is not in the target complex")),
            }
        }
        Ok(Self::from_map(target.clone(), self.dim, out))
    }

    /// T(f, pi_1, ..., pi_k) for PL data: on each simplex f is replaced by
    /// its barycenter value and the pi_i are affine, so the integrand is
    /// exact: coeff * f(bary) * det(pi_i(v_j) - pi_i(v_0)) / k!.
    pub fn evaluate(&self, f: &PLFunction, pis: &[PLFunction]) -> Result<f64> {
        if pis.len() != self.dim {
            return arg(format!("{} functions given for a {}-current", pis.len(), self.dim));
        }
        same_complex(&self.complex, &f.complex)?;
        for p in pis {
            same_complex(&self.complex, &p.complex)?;
        }
        let k = self.dim;
        let fact = linalg::factorial(k);
        let mut total = 0.0;
        let mut m = vec![0.0; k * k];
        for (&i, &c) in &self.coeffs {
            let s = self.complex.simplex(k, i as usize);
            let fbar = s.iter().map(|&v| f.values[v as usize]).sum::<f64>() / s.len() as f64;
            let det = if k == 0 {
                1.0
            } else {
                for (r, p) in pis.iter().enumerate() {
                    let base = p.values[s[0] as usize];
                    for j in 0..k {
                        m[r * k + j] = p.values[s[j + 1] as usize] - base;
                    }
                }
                linalg::det(&m, k)
            };
            total += c as f64 * fbar * det / fact;
        }
        Ok(total)
    }

    /// Moves the chain to the subcomplex spanned by its support closure.
    pub fn compact(&self) -> Result<(SimplicialCurrent, Compaction)> {
        let (mut v, comp) = compact_many(&[self])?;
        Ok((v.pop().unwrap(), comp))
    }

    /// Re-expresses this chain on the compacted complex. Every support
    /// simplex must survive the compaction.
    pub fn to_compaction(&self, comp: &Compaction) -> Result<Self> {
        same_complex(&self.complex, &comp.parent)?;
        let mut out = BTreeMap::new();
        let mut img = [0u32; MAX_VERTS];
        for (&i, &c) in &self.coeffs {
            let s = self.complex.simplex(self.dim, i as usize);
            for (j, &v) in s.iter().enumerate() {
                img[j] = comp.vertex_map[v as usize];
            }
            let t = &img[..s.len()];
            match comp.complex.find(t) {
                Some(k) => {
                    out.insert(k as u32, c);
                }
                None => return arg("chain support leaves the compacted complex"),
            }
        }
        Ok(Self::from_map(comp.complex.clone(), self.dim, out))
    }

    /// Re-expresses a chain on a compacted complex in the parent complex.
    pub fn from_compaction(&self, comp: &Compaction) -> Result<Self> {
        same_complex(&self.complex, &comp.complex)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&i, &c)| (comp.to_parent[self.dim][i as usize], c))
            .collect();
        Ok(Self::from_map(comp.parent.clone(), self.dim, coeffs))
    }
}

/// Compacts several chains on one complex to the closure of their joint
/// support.
pub fn compact_many(currents: &[&SimplicialCurrent]) -> Result<(Vec<SimplicialCurrent>, Compaction)> {
    let first = currents.first().ok_or_else(|| Error::Argument("nothing to compact".into()))?;
    let mut cells = Vec::new();
    for t in currents {
        same_complex(&first.complex, &t.complex)?;
        cells.extend(t.coeffs.keys().map(|&i| (t.dim, i as usize)));
    }
    let comp = first.complex.subcomplex(&cells)?;
    let out = currents.iter().map(|t| t.to_compaction(&comp)).collect::<Result<Vec<_>>>()?;
    Ok((out, comp))
}

impl std::ops::Add for &SimplicialCurrent {
    type Output = SimplicialCurrent;
    fn add(self, rhs: Self) -> SimplicialCurrent {
        self.checked_add(rhs).expect("currents must share a complex and dimension")
    }
}

impl std::ops::Sub for &SimplicialCurrent {
    type Output = SimplicialCurrent;
    fn sub(self, rhs: Self) -> SimplicialCurrent {
        self.checked_sub(rhs).expect("currents must share a complex and dimension")
    }
}

impl std::ops::Neg for &SimplicialCurrent {
    type Output = SimplicialCurrent;
    fn neg(self) -> SimplicialCurrent {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(points: &[Vec<f64>], simplices: &[Vec<usize>]) -> Arc<GeometricComplex> {
        Arc::new(GeometricComplex::new(Embedding::euclidean(points).unwrap(), simplices).unwrap())
    }

    fn triangle() -> Arc<GeometricComplex> {
        complex(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], &[vec![0, 1, 2]])
    }

    #[test]
    fn boundary_examples() {
        let c = complex(&[vec![0.0], vec![1.0]], &[vec![0, 1]]);
        let e = SimplicialCurrent::new(c.clone(), 1, [(0, 1)]).unwrap();
        let b = e.boundary();
        assert_eq!((b.coeff(0), b.coeff(1)), (-1, 1));

        let c = triangle();
        let loop_ = SimplicialCurrent::from_oriented(c.clone(), 1, &[(vec![0, 1], 1), (vec![1, 2], 1), (vec![2, 0], 1)]).unwrap();
        assert!(loop_.boundary().is_zero());
        let face = SimplicialCurrent::new(c.clone(), 2, [(0, 1)]).unwrap();
        let b = face.boundary();
        let idx = |a: u32, b: u32| c.find(&[a, b]).unwrap();
        assert_eq!((b.coeff(idx(1, 2)), b.coeff(idx(0, 2)), b.coeff(idx(0, 1))), (1, -1, 1));
        assert!(SimplicialCurrent::new(c.clone(), 0, [(1, 4)]).unwrap().boundary().is_zero());
    }

    #[test]
    fn mass_examples() {
        let c = complex(&[vec![0.0], vec![1.0]], &[vec![0, 1]]);
        assert_eq!(SimplicialCurrent::new(c.clone(), 1, [(0, 3)]).unwrap().mass(), 3.0);
        assert_eq!(SimplicialCurrent::new(c.clone(), 1, [(0, 1)]).unwrap().total_mass(), 3.0);
        assert_eq!(SimplicialCurrent::zero(c, 1).total_mass(), 0.0);
        let t = SimplicialCurrent::new(triangle(), 2, [(0, 1)]).unwrap();
        assert!((t.mass() - 0.5).abs() < 1e-15);
        let h = 3f64.sqrt() / 2.0;
        let eq = complex(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]], &[vec![0, 1, 2]]);
        let t = SimplicialCurrent::new(eq.clone(), 2, [(0, -2)]).unwrap();
        assert!((t.mass() - 2.0 * 3f64.sqrt() / 4.0).abs() < 1e-15);
        let loop_ = SimplicialCurrent::fundamental(eq, 2).boundary();
        assert!((loop_.total_mass() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn push_forward_examples() {
        let c = triangle();
        let t = SimplicialCurrent::new(c.clone(), 2, [(0, 1)]).unwrap();
        assert_eq!(t.push_forward(&c, &[0, 1, 2]).unwrap(), t);
        let e = SimplicialCurrent::from_oriented(c.clone(), 1, &[(vec![0, 1], 1)]).unwrap();
        assert!(e.push_forward(&c, &[0, 0, 2]).unwrap().is_zero());
        // reflection across y = x swaps vertices 1 and 2: an isometry that
        // reverses orientation
        let r = t.push_forward(&c, &[0, 2, 1]).unwrap();
        assert_eq!(r.coeff(0), -1);
        assert!((r.mass() - t.mass()).abs() < 1e-12);
        assert!(e.push_forward(&c, &[0]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let c = complex(&[vec![0.0], vec![1.0]], &[vec![0, 1]]);
        let e = SimplicialCurrent::new(c.clone(), 1, [(0, 1)]).unwrap();
        let one = PLFunction::constant(c.clone(), 1.0);
        let x = PLFunction::sample(c.clone(), &Field::Coordinate(0)).unwrap();
        assert_eq!(e.evaluate(&one, &[x.clone()]).unwrap(), 1.0);
        assert_eq!(e.evaluate(&one, &[one.clone()]).unwrap(), 0.0);
        assert!(e.evaluate(&one, &[]).is_err());

        let c = triangle();
        let t = SimplicialCurrent::new(c.clone(), 2, [(0, 1)]).unwrap();
        let one = PLFunction::constant(c.clone(), 1.0);
        let x = PLFunction::sample(c.clone(), &Field::Coordinate(0)).unwrap();
        let y = PLFunction::sample(c.clone(), &Field::Coordinate(1)).unwrap();
        let a = t.evaluate(&one, &[x.clone(), y.clone()]).unwrap();
        let b = t.evaluate(&one, &[y, x]).unwrap();
        assert!((a - 0.5).abs() < 1e-15);
        assert_eq!(a, -b);
    }

    #[test]
    fn lip_is_gradient_norm() {
        // f = x + y on the right triangle: gradient norm sqrt 2, edge
        // quotients at most 1 on the legs and 0 on the hypotenuse
        let c = triangle();
        let f = PLFunction::new(c.clone(), vec![0.0, 1.0, 1.0]).unwrap();
        assert!((f.edge_lip() - 1.0).abs() < 1e-15);
        assert!((f.lip() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn compaction_round_trip() {
        let c = complex(
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![2.0, 2.0]],
            &[vec![0, 1, 2], vec![1, 2, 3], vec![3, 4]],
        );
        let t = SimplicialCurrent::from_oriented(c.clone(), 2, &[(vec![1, 2, 3], -1)]).unwrap();
        let (small, comp) = t.compact().unwrap();
        assert_eq!(small.complex().num_vertices(), 3);
        assert!((small.mass() - t.mass()).abs() < 1e-15);
        assert_eq!(small.from_compaction(&comp).unwrap(), t);
        assert_eq!(small.boundary().from_compaction(&comp).unwrap(), t.boundary());
    }
}
