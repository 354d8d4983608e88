//! Flat distances and filling volumes within a fixed ambient complex.
//!
//! Both are weighted L1 problems over real chains. Fills of top-dimensional
//! pseudomanifold pieces are solved by propagating the boundary constraint
//! across the dual graph; everything else goes through the simplex solver in
//! [`crate::lp`]. Zero-dimensional fills are transports along the metric.

use crate::complex::GeometricComplex;
use crate::current::SimplicialCurrent;
use crate::error::{arg, Error, Result};
use crate::lp::L1Problem;
use crate::metricspace::FiniteMetricSpace;
use crate::transport::min_cost_transport;
use serde::Serialize;
use std::collections::VecDeque;
use std::sync::Arc;

/// Distance from an LP coefficient to the nearest integer below which the
/// coefficient counts as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Trivial,
    Lp,
    Propagation,
    Transport,
    Cone,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainTerm {
    pub vertices: Vec<usize>,
    pub coeff: f64,
}

/// A chain with real coefficients, listed by vertex tuples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealChain {
    pub name: String,
    pub dim: usize,
    pub terms: Vec<ChainTerm>,
}

impl RealChain {
    fn from_level(name: &str, c: &GeometricComplex, k: usize, x: &[f64]) -> Self {
        let terms = x
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > 1e-12)
            .map(|(i, &v)| ChainTerm { vertices: c.simplex(k, i).iter().map(|&u| u as usize).collect(), coeff: v })
            .collect();
        RealChain { name: name.into(), dim: k, terms }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|t| (t.coeff - t.coeff.round()).abs() <= INTEGRALITY_TOL)
    }

    /// Rounds to an integer chain on `complex`; fails if a tuple is missing.
    pub fn to_current(&self, complex: &Arc<GeometricComplex>) -> Result<SimplicialCurrent> {
        let tuples: Vec<(Vec<usize>, i64)> =
            self.terms.iter().map(|t| (t.vertices.clone(), t.coeff.round() as i64)).collect();
        SimplicialCurrent::from_oriented(complex.clone(), self.dim, &tuples)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FillingReport {
    pub value: f64,
    pub lower_bound: f64,
    /// Mass of an integer chain meeting the constraint, when one is known.
    pub upper_bound: Option<f64>,
    pub certificate: Vec<RealChain>,
    pub integral: bool,
    pub method: Method,
    /// Largest violation of the boundary constraint by the certificate.
    pub residual: f64,
    /// Mass of the boundary times the diameter of its support.
    pub cone_bound: Option<f64>,
    pub warnings: Vec<String>,
}

impl FillingReport {
    fn trivial() -> Self {
        FillingReport {
            value: 0.0,
            lower_bound: 0.0,
            upper_bound: Some(0.0),
            certificate: Vec::new(),
            integral: true,
            method: Method::Trivial,
            residual: 0.0,
            cone_bound: Some(0.0),
            warnings: Vec::new(),
        }
    }
}

fn is_integral(x: &[f64]) -> bool {
    x.iter().all(|v| (v - v.round()).abs() <= INTEGRALITY_TOL)
}

/// Boundary columns of the (k+1)-simplices as (row, sign) lists.
fn boundary_columns(c: &GeometricComplex, k: usize) -> Vec<Vec<(usize, f64)>> {
    (0..c.count(k + 1)).map(|j| c.faces(k + 1, j).map(|(f, s)| (f, s as f64)).collect()).collect()
}

fn dense_rhs(b: &SimplicialCurrent) -> Vec<f64> {
    let mut rhs = vec![0.0; b.complex().count(b.dim())];
    for (i, c) in b.iter() {
        rhs[i] = c as f64;
    }
    rhs
}

/// Restricts to the rows and columns connected to a nonzero right-hand side;
/// the rest of the optimum is zero. Returns the kept row and column indices.
fn reachable(rows: usize, cols: &[Vec<(usize, f64)>], rhs: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, _) in col {
            row_cols[i].push(j);
        }
    }
    let mut seen_row = vec![false; rows];
    let mut seen_col = vec![false; cols.len()];
    let mut queue: VecDeque<usize> = (0..rows).filter(|&i| rhs[i] != 0.0).collect();
    for &i in &queue {
        seen_row[i] = true;
    }
    while let Some(i) = queue.pop_front() {
        for &j in &row_cols[i] {
            if !seen_col[j] {
                seen_col[j] = true;
                for &(r, _) in &cols[j] {
                    if !seen_row[r] {
                        seen_row[r] = true;
                        queue.push_back(r);
                    }
                }
            }
        }
    }
    (
        (0..rows).filter(|&i| seen_row[i]).collect(),
        (0..cols.len()).filter(|&j| seen_col[j]).collect(),
    )
}

/// Solves min sum w|x| subject to sum_j x_j col_j = rhs over the reachable
/// part. Returns the full solution vector and the method used.
fn solve_l1(rows: usize, cols: &[Vec<(usize, f64)>], weights: &[f64], rhs: &[f64]) -> Result<(Vec<f64>, Method)> {
    let (keep_rows, keep_cols) = reachable(rows, cols, rhs);
    let mut x = vec![0.0; cols.len()];
    if keep_rows.is_empty() {
        return Ok((x, Method::Trivial));
    }
    let mut row_index = vec![usize::MAX; rows];
    for (k, &i) in keep_rows.iter().enumerate() {
        row_index[i] = k;
    }
    let sub_cols: Vec<Vec<(usize, f64)>> =
        keep_cols.iter().map(|&j| cols[j].iter().map(|&(i, a)| (row_index[i], a)).collect()).collect();
    let sub_w: Vec<f64> = keep_cols.iter().map(|&j| weights[j]).collect();
    let sub_rhs: Vec<f64> = keep_rows.iter().map(|&i| rhs[i]).collect();
    let (sub_x, method) = match propagate(keep_rows.len(), &sub_cols, &sub_w, &sub_rhs)? {
        Some(v) => (v, Method::Propagation),
        None => {
            let p = L1Problem { rows: keep_rows.len(), cols: sub_cols, weights: sub_w, rhs: sub_rhs };
            (p.solve()?.x, Method::Lp)
        }
    };
    for (k, &j) in keep_cols.iter().enumerate() {
        x[j] = sub_x[k];
    }
    Ok((x, method))
}

/// Exact solver for constraint matrices whose rows have at most two unit
/// entries (top-dimensional fills of pseudomanifolds). Each connected piece
/// has at most one free parameter; it is fixed by a boundary row or a
/// non-orientable loop, or else chosen as a weighted median. Returns None
/// when the matrix has the wrong shape.
fn propagate(rows: usize, cols: &[Vec<(usize, f64)>], w: &[f64], rhs: &[f64]) -> Result<Option<Vec<f64>>> {
    let mut row_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, a) in col {
            if a.abs() != 1.0 {
                return Ok(None);
            }
            row_cols[i].push((j, a));
            if row_cols[i].len() > 2 {
                return Ok(None);
            }
        }
    }
    for i in 0..rows {
        if row_cols[i].is_empty() && rhs[i] != 0.0 {
            return Err(Error::Infeasible(format!("constraint row {i} has no variables")));
        }
    }
    let tol = 1e-9 * (1.0 + rhs.iter().fold(0.0f64, |a, b| a.max(b.abs())));
    // x_j = a_j + b_j c with b_j = +-1 and c the component parameter
    let mut a = vec![0.0; cols.len()];
    let mut b = vec![0.0; cols.len()];
    let mut comp = vec![usize::MAX; cols.len()];
    let mut x = vec![0.0; cols.len()];
    for root in 0..cols.len() {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = root;
        b[root] = 1.0;
        let mut members = vec![root];
        let mut fixed: Option<f64> = None;
        let mut fix = |c: f64| -> Result<()> {
            match fixed {
                None => fixed = Some(c),
                Some(f) if (f - c).abs() <= tol => {}
                Some(_) => return Err(Error::Infeasible("boundary constraint is inconsistent".into())),
            }
            Ok(())
        };
        let mut queue = VecDeque::from([root]);
        while let Some(j) = queue.pop_front() {
            for &(i, e1) in &cols[j] {
                let other = row_cols[i].iter().find(|&&(jj, _)| jj != j).copied();
                match other {
                    None => fix((e1 * rhs[i] - a[j]) * b[j])?,
                    Some((k, e2)) => {
                        let na = e2 * (rhs[i] - e1 * a[j]);
                        let nb = -e2 * e1 * b[j];
                        if comp[k] == usize::MAX {
                            comp[k] = root;
                            a[k] = na;
                            b[k] = nb;
                            members.push(k);
                            queue.push_back(k);
                        } else if nb == b[k] {
                            if (na - a[k]).abs() > tol {
                                return Err(Error::Infeasible("boundary constraint is inconsistent".into()));
                            }
                        } else {
                            fix((a[k] - na) / (2.0 * nb))?;
                        }
                    }
                }
            }
        }
        let c = match fixed {
            Some(c) => c,
            None => {
                // minimise sum w |c - (-a b)|
                let mut pts: Vec<(f64, f64)> = members.iter().map(|&j| (-a[j] * b[j], w[j])).collect();
                pts.sort_by(|p, q| p.0.total_cmp(&q.0));
                let total: f64 = pts.iter().map(|p| p.1).sum();
                let mut acc = 0.0;
                let mut c = 0.0;
                for &(p, wt) in &pts {
                    acc += wt;
                    if acc >= 0.5 * total {
                        c = p;
                        break;
                    }
                }
                c
            }
        };
        for &j in &members {
            x[j] = a[j] + b[j] * c;
        }
    }
    Ok(Some(x))
}

fn residual_of(rows: usize, cols: &[Vec<(usize, f64)>], x: &[f64], rhs: &[f64]) -> f64 {
    let p = L1Problem { rows, cols: cols.to_vec(), weights: vec![0.0; cols.len()], rhs: rhs.to_vec() };
    p.residual(x)
}

fn cone_bound(b: &SimplicialCurrent) -> f64 {
    let verts = b.support_vertices();
    b.mass() * b.complex().vertex_set_diameter(&verts)
}

/// Minimal mass of a real (k+1)-chain in the ambient complex of `b` whose
/// boundary is the k-cycle `b`. Zero-dimensional cycles are filled by
/// transport along the metric of the complex instead.
pub fn filling_volume(b: &SimplicialCurrent) -> Result<FillingReport> {
    let k = b.dim();
    if b.is_zero() {
        return Ok(FillingReport::trivial());
    }
    if k == 0 {
        return fill_zero_current(b);
    }
    let bd = b.boundary();
    if !bd.is_zero() {
        return Err(Error::NotACycle { residual: bd.mass() });
    }
    let c = b.complex();
    if c.count(k + 1) == 0 {
        return arg(format!("ambient complex has no {}-simplices to fill with", k + 1));
    }
    let cols = boundary_columns(c, k);
    let rhs = dense_rhs(b);
    let weights = c.masses(k + 1).to_vec();
    let (x, method) = solve_l1(c.count(k), &cols, &weights, &rhs)?;
    let value: f64 = x.iter().zip(&weights).map(|(v, w)| v.abs() * w).sum();
    let residual = residual_of(c.count(k), &cols, &x, &rhs);
    let integral = is_integral(&x);
    let cone = cone_bound(b);
    let mut warnings = Vec::new();
    if residual > 1e-8 * (1.0 + rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()))) {
        warnings.push(format!("certificate residual {residual:e}"));
    }
    if value > cone + 1e-9 * (1.0 + cone) {
        warnings.push(format!("fill {value} exceeds cone bound {cone}; the complex is too coarse for straight cones"));
    }
    Ok(FillingReport {
        value,
        lower_bound: value,
        upper_bound: integral.then_some(value),
        certificate: vec![RealChain::from_level("fill", c, k + 1, &x)],
        integral,
        method,
        residual,
        cone_bound: Some(cone),
        warnings,
    })
}

/// Flat distance between S and T within their common complex: the minimum of
/// M(U) + M(V) over real chains with S - T = U + dV.
pub fn flat_distance(s: &SimplicialCurrent, t: &SimplicialCurrent) -> Result<FillingReport> {
    let diff = s.checked_sub(t)?;
    flat_norm(&diff)
}

/// Flat norm of a single chain, `flat_distance(d, 0)`.
pub fn flat_norm(diff: &SimplicialCurrent) -> Result<FillingReport> {
    if diff.is_zero() {
        return Ok(FillingReport::trivial());
    }
    let c = diff.complex();
    let m = diff.dim();
    let rows = c.count(m);
    let mut cols: Vec<Vec<(usize, f64)>> = (0..rows).map(|i| vec![(i, 1.0)]).collect();
    let mut weights = c.masses(m).to_vec();
    let mut warnings = Vec::new();
    if c.count(m + 1) == 0 {
        warnings.push(format!("no {}-simplices in the ambient complex; only U is available", m + 1));
    }
    cols.extend(boundary_columns(c, m));
    weights.extend_from_slice(c.masses(m + 1));
    let rhs = dense_rhs(diff);
    let (keep_rows, keep_cols) = reachable(rows, &cols[rows..], &rhs);
    // U columns on rows the V part never touches are forced, so solve the
    // connected remainder only
    let mut x = vec![0.0; cols.len()];
    let mut row_index = vec![usize::MAX; rows];
    for (k, &i) in keep_rows.iter().enumerate() {
        row_index[i] = k;
    }
    let mut p = L1Problem::new(keep_rows.len());
    let mut col_of = Vec::new();
    for &i in &keep_rows {
        p.add_column(vec![(row_index[i], 1.0)], weights[i]);
        col_of.push(i);
    }
    for &j in &keep_cols {
        let jj = rows + j;
        p.add_column(cols[jj].iter().map(|&(i, a)| (row_index[i], a)).collect(), weights[jj]);
        col_of.push(jj);
    }
    p.rhs = keep_rows.iter().map(|&i| rhs[i]).collect();
    let sol = p.solve()?;
    for (k, &j) in col_of.iter().enumerate() {
        x[j] = sol.x[k];
    }
    let value: f64 = x.iter().zip(&weights).map(|(v, w)| v.abs() * w).sum();
    let residual = residual_of(rows, &cols, &x, &rhs);
    let integral = is_integral(&x);
    Ok(FillingReport {
        value,
        lower_bound: value,
        upper_bound: Some(if integral { value } else { diff.mass() }),
        certificate: vec![
            RealChain::from_level("U", c, m, &x[..rows]),
            RealChain::from_level("V", c, m + 1, &x[rows..]),
        ],
        integral,
        method: Method::Lp,
        residual,
        cone_bound: None,
        warnings,
    })
}

fn enumerate_box(n: usize, radius: i64, mut visit: impl FnMut(&[i64])) {
    let mut v = vec![-radius; n];
    loop {
        visit(&v);
        let mut k = 0;
        while k < n {
            v[k] += 1;
            if v[k] <= radius {
                break;
            }
            v[k] = -radius;
            k += 1;
        }
        if k == n {
            return;
        }
    }
}

const EXHAUSTIVE_LIMIT: usize = 10;

/// Integer flat distance by enumerating every V with coefficients in
/// [-radius, radius]; U is then determined. Small complexes only.
pub fn exhaustive_flat_distance(s: &SimplicialCurrent, t: &SimplicialCurrent, radius: i64) -> Result<FillingReport> {
    let diff = s.checked_sub(t)?;
    let c = diff.complex();
    let m = diff.dim();
    let nv = c.count(m + 1);
    if nv > EXHAUSTIVE_LIMIT {
        return arg(format!("exhaustive search limited to {EXHAUSTIVE_LIMIT} top simplices, got {nv}"));
    }
    let rhs = dense_rhs(&diff);
    let cols = boundary_columns(c, m);
    let (mu, mv) = (c.masses(m), c.masses(m + 1));
    let mut best = (f64::INFINITY, Vec::new());
    enumerate_box(nv, radius, |v| {
        let mut u = rhs.clone();
        let mut cost = 0.0;
        for (j, &vj) in v.iter().enumerate() {
            if vj != 0 {
                cost += vj.unsigned_abs() as f64 * mv[j];
                for &(i, a) in &cols[j] {
                    u[i] -= a * vj as f64;
                }
            }
        }
        cost += u.iter().zip(mu).map(|(x, w)| x.abs() * w).sum::<f64>();
        if cost < best.0 {
            best = (cost, v.to_vec());
        }
    });
    let v: Vec<f64> = best.1.iter().map(|&x| x as f64).collect();
    Ok(FillingReport {
        value: best.0,
        lower_bound: best.0,
        upper_bound: Some(best.0),
        certificate: vec![RealChain::from_level("V", c, m + 1, &v)],
        integral: true,
        method: Method::Exhaustive,
        residual: 0.0,
        cone_bound: None,
        warnings: Vec::new(),
    })
}

/// Integer filling volume by enumeration over coefficient boxes.
pub fn exhaustive_filling_volume(b: &SimplicialCurrent, radius: i64) -> Result<FillingReport> {
    let c = b.complex();
    let k = b.dim();
    let n = c.count(k + 1);
    if n > EXHAUSTIVE_LIMIT {
        return arg(format!("exhaustive search limited to {EXHAUSTIVE_LIMIT} top simplices, got {n}"));
    }
    let rhs = dense_rhs(b);
    let cols = boundary_columns(c, k);
    let w = c.masses(k + 1);
    let mut best: Option<(f64, Vec<i64>)> = None;
    enumerate_box(n, radius, |x| {
        let mut r = rhs.clone();
        for (j, &xj) in x.iter().enumerate() {
            for &(i, a) in &cols[j] {
                r[i] -= a * xj as f64;
            }
        }
        if r.iter().all(|v| v.abs() < 1e-9) {
            let cost: f64 = x.iter().zip(w).map(|(v, w)| v.unsigned_abs() as f64 * w).sum();
            if best.as_ref().map_or(true, |b| cost < b.0) {
                best = Some((cost, x.to_vec()));
            }
        }
    });
    let (value, x) = best.ok_or_else(|| Error::Infeasible("no integer filling within the search box".into()))?;
    let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    Ok(FillingReport {
        value,
        lower_bound: value,
        upper_bound: Some(value),
        certificate: vec![RealChain::from_level("fill", c, k + 1, &xf)],
        integral: true,
        method: Method::Exhaustive,
        residual: 0.0,
        cone_bound: None,
        warnings: Vec::new(),
    })
}

/// Fill of a signed weighted point set: the transport cost between its
/// positive and negative atoms, with the lower bound
/// max_j theta_j * min_{i != j} d(p_i, p_j).
pub fn filling_volume_0d(space: &FiniteMetricSpace, theta: &[i64], sigma: &[i64]) -> Result<FillingReport> {
    let n = space.len();
    if theta.len() != n || sigma.len() != n {
        return arg(format!("expected {n} weights and signs, got {} and {}", theta.len(), sigma.len()));
    }
    if theta.iter().any(|&t| t <= 0) {
        return arg("weights theta must be positive integers");
    }
    if sigma.iter().any(|&s| s != 1 && s != -1) {
        return arg("signs sigma must be +1 or -1");
    }
    let balance: i64 = theta.iter().zip(sigma).map(|(t, s)| t * s).sum();
    if balance != 0 {
        return arg(format!("signed weights sum to {balance}, expected 0"));
    }
    let labels: Vec<usize> = (0..n).collect();
    fill_points(n, &labels, theta, sigma, |i, j| space.d(i, j))
}

fn fill_points(
    n: usize,
    labels: &[usize],
    theta: &[i64],
    sigma: &[i64],
    d: impl Fn(usize, usize) -> f64,
) -> Result<FillingReport> {
    if n == 0 {
        return Ok(FillingReport::trivial());
    }
    let pos: Vec<usize> = (0..n).filter(|&i| sigma[i] > 0).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| sigma[i] < 0).collect();
    let supply: Vec<i64> = pos.iter().map(|&i| theta[i]).collect();
    let demand: Vec<i64> = neg.iter().map(|&i| theta[i]).collect();
    let plan = min_cost_transport(&supply, &demand, |a, b| d(pos[a], neg[b]))?;
    let mut lower = 0.0f64;
    for j in 0..n {
        let nearest = (0..n).filter(|&i| i != j).map(|i| d(i, j)).fold(f64::INFINITY, f64::min);
        if nearest.is_finite() {
            lower = lower.max(theta[j] as f64 * nearest);
        }
    }
    // edges run from the negative atom to the positive one, so their
    // boundary reproduces the input
    let terms = plan
        .flows
        .iter()
        .map(|&(a, b, f)| ChainTerm { vertices: vec![labels[neg[b]], labels[pos[a]]], coeff: f as f64 })
        .collect();
    let cone = theta.iter().map(|&t| t as f64).sum::<f64>()
        * (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| d(i, j)).fold(0.0, f64::max);
    let mut warnings = Vec::new();
    if lower > plan.cost + 1e-9 * (1.0 + plan.cost) {
        warnings.push(format!("lower bound {lower} exceeds transport value {}", plan.cost));
    }
    Ok(FillingReport {
        value: plan.cost,
        lower_bound: lower.min(plan.cost),
        upper_bound: Some(plan.cost),
        certificate: vec![RealChain { name: "transport".into(), dim: 1, terms }],
        integral: true,
        method: Method::Transport,
        residual: 0.0,
        cone_bound: Some(cone),
        warnings,
    })
}

/// Transport fill of a 0-current, using the metric of its complex.
pub fn fill_zero_current(b: &SimplicialCurrent) -> Result<FillingReport> {
    if b.dim() != 0 {
        return arg("expected a 0-current");
    }
    let total: i64 = b.iter().map(|(_, c)| c).sum();
    if total != 0 {
        return arg(format!("0-current has total weight {total}, expected 0"));
    }
    let c = b.complex();
    let labels: Vec<usize> = b.iter().map(|(i, _)| c.simplex(0, i)[0] as usize).collect();
    let theta: Vec<i64> = b.iter().map(|(_, c)| c.abs()).collect();
    let sigma: Vec<i64> = b.iter().map(|(_, c)| c.signum()).collect();
    fill_points(labels.len(), &labels, &theta, &sigma, |i, j| c.distance(labels[i], labels[j]))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityGap {
    pub fill_1: f64,
    pub fill_2: f64,
    pub gap: f64,
    pub bound: f64,
    pub holds: bool,
}

/// |FillVol(dM1) - FillVol(dM2)| against the flat distance d_F(M1, M2), all
/// computed in the common complex. The inequality holds for the real
/// relaxations as well, so `holds` is a genuine check up to solver tolerance.
pub fn fillvol_continuity_gap(m1: &SimplicialCurrent, m2: &SimplicialCurrent) -> Result<ContinuityGap> {
    let f1 = filling_volume(&m1.boundary())?.value;
    let f2 = filling_volume(&m2.boundary())?.value;
    let bound = flat_distance(m1, m2)?.value;
    let gap = (f1 - f2).abs();
    Ok(ContinuityGap { fill_1: f1, fill_2: f2, gap, bound, holds: gap <= bound + 1e-6 + 1e-8 * bound })
}
