//! Level-set subdivision and slicing of simplicial currents.
//!
//! A complex is refined along {f = s} by bisecting every simplex across each
//! edge that the level crosses, always in the same global edge order, so
//! that the pieces of a simplex and the pieces of its faces agree. After
//! refinement {f <= s} is a subcomplex and the slice
//! <T, f, s> = d(T restricted to {f <= s}) - (dT) restricted to {f <= s}
//! is an exact integer chain.

use crate::complex::{sort_with_sign, Embedding, GeometricComplex, MAX_VERTS};
use crate::current::{same_complex, Anchor, Field, PLFunction, SimplicialCurrent};
use crate::error::{arg, Error, Result};
use crate::metricspace::FiniteMetricSpace;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Relative tolerance for keeping levels away from vertex values.
pub const SNAP_TOL: f64 = 1e-7;
/// Volume below which a split piece counts as degenerate.
pub const VOLUME_FLOOR: f64 = 1e-12;

/// A complex refined along one level set, with the maps needed to move
/// chains and functions onto it.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub parent: Arc<GeometricComplex>,
    pub complex: Arc<GeometricComplex>,
    /// Level actually used, after snapping away from vertex values.
    pub level: f64,
    /// `level` minus the requested level.
    pub nudge: f64,
    /// New vertices as (endpoint below the level, endpoint above, lambda):
    /// the vertex sits at parameter lambda from the first endpoint.
    pub new_vertices: Vec<(u32, u32, f64)>,
    /// For each dimension, the parent simplex and relative orientation of
    /// every piece; pieces come first in each dimension, new interior faces
    /// (which have no parent of their own dimension) after them.
    parent_of: Vec<Vec<(u32, i8)>>,
    /// Pieces with volume under the floor. They are kept so that chain
    /// identities remain exact.
    pub degenerate: usize,
}

/// Chooses the level to use: `s` itself unless it lies within the snap
/// tolerance of a vertex value, in which case it moves toward the middle of
/// the value range until it is clear.
pub fn snap_level(values: &[f64], s: f64) -> f64 {
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if values.is_empty() {
        return s;
    }
    let range = hi - lo;
    let tol = if range > 0.0 { SNAP_TOL * range } else { SNAP_TOL * s.abs().max(1.0) };
    let dir = if s > 0.5 * (lo + hi) { -1.0 } else { 1.0 };
    let mut t = s;
    for _ in 0..256 {
        if values.iter().all(|&v| (v - t).abs() >= tol) {
            return t;
        }
        t += dir * tol;
    }
    t
}

impl Refinement {
    fn identity(c: &Arc<GeometricComplex>, level: f64, nudge: f64) -> Self {
        let parent_of = (0..=c.dim()).map(|k| (0..c.count(k) as u32).map(|i| (i, 1)).collect()).collect();
        Refinement {
            parent: c.clone(),
            complex: c.clone(),
            level,
            nudge,
            new_vertices: Vec::new(),
            parent_of,
            degenerate: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.new_vertices.is_empty()
    }

    /// Values of a PL function at the refined vertices.
    pub fn transfer_values(&self, values: &[f64]) -> Vec<f64> {
        let mut out = values.to_vec();
        out.extend(self.new_vertices.iter().map(|&(a, b, l)| {
            let (va, vb) = (values[a as usize], values[b as usize]);
            va + l * (vb - va)
        }));
        out
    }

    pub fn transfer_function(&self, f: &PLFunction) -> Result<PLFunction> {
        same_complex(f.complex(), &self.parent)?;
        if self.is_identity() {
            return Ok(f.clone());
        }
        PLFunction::new(self.complex.clone(), self.transfer_values(f.values()))
    }

    /// The refining function itself, with new vertices placed exactly on
    /// the level.
    pub fn level_values(&self, f: &PLFunction) -> Vec<f64> {
        let mut out = f.values().to_vec();
        out.resize(self.complex.num_vertices(), self.level);
        out
    }

    /// The same chain written on the refined complex.
    pub fn transfer_current(&self, t: &SimplicialCurrent) -> Result<SimplicialCurrent> {
        same_complex(t.complex(), &self.parent)?;
        if self.is_identity() {
            return Ok(t.clone());
        }
        let k = t.dim();
        let mut out = BTreeMap::new();
        if let Some(list) = self.parent_of.get(k) {
            for (j, &(p, s)) in list.iter().enumerate() {
                let c = t.coeff(p as usize);
                if c != 0 {
                    out.insert(j as u32, c * s as i64);
                }
            }
        }
        Ok(SimplicialCurrent::from_map(self.complex.clone(), k, out))
    }

    /// Parent simplex of a refined k-simplex, if it is a piece of one.
    pub fn parent_of(&self, k: usize, i: usize) -> Option<(usize, i64)> {
        self.parent_of.get(k)?.get(i).map(|&(p, s)| (p as usize, s as i64))
    }
}

/// Refines `f`'s complex so that {f <= s} becomes a subcomplex.
pub fn subdivide_at_level(f: &PLFunction, s: f64) -> Result<Refinement> {
    if !s.is_finite() {
        return arg(format!("level must be finite, got {s}"));
    }
    let c = f.complex().clone();
    let values = f.values();
    let level = snap_level(values, s);
    let nudge = level - s;
    if nudge != 0.0 {
        log::debug!("level {s} snapped to {level}");
    }
    let n = c.num_vertices();
    let mut crossing: Vec<u32> = vec![u32::MAX; c.count(1)];
    let mut new_vertices = Vec::new();
    for e in 0..c.count(1) {
        let sv = c.simplex(1, e);
        let (a, b) = (sv[0], sv[1]);
        let (fa, fb) = (values[a as usize], values[b as usize]);
        if (fa < level) != (fb < level) {
            let (lo, hi, flo, fhi) = if fa < level { (a, b, fa, fb) } else { (b, a, fb, fa) };
            crossing[e] = (n + new_vertices.len()) as u32;
            new_vertices.push((lo, hi, (level - flo) / (fhi - flo)));
        }
    }
    if new_vertices.is_empty() {
        return Ok(Refinement::identity(&c, level, nudge));
    }
    let embedding = extend_embedding(&c, &new_vertices)?;

    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); c.dim() + 1];
    let mut parent_of: Vec<Vec<(u32, i8)>> = vec![Vec::new(); c.dim() + 1];
    parent_of[0] = (0..n as u32).map(|v| (v, 1)).collect();
    let mut pairs: Vec<(u32, usize, usize, u32)> = Vec::new();
    let mut stack: Vec<([u32; MAX_VERTS], u32)> = Vec::new();
    for k in 1..=c.dim() {
        for i in 0..c.count(k) {
            let sv = c.simplex(k, i);
            pairs.clear();
            for a in 0..=k {
                for b in a + 1..=k {
                    let (va, vb) = (values[sv[a] as usize], values[sv[b] as usize]);
                    if (va < level) != (vb < level) {
                        let e = c.find(&[sv[a], sv[b]]).expect("edge of simplex");
                        pairs.push((e as u32, a, b, crossing[e]));
                    }
                }
            }
            if pairs.is_empty() {
                lists[k].extend_from_slice(sv);
                parent_of[k].push((i as u32, 1));
                continue;
            }
            pairs.sort_unstable();
            let mut start = [0u32; MAX_VERTS];
            start[..=k].copy_from_slice(sv);
            stack.clear();
            stack.push((start, 0));
            while let Some((verts, mask)) = stack.pop() {
                let split = pairs.iter().find(|&&(_, a, b, _)| mask & (1 << a) == 0 && mask & (1 << b) == 0);
                match split {
                    Some(&(_, a, b, v)) => {
                        let mut left = verts;
                        left[b] = v;
                        let mut right = verts;
                        right[a] = v;
                        // pushed in reverse so the piece near vertex a comes first
                        stack.push((right, mask | (1 << a)));
                        stack.push((left, mask | (1 << b)));
                    }
                    None => {
                        let mut piece = verts;
                        let sign = sort_with_sign(&mut piece[..=k]);
                        debug_assert!(sign != 0);
                        lists[k].extend_from_slice(&piece[..=k]);
                        parent_of[k].push((i as u32, sign as i8));
                    }
                }
            }
        }
    }
    let complex = GeometricComplex::from_sorted_levels(embedding, lists)?;
    let mut degenerate = 0;
    for k in 1..parent_of.len() {
        for j in 0..parent_of[k].len() {
            if complex.simplex_mass(k, j) < VOLUME_FLOOR {
                degenerate += 1;
            }
        }
    }
    if degenerate > 0 {
        log::debug!("{degenerate} split pieces below the volume floor were kept");
    }
    Ok(Refinement { parent: c, complex: Arc::new(complex), level, nudge, new_vertices, parent_of, degenerate })
}

/// Adds the points of `new` (edge, parameter) to an embedding. Coordinate
/// embeddings interpolate. Finite metric spaces are extended by measuring
/// inside the flat realisation of a simplex shared by both points when
/// there is one, and by paths through the split edge's endpoints
/// otherwise, followed by a shortest-path pass so the result is a metric.
fn extend_embedding(c: &GeometricComplex, new: &[(u32, u32, f64)]) -> Result<Embedding> {
    match c.embedding() {
        Embedding::Coordinates { dim, data, metric } => {
            let mut data = data.clone();
            data.reserve(new.len() * dim);
            for &(a, b, l) in new {
                let pa = &data[a as usize * dim..(a as usize + 1) * dim];
                let pb = &data[b as usize * dim..(b as usize + 1) * dim];
                let p = metric.interpolate(pa, pb, l);
                data.extend_from_slice(&p);
            }
            Ok(Embedding::Coordinates { dim: *dim, data, metric: metric.clone() })
        }
        Embedding::Points { space, index } => {
            let n = c.num_vertices();
            let m = space.len();
            let total = m + new.len();
            let mut dist = vec![0.0; total * total];
            for i in 0..m {
                dist[i * total..i * total + m].copy_from_slice(space.row(i));
            }
            // each point as barycentric weights on complex vertices
            let weights = |w: usize| -> Vec<(u32, f64)> {
                let (a, b, l) = new[w];
                vec![(a, 1.0 - l), (b, l)]
            };
            let flat = |x: &[(u32, f64)], y: &[(u32, f64)]| -> Option<f64> {
                let mut verts: Vec<u32> = x.iter().chain(y).map(|p| p.0).collect();
                verts.sort_unstable();
                verts.dedup();
                if verts.len() > 1 && c.find(&verts).is_none() {
                    return None;
                }
                let mut gamma: Vec<(u32, f64)> = x.to_vec();
                for &(v, wt) in y {
                    gamma.push((v, -wt));
                }
                let mut q = 0.0;
                for &(u, gu) in &gamma {
                    for &(v, gv) in &gamma {
                        let d = space.d(index[u as usize], index[v as usize]);
                        q += gu * gv * d * d;
                    }
                }
                Some((-0.5 * q).max(0.0).sqrt())
            };
            // point indices of vertices, and the vertex of each old point
            let mut vertex_of = vec![u32::MAX; m];
            for v in 0..n {
                vertex_of[index[v]] = v as u32;
            }
            for w in 0..new.len() {
                let (a, b, l) = new[w];
                let (pa, pb) = (index[a as usize], index[b as usize]);
                let len = space.d(pa, pb);
                let iw = m + w;
                let ww = weights(w);
                for q in 0..m {
                    let glued = (l * len + space.d(pa, q)).min((1.0 - l) * len + space.d(pb, q));
                    let d = if vertex_of[q] != u32::MAX {
                        flat(&ww, &[(vertex_of[q], 1.0)]).map_or(glued, |f| f.min(glued))
                    } else {
                        glued
                    };
                    dist[iw * total + q] = d;
                    dist[q * total + iw] = d;
                }
            }
            for w in 0..new.len() {
                let (a, b, l) = new[w];
                let (pa, pb) = (index[a as usize], index[b as usize]);
                let len = space.d(pa, pb);
                let iw = m + w;
                for u in w + 1..new.len() {
                    let iu = m + u;
                    let glued = (l * len + dist[iu * total + pa]).min((1.0 - l) * len + dist[iu * total + pb]);
                    let d = flat(&weights(w), &weights(u)).map_or(glued, |f| f.min(glued));
                    dist[iw * total + iu] = d;
                    dist[iu * total + iw] = d;
                }
            }
            for _ in 0..2 {
                for i in m..total {
                    for k in 0..total {
                        let dik = dist[i * total + k];
                        for j in 0..total {
                            let via = dik + dist[k * total + j];
                            if via < dist[i * total + j] {
                                dist[i * total + j] = via;
                                dist[j * total + i] = via;
                            }
                        }
                    }
                }
            }
            let mut idx = index.clone();
            idx.extend(m..total);
            let labels = space.labels().map(|l| {
                let mut l = l.to_vec();
                l.extend((m..total).map(|i| format!("split{i}")));
                l
            });
            let space = FiniteMetricSpace::from_flat_unchecked(total, dist, labels)
                .map_err(|e| Error::Construction(e.to_string()))?;
            Ok(Embedding::Points { space: Arc::new(space), index: idx })
        }
    }
}

/// Result of (iterated) slicing.
#[derive(Debug, Clone)]
pub struct SliceResult {
    pub current: SimplicialCurrent,
    /// Levels actually used, after snapping.
    pub levels: Vec<f64>,
    /// Slicing functions written on the refined complex.
    pub functions: Vec<PLFunction>,
    pub refined_complex: Arc<GeometricComplex>,
    /// Snap offset applied to each level.
    pub nudges: Vec<f64>,
    /// True when a level met a region where the function is constant on a
    /// piece of positive mass.
    pub non_generic: bool,
    pub warnings: Vec<String>,
}

/// Slice on an existing refinement: `t` must live on the refined complex
/// and `values` is the slicing function there.
fn slice_on_refined(t: &SimplicialCurrent, values: &[f64], level: f64) -> SimplicialCurrent {
    let below = |v: usize| values[v] <= level;
    let part = t.restrict_vertices(below);
    let bd = t.boundary().restrict_vertices(below);
    part.boundary().checked_sub(&bd).expect("same complex")
}

impl Refinement {
    /// Slice of a chain on the parent complex by the refining function.
    pub fn slice(&self, t: &SimplicialCurrent, f: &PLFunction) -> Result<SimplicialCurrent> {
        if t.dim() == 0 {
            return arg("cannot slice a 0-current");
        }
        let tr = self.transfer_current(t)?;
        let values = self.level_values(f);
        Ok(slice_on_refined(&tr, &values, self.level))
    }

    /// Part of a parent chain in {f <= level}, on the refined complex.
    pub fn sublevel(&self, t: &SimplicialCurrent, f: &PLFunction) -> Result<SimplicialCurrent> {
        let tr = self.transfer_current(t)?;
        let values = self.level_values(f);
        Ok(tr.restrict_vertices(|v| values[v] <= self.level))
    }

    /// Part of a parent chain in {f >= level}, on the refined complex.
    pub fn superlevel(&self, t: &SimplicialCurrent, f: &PLFunction) -> Result<SimplicialCurrent> {
        let tr = self.transfer_current(t)?;
        let values = self.level_values(f);
        Ok(tr.restrict_vertices(|v| values[v] >= self.level))
    }
}

fn flat_at_level(t: &SimplicialCurrent, f: &PLFunction, nudge: f64) -> bool {
    if nudge == 0.0 {
        return false;
    }
    let (lo, hi) = f.min_max();
    let tol = 2.0 * nudge.abs() + SNAP_TOL * (hi - lo);
    t.iter().any(|(i, _)| {
        let s = t.complex().simplex(t.dim(), i);
        let v0 = f.value(s[0] as usize);
        t.complex().simplex_mass(t.dim(), i) > VOLUME_FLOOR
            && s.iter().all(|&v| (f.value(v as usize) - v0).abs() <= tol)
    })
}

/// The slice <T, f, s>.
pub fn slice(t: &SimplicialCurrent, f: &PLFunction, s: f64) -> Result<SliceResult> {
    iterated_slice(t, std::slice::from_ref(f), &[s])
}

/// Left-to-right iterated slice <...<T, f1, t1>, ..., fj, tj>.
///
/// `fs` may hold more functions than there are levels: the extra ones are
/// carried over to the refined complex and returned in `functions`, ready
/// for further slicing.
pub fn iterated_slice(t: &SimplicialCurrent, fs: &[PLFunction], levels: &[f64]) -> Result<SliceResult> {
    if fs.len() < levels.len() {
        return arg(format!("{} functions for {} levels", fs.len(), levels.len()));
    }
    if levels.len() > t.dim() {
        return arg(format!("cannot slice a {}-current {} times", t.dim(), levels.len()));
    }
    for f in fs {
        same_complex(t.complex(), f.complex())?;
    }
    let mut cur = t.clone();
    let mut funcs: Vec<PLFunction> = fs.to_vec();
    let mut used = Vec::with_capacity(levels.len());
    let mut nudges = Vec::with_capacity(levels.len());
    let mut warnings = Vec::new();
    let mut non_generic = false;
    for (j, &s) in levels.iter().enumerate() {
        let r = subdivide_at_level(&funcs[j], s)?;
        if r.nudge != 0.0 {
            warnings.push(format!("level {s} snapped by {:e}", r.nudge));
            if flat_at_level(&cur, &funcs[j], r.nudge) {
                non_generic = true;
                warnings.push(format!("level {s} meets a region where the function is constant"));
            }
        }
        if r.degenerate > 0 {
            warnings.push(format!("{} degenerate pieces kept", r.degenerate));
        }
        let next = r.slice(&cur, &funcs[j])?;
        let mut moved = Vec::with_capacity(funcs.len());
        for (i, f) in funcs.iter().enumerate() {
            if i == j {
                moved.push(PLFunction::new(r.complex.clone(), r.level_values(f))?);
            } else {
                moved.push(r.transfer_function(f)?);
            }
        }
        funcs = moved;
        used.push(r.level);
        nudges.push(r.nudge);
        cur = next;
    }
    let refined_complex = cur.complex().clone();
    Ok(SliceResult { current: cur, levels: used, functions: funcs, refined_complex, nudges, non_generic, warnings })
}

/// Region used by [`restrict`].
pub enum Region<'a> {
    /// {f <= s}
    Sublevel(&'a PLFunction, f64),
    /// {f >= s}
    Superlevel(&'a PLFunction, f64),
    /// {lo <= f <= hi}
    Band(&'a PLFunction, f64, f64),
    /// Arbitrary predicate on points; barycenter mode only.
    Predicate(&'a dyn Fn(&[f64]) -> bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictMode {
    Barycenter,
    Subdivided,
}

/// T restricted to a region. Subdivided mode refines along the region's
/// level sets first and returns a chain on the refined complex.
pub fn restrict(t: &SimplicialCurrent, region: Region<'_>, mode: RestrictMode) -> Result<SimplicialCurrent> {
    let bary = |f: &PLFunction, keep: &dyn Fn(f64) -> bool| {
        same_complex(t.complex(), f.complex())?;
        let k = t.dim();
        let coeffs: BTreeMap<u32, i64> = t
            .iter()
            .filter(|&(i, _)| {
                let s = t.complex().simplex(k, i);
                keep(s.iter().map(|&v| f.value(v as usize)).sum::<f64>() / s.len() as f64)
            })
            .map(|(i, c)| (i as u32, c))
            .collect();
        Ok(SimplicialCurrent::from_map(t.complex().clone(), k, coeffs))
    };
    match (region, mode) {
        (Region::Predicate(p), RestrictMode::Barycenter) => t.restrict_barycenter(p),
        (Region::Predicate(_), RestrictMode::Subdivided) => {
            arg("subdivided restriction needs a PL region (sublevel, superlevel or band)")
        }
        (Region::Sublevel(f, s), RestrictMode::Barycenter) => bary(f, &|x| x <= s),
        (Region::Superlevel(f, s), RestrictMode::Barycenter) => bary(f, &|x| x >= s),
        (Region::Band(f, lo, hi), RestrictMode::Barycenter) => bary(f, &|x| lo <= x && x <= hi),
        (Region::Sublevel(f, s), RestrictMode::Subdivided) => {
            same_complex(t.complex(), f.complex())?;
            subdivide_at_level(f, s)?.sublevel(t, f)
        }
        (Region::Superlevel(f, s), RestrictMode::Subdivided) => {
            same_complex(t.complex(), f.complex())?;
            subdivide_at_level(f, s)?.superlevel(t, f)
        }
        (Region::Band(f, lo, hi), RestrictMode::Subdivided) => {
            same_complex(t.complex(), f.complex())?;
            let r1 = subdivide_at_level(f, lo)?;
            let upper = r1.superlevel(t, f)?;
            let f1 = r1.transfer_function(f)?;
            subdivide_at_level(&f1, hi)?.sublevel(&upper, &f1)
        }
    }
}

/// A ball S(p, r) together with the refinement it lives on.
#[derive(Debug, Clone)]
pub struct Ball {
    pub current: SimplicialCurrent,
    pub refinement: Refinement,
    /// Distance to the center on the refined complex, exactly r on the new
    /// vertices.
    pub rho: PLFunction,
}

/// T restricted to {rho_a < r} for an arbitrary center.
pub fn ball_at(t: &SimplicialCurrent, center: &Anchor, r: f64) -> Result<Ball> {
    if !(r > 0.0) {
        return arg(format!("radius must be positive, got {r}"));
    }
    let rho = PLFunction::sample(t.complex().clone(), &Field::Distance(center.clone()))?;
    // a radius reaching the farthest vertex keeps everything
    let (lo, hi) = rho.min_max();
    let r = if r >= hi - SNAP_TOL * (hi - lo) { r.max(hi + SNAP_TOL * (hi - lo).max(1.0)) } else { r };
    let refinement = subdivide_at_level(&rho, r)?;
    let current = refinement.sublevel(t, &rho)?;
    let rho = PLFunction::new(refinement.complex.clone(), refinement.level_values(&rho))?;
    Ok(Ball { current, refinement, rho })
}

/// The ball S(p, r) = T restricted to {rho_p < r}, on the refined complex.
pub fn ball(t: &SimplicialCurrent, p: usize, r: f64) -> Result<SimplicialCurrent> {
    if p >= t.complex().num_vertices() {
        return arg(format!("center vertex {p} out of range"));
    }
    Ok(ball_at(t, &t.complex().anchor(p), r)?.current)
}

/// The sphere <T, rho_p, r>.
pub fn sphere(t: &SimplicialCurrent, p: usize, r: f64) -> Result<SliceResult> {
    if !(r > 0.0) {
        return arg(format!("radius must be positive, got {r}"));
    }
    let rho = PLFunction::distance_from_vertex(t.complex().clone(), p)?;
    slice(t, &rho, r)
}

/// Quadrature of s -> M(<T, f, s>).
#[derive(Debug, Clone, Serialize)]
pub struct CoareaReport {
    pub integral: f64,
    /// Lip(f) M(T).
    pub bound: f64,
    pub levels: Vec<f64>,
    pub masses: Vec<f64>,
    pub step: f64,
    pub max_slice_mass: f64,
}

/// Trapezoid quadrature of slice masses over [min f, max f] on `samples`
/// equally spaced levels. Levels are evaluated in parallel.
pub fn coarea_profile(t: &SimplicialCurrent, f: &PLFunction, samples: usize) -> Result<CoareaReport> {
    if samples < 2 {
        return arg("coarea needs at least 2 samples");
    }
    same_complex(t.complex(), f.complex())?;
    if t.dim() == 0 {
        return arg("cannot slice a 0-current");
    }
    let bound = f.lip() * t.mass();
    let (lo, hi) = f.min_max();
    if !(hi > lo) {
        return Ok(CoareaReport { integral: 0.0, bound, levels: vec![lo], masses: vec![0.0], step: 0.0, max_slice_mass: 0.0 });
    }
    let step = (hi - lo) / (samples - 1) as f64;
    let levels: Vec<f64> = (0..samples).map(|i| lo + step * i as f64).collect();
    let masses = levels
        .par_iter()
        .map(|&s| Ok(slice(t, f, s)?.current.mass()))
        .collect::<Result<Vec<f64>>>()?;
    let integral = trapezoid(&masses, step);
    let max_slice_mass = masses.iter().fold(0.0, |a: f64, &b| a.max(b));
    Ok(CoareaReport { integral, bound, levels, masses, step, max_slice_mass })
}

pub(crate) fn trapezoid(values: &[f64], step: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    step * (inner + 0.5 * (values[0] + values[values.len() - 1]))
}

/// Compares chains on two complexes by their oriented vertex tuples, for
/// complexes that share vertex numbering (for instance two independent
/// refinements of the same data).
pub fn same_chain_by_vertices(a: &SimplicialCurrent, b: &SimplicialCurrent) -> bool {
    fn tuples(t: &SimplicialCurrent) -> BTreeMap<Vec<u32>, i64> {
        t.iter().map(|(i, c)| (t.complex().simplex(t.dim(), i).to_vec(), c)).collect()
    }
    (a.dim() == b.dim() || (a.is_zero() && b.is_zero())) && tuples(a) == tuples(b)
}
