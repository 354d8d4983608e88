//! Sequences of meshes, explicit common embeddings, and numerical witnesses
//! for continuity and semicontinuity along them.
//!
//! Intrinsic flat distances are out of reach, so every bound here is a flat
//! distance inside a concrete common space we build ourselves. That is an
//! upper bound for the intrinsic one, which is the direction the continuity
//! inequalities need.

use crate::complex::{Embedding, GeometricComplex};
use crate::current::{Anchor, Field, PLFunction, SimplicialCurrent};
use crate::error::{arg, Error, Result};
use crate::fillvol::{filling_volume, flat_distance};
use crate::meshgen;
use crate::metric::Metric;
use crate::metricspace::FiniteMetricSpace;
use crate::product::{interval_filling_volume, sliced_interval_fill};
use crate::slicedfill::{quadrature_tolerance, sf_k, sliced_fill_witnesses};
use crate::slicing::{ball, restrict, subdivide_at_level, Region, RestrictMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

/// Icosphere level used by the spline family.
pub const SPLINE_LEVEL: usize = 3;
/// Cells per long circle of the thin-torus family.
pub const TORUS_CELLS: usize = 12;
/// Cells on the short circle of the thin-torus family.
pub const TORUS_SHORT_CELLS: usize = 3;
/// Vertical offset between stacked members.
pub const STACK_DELTA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    SphereSplines,
    ThinTorus,
    RefinedSphere,
    RefinedDisk,
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere_splines" => Ok(FamilyKind::SphereSplines),
            "thin_torus" => Ok(FamilyKind::ThinTorus),
            "refined_sphere" => Ok(FamilyKind::RefinedSphere),
            "refined_disk" => Ok(FamilyKind::RefinedDisk),
            _ => arg(format!(
                "unknown family '{s}' (expected sphere_splines, thin_torus, refined_sphere or refined_disk)"
            )),
        }
    }
}

/// A vertex followed along the sequence.
#[derive(Debug, Clone, Serialize)]
pub struct TrackedPoint {
    pub name: String,
    pub vertex: usize,
    /// Expected to leave every compact set of the limit (spike tips).
    pub disappearing: bool,
}

#[derive(Debug, Clone)]
pub struct Member {
    pub param: f64,
    pub current: SimplicialCurrent,
    pub tracked: Vec<TrackedPoint>,
    /// Generator-reported quantities, e.g. total spike area.
    pub info: BTreeMap<String, f64>,
    /// Simplicial vertex map onto the previous member, when the generator
    /// provides one; it carries this member's chain onto the previous one.
    pub to_previous: Option<Vec<usize>>,
}

impl Member {
    pub fn tracked(&self, name: &str) -> Option<usize> {
        self.tracked.iter().find(|t| t.name == name).map(|t| t.vertex)
    }
}

/// Expected limit of a family. The current is given when it is a mesh we
/// can build; otherwise only its mass and diameter are known.
#[derive(Debug, Clone)]
pub struct Limit {
    pub current: Option<SimplicialCurrent>,
    pub mass: f64,
    pub diameter: f64,
    /// Mesh error allowed when comparing members with the limit.
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct SequenceFamily {
    pub kind: FamilyKind,
    pub schedule: Vec<f64>,
    pub seed: u64,
    pub members: Vec<Member>,
    pub limit: Option<Limit>,
}

impl SequenceFamily {
    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::SphereSplines => "sphere_splines",
            FamilyKind::ThinTorus => "thin_torus",
            FamilyKind::RefinedSphere => "refined_sphere",
            FamilyKind::RefinedDisk => "refined_disk",
        }
    }
}

/// Builds the members of a family. Schedules are mesh sizes h for the
/// refined families, short-circle half circumferences eps for the thin
/// torus, and spike counts j for the splines. The seed drives the only
/// random choice, a rotation of the base disk.
pub fn build_family(name: &str, schedule: &[f64], seed: u64) -> Result<SequenceFamily> {
    let kind: FamilyKind = name.parse()?;
    if schedule.is_empty() {
        return arg("schedule must be nonempty");
    }
    if schedule.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return arg("schedule entries must be positive");
    }
    let (members, limit) = match kind {
        FamilyKind::RefinedDisk => refined_disks(schedule, seed)?,
        FamilyKind::RefinedSphere => {
            let members = schedule
                .par_iter()
                .map(|&h| {
                    let n_lat = (((PI / h).round() as usize).max(2) + 1) / 2 * 2;
                    let current = meshgen::sphere_latlong(1.0, n_lat, 2 * n_lat);
                    let eq = meshgen::nearest_vertex(current.complex(), &[1.0, 0.0, 0.0]);
                    Member {
                        param: h,
                        tracked: vec![point("north", 0), point("equator", eq)],
                        info: BTreeMap::from([("n_lat".to_string(), n_lat as f64)]),
                        current,
                        to_previous: None,
                    }
                })
                .collect();
            (members, Some(Limit { current: None, mass: 4.0 * PI, diameter: PI, tolerance: 0.05 * 4.0 * PI }))
        }
        FamilyKind::ThinTorus => {
            let members = schedule
                .par_iter()
                .map(|&eps| {
                    let current = meshgen::thin_torus(eps, TORUS_CELLS, TORUS_SHORT_CELLS)?;
                    Ok(Member {
                        param: eps,
                        tracked: vec![point("origin", 0)],
                        info: BTreeMap::from([("analytic_mass".to_string(), 8.0 * PI * PI * eps)]),
                        current,
                        to_previous: None,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            // the flat limit is the zero current
            (members, Some(Limit { current: None, mass: 0.0, diameter: 0.0, tolerance: 1e-9 }))
        }
        FamilyKind::SphereSplines => spline_spheres(schedule)?,
    };
    Ok(SequenceFamily { kind, schedule: schedule.to_vec(), seed, members, limit })
}

fn point(name: &str, vertex: usize) -> TrackedPoint {
    TrackedPoint { name: name.into(), vertex, disappearing: false }
}

/// Disks obtained from one hexagonal-ring base by repeated midpoint
/// subdivision, new boundary vertices pushed onto the unit circle. The
/// first entry fixes the base ring count; later entries pick the nearest
/// subdivision depth.
fn refined_disks(schedule: &[f64], seed: u64) -> Result<(Vec<Member>, Option<Limit>)> {
    let h0 = schedule[0];
    let rings = ((1.0 / h0).round() as usize).max(1);
    let twist = if seed == 0 { 0.0 } else { ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..PI / 3.0) };
    let mut levels = Vec::with_capacity(schedule.len());
    for &h in schedule {
        let l = (h0 / h).log2().round();
        if l < 0.0 {
            return arg("refined_disk schedule must be nonincreasing");
        }
        levels.push(l as usize);
    }
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return arg("refined_disk schedule must be nonincreasing");
    }
    let base = meshgen::disk_rings(1.0, rings, 0.0);
    let base = if twist != 0.0 { rotate(&base, twist)? } else { base };
    let mut members: Vec<Member> = Vec::new();
    let mut cur = base;
    let mut depth = 0;
    let mut pending: Option<Vec<usize>> = None;
    for (i, &l) in levels.iter().enumerate() {
        while depth < l {
            let (next, g) = meshgen::midpoint_subdivide(&cur, Some(1.0))?;
            pending = Some(match pending {
                None => g,
                Some(prev) => g.iter().map(|&v| prev[v]).collect(),
            });
            cur = next;
            depth += 1;
        }
        let to_previous = if i == 0 { None } else { Some(pending.take().unwrap_or_else(|| (0..cur.complex().num_vertices()).collect())) };
        pending = None;
        let n_boundary = cur.boundary().len();
        members.push(Member {
            param: schedule[i],
            tracked: vec![point("center", 0)],
            info: BTreeMap::from([("boundary_edges".to_string(), n_boundary as f64)]),
            current: cur.clone(),
            to_previous,
        });
    }
    // inscribed regular polygon: the area deficit is the mesh error
    let nb = members.last().unwrap().info["boundary_edges"];
    let deficit = PI - 0.5 * nb * (2.0 * PI / nb).sin();
    Ok((members, Some(Limit { current: None, mass: PI, diameter: 2.0, tolerance: deficit + 1e-9 })))
}

fn rotate(t: &SimplicialCurrent, angle: f64) -> Result<SimplicialCurrent> {
    let c = t.complex();
    let (s, co) = angle.sin_cos();
    let pts: Vec<Vec<f64>> = (0..c.num_vertices())
        .map(|v| {
            let p = c.coords(v).unwrap();
            vec![co * p[0] - s * p[1], s * p[0] + co * p[1]]
        })
        .collect();
    let simplices: Vec<Vec<usize>> =
        (0..c.count(2)).map(|i| c.simplex(2, i).iter().map(|&v| v as usize).collect()).collect();
    let nc = Arc::new(GeometricComplex::new(Embedding::euclidean(&pts)?, &simplices)?);
    let tuples: Vec<(Vec<usize>, i64)> =
        t.iter().map(|(i, k)| (c.simplex(2, i).iter().map(|&v| v as usize).collect(), k)).collect();
    SimplicialCurrent::from_oriented(nc, 2, &tuples)
}

fn spline_spheres(schedule: &[f64]) -> Result<(Vec<Member>, Option<Limit>)> {
    let js: Vec<usize> = schedule.iter().map(|&j| j.round() as usize).collect();
    if js.iter().any(|&j| j == 0) {
        return arg("spike counts must be at least 1");
    }
    // a base point that stays clear of every spike in the schedule
    let (pts, _) = meshgen::icosphere_data(1.0, SPLINE_LEVEL);
    let jmax = *js.iter().max().unwrap();
    let base_point = meshgen::farthest_point_order(&pts, 0, jmax + 1)[jmax];
    let members = js
        .par_iter()
        .zip(schedule.par_iter())
        .map(|(&j, &param)| {
            let w = 1.0 / (j * j) as f64;
            let s = meshgen::sphere_splines(SPLINE_LEVEL, j, w, 1.0)?;
            let area: f64 = s.spike_areas.iter().sum();
            Ok(Member {
                param,
                tracked: vec![
                    TrackedPoint { name: "tip".into(), vertex: s.tips[0], disappearing: true },
                    point("base", base_point),
                ],
                info: BTreeMap::from([("spike_area".to_string(), area), ("width".to_string(), w)]),
                current: s.current,
                to_previous: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = meshgen::sphere_splines(SPLINE_LEVEL, 0, 1.0, 1.0)?.current;
    let mass = limit.mass();
    let diameter = limit.complex().vertex_set_diameter(&limit.support_vertices());
    Ok((members, Some(Limit { current: Some(limit), mass, diameter, tolerance: 1e-9 })))
}

/// A finite metric space holding two members isometrically.
#[derive(Debug, Clone)]
pub struct CommonEmbedding {
    pub ambient: FiniteMetricSpace,
    /// Vertex maps of the two members into the ambient space.
    pub injections: [Vec<usize>; 2],
    /// Largest isometry defect of the injections (zero by construction).
    pub distortion: f64,
    /// Distortion of the correspondence used to glue.
    pub correspondence_distortion: f64,
    pub delta: f64,
}

/// Disjoint union of the vertex sets of `a` and `b` with the cross
/// distances d(a, b) = min over matched (x, y) of d_A(a, x) + delta +
/// d_B(y, b). Admissible when delta is at least half the distortion of the
/// correspondence; the triangle inequality is verified either way.
pub fn common_embed(
    a: &GeometricComplex,
    b: &GeometricComplex,
    correspondence: &[(usize, usize)],
    delta: f64,
) -> Result<CommonEmbedding> {
    if correspondence.is_empty() {
        return arg("correspondence must be nonempty");
    }
    if !(delta > 0.0) {
        return arg(format!("delta must be positive, got {delta}"));
    }
    let (na, nb) = (a.num_vertices(), b.num_vertices());
    if correspondence.iter().any(|&(x, y)| x >= na || y >= nb) {
        return arg("correspondence refers to a missing vertex");
    }
    let dis = correspondence_distortion(a, b, correspondence);
    let n = na + nb;
    // min over matched (x, y) of d_A(a, x) + d_B(y, b), computed through
    // the per-x best d_B(y, b)
    let mut by_x: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(x, y) in correspondence {
        by_x.entry(x).or_default().push(y);
    }
    let near_b: Vec<(usize, Vec<f64>)> = by_x
        .par_iter()
        .map(|(&x, ys)| (x, (0..nb).map(|v| ys.iter().map(|&y| b.distance(y, v)).fold(f64::INFINITY, f64::min)).collect()))
        .collect();
    let cross: Vec<Vec<f64>> = (0..na)
        .into_par_iter()
        .map(|u| {
            let mut row = vec![f64::INFINITY; nb];
            for (x, nbx) in &near_b {
                let dax = a.distance(u, *x);
                for v in 0..nb {
                    row[v] = row[v].min(dax + nbx[v]);
                }
            }
            row.iter().map(|d| d + delta).collect()
        })
        .collect();
    let mut dist = vec![0.0; n * n];
    for i in 0..na {
        for j in 0..na {
            dist[i * n + j] = a.distance(i, j);
        }
        for v in 0..nb {
            dist[i * n + na + v] = cross[i][v];
            dist[(na + v) * n + i] = cross[i][v];
        }
    }
    for u in 0..nb {
        for v in 0..nb {
            dist[(na + u) * n + na + v] = b.distance(u, v);
        }
    }
    check_mixed_triangles(&dist, na, n)?;
    let ambient = FiniteMetricSpace::from_flat_unchecked(n, dist, None)?;
    let inj_a: Vec<usize> = (0..na).collect();
    let inj_b: Vec<usize> = (na..n).collect();
    Ok(CommonEmbedding { ambient, injections: [inj_a, inj_b], distortion: 0.0, correspondence_distortion: dis, delta })
}

/// Max |d_A(x, x') - d_B(y, y')| over pairs of matched pairs.
pub fn correspondence_distortion(a: &GeometricComplex, b: &GeometricComplex, corr: &[(usize, usize)]) -> f64 {
    corr.par_iter()
        .map(|&(x, y)| corr.iter().map(|&(x2, y2)| (a.distance(x, x2) - b.distance(y, y2)).abs()).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max)
}

/// Each vertex of either complex matched to its nearest vertex in the
/// other, under the metric of `a` (both need coordinates in one space).
pub fn nearest_correspondence(a: &GeometricComplex, b: &GeometricComplex) -> Result<Vec<(usize, usize)>> {
    if a.coords(0).is_none() || b.coords(0).is_none() {
        return arg("nearest-vertex matching needs coordinate embeddings");
    }
    let mut corr: Vec<(usize, usize)> = (0..a.num_vertices())
        .into_par_iter()
        .map(|x| (x, meshgen::nearest_vertex(b, a.coords(x).unwrap())))
        .collect();
    corr.extend(
        (0..b.num_vertices())
            .into_par_iter()
            .map(|y| (meshgen::nearest_vertex(a, b.coords(y).unwrap()), y))
            .collect::<Vec<_>>(),
    );
    corr.sort_unstable();
    corr.dedup();
    Ok(corr)
}

/// Triangles with all three points on one side hold because each side is a
/// metric already, and (a, a', b) holds because the cross distances are
/// an infimum over paths. That leaves d(a, a') <= d(a, b) + d(b, a') and
/// its mirror.
fn check_mixed_triangles(dist: &[f64], na: usize, n: usize) -> Result<()> {
    let tol = crate::metricspace::METRIC_TOL;
    let sides = [(0..na, na..n), (na..n, 0..na)];
    for (side, other) in sides {
        let bad = side.clone().into_par_iter().find_map_any(|i| {
            for j in side.clone() {
                let direct = dist[i * n + j];
                for k in other.clone() {
                    let via = dist[i * n + k] + dist[k * n + j];
                    if direct > via + tol {
                        return Some((i, k, j, direct, via));
                    }
                }
            }
            None
        });
        if let Some((i, k, j, direct, via)) = bad {
            return arg(format!(
                "delta too small: triangle inequality fails for ({i}, {k}, {j}): d({i},{j}) = {direct} > {via}"
            ));
        }
    }
    Ok(())
}

/// Two members stacked in R^{d+1}: the coarse one at height 0, the fine one
/// at height delta, joined by the mapping cylinder of a simplicial vertex
/// map fine -> coarse. Everything is Euclidean, so the injections are exact
/// isometries and every cylinder simplex is embeddable.
#[derive(Debug, Clone)]
pub struct Stacked {
    pub complex: Arc<GeometricComplex>,
    pub coarse: SimplicialCurrent,
    pub fine: SimplicialCurrent,
    /// Vertex of the ambient complex for each coarse / fine vertex.
    pub coarse_map: Vec<usize>,
    pub fine_map: Vec<usize>,
    g: Vec<usize>,
}

pub fn stacked_embedding(coarse: &SimplicialCurrent, fine: &SimplicialCurrent, g: &[usize], delta: f64) -> Result<Stacked> {
    let (cc, fc) = (coarse.complex(), fine.complex());
    if g.len() != fc.num_vertices() || g.iter().any(|&v| v >= cc.num_vertices()) {
        return arg("vertex map does not match the members");
    }
    if coarse.dim() != fine.dim() {
        return arg("members differ in dimension");
    }
    if !(delta > 0.0) {
        return arg("delta must be positive");
    }
    for (c, name) in [(cc, "coarse"), (fc, "fine")] {
        if !matches!(c.embedding().metric(), Some(Metric::Euclidean)) {
            return arg(format!("{name} member needs Euclidean coordinates"));
        }
    }
    let n1 = cc.num_vertices();
    let mut pts: Vec<Vec<f64>> = (0..n1).map(|v| lift(cc.coords(v).unwrap(), 0.0)).collect();
    pts.extend((0..fc.num_vertices()).map(|v| lift(fc.coords(v).unwrap(), delta)));
    let top = |v: usize| n1 + v;
    let k = fine.dim();
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    for (i, _) in coarse.iter() {
        simplices.push(cc.simplex(k, i).iter().map(|&v| v as usize).collect());
    }
    // prisms over every face of the fine support
    let mut faces = std::collections::BTreeSet::new();
    for (i, _) in fine.iter() {
        let s: Vec<usize> = fc.simplex(k, i).iter().map(|&v| v as usize).collect();
        for mask in 1u32..(1 << s.len()) {
            let f: Vec<usize> = (0..s.len()).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
            faces.insert(f);
        }
    }
    for f in &faces {
        for (tuple, _) in staircase(f, g, top) {
            simplices.push(tuple);
        }
        let img: Vec<usize> = f.iter().map(|&v| g[v]).collect();
        if distinct(&img) {
            simplices.push(img);
        }
    }
    for (i, _) in fine.iter() {
        simplices.push(fc.simplex(k, i).iter().map(|&v| top(v as usize)).collect());
    }
    for s in simplices.iter_mut() {
        s.sort_unstable();
    }
    simplices.sort();
    simplices.dedup();
    let complex = Arc::new(GeometricComplex::new(Embedding::euclidean(&pts)?, &simplices)?);
    let coarse_map: Vec<usize> = (0..n1).collect();
    let fine_map: Vec<usize> = (0..fc.num_vertices()).map(top).collect();
    let coarse_k = coarse.push_forward(&complex, &coarse_map)?;
    let fine_k = fine.push_forward(&complex, &fine_map)?;
    Ok(Stacked { complex, coarse: coarse_k, fine: fine_k, coarse_map, fine_map, g: g.to_vec() })
}

fn lift(p: &[f64], z: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q.push(z);
    q
}

fn distinct(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// Nondegenerate terms of sum_i (-1)^i [v_0..v_i, g(v_i)..g(v_k)] for a
/// simplex listed in increasing order.
fn staircase(f: &[usize], g: &[usize], top: impl Fn(usize) -> usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    for i in 0..f.len() {
        let bottom: Vec<usize> = f[i..].iter().map(|&v| g[v]).collect();
        if !distinct(&bottom) {
            continue;
        }
        let mut t: Vec<usize> = f[..=i].iter().map(|&v| top(v)).collect();
        t.extend(bottom);
        out.push((t, if i % 2 == 0 { 1 } else { -1 }));
    }
    out
}

impl Stacked {
    /// The cylinder chain P(S) of a chain S on the fine member (given on
    /// the ambient complex). It satisfies dP(S) + P(dS) = g#S - S, where
    /// g#S is the image on the coarse level.
    pub fn cylinder(&self, s: &SimplicialCurrent) -> Result<SimplicialCurrent> {
        let c = &self.complex;
        let n1 = self.coarse_map.len();
        let mut tuples = Vec::new();
        for (i, coeff) in s.iter() {
            let verts: Vec<usize> = c.simplex(s.dim(), i).iter().map(|&v| v as usize).collect();
            if verts.iter().any(|&v| v < n1) {
                return arg("cylinder needs a chain on the fine level");
            }
            let f: Vec<usize> = verts.iter().map(|&v| v - n1).collect();
            for (t, sign) in staircase(&f, &self.g, |v| n1 + v) {
                tuples.push((t, sign * coeff));
            }
        }
        SimplicialCurrent::from_oriented(c.clone(), s.dim() + 1, &tuples)
    }

    /// g#S on the coarse level for a chain S on the fine level.
    pub fn image(&self, s: &SimplicialCurrent) -> Result<SimplicialCurrent> {
        let n1 = self.coarse_map.len();
        let vmap: Vec<usize> =
            (0..self.complex.num_vertices()).map(|v| if v < n1 { v } else { self.g[v - n1] }).collect();
        s.push_forward(&self.complex, &vmap)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SemiRow {
    pub param: f64,
    pub mass: f64,
    pub diameter: f64,
    pub mass_ok: bool,
    pub diameter_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemicontinuityReport {
    pub family: String,
    pub rows: Vec<SemiRow>,
    pub limit_mass: f64,
    pub limit_diameter: f64,
    pub tolerance: f64,
    /// The asserted conditions on the last member.
    pub last_mass_ok: bool,
    pub last_diameter_ok: bool,
    /// The same conditions at every member.
    pub all_mass_ok: bool,
    pub all_diameter_ok: bool,
}

/// Mass and diameter along the schedule against the limit.
pub fn semicontinuity_report(family: &SequenceFamily) -> Result<SemicontinuityReport> {
    let Some(limit) = &family.limit else {
        return arg("family has no expected limit");
    };
    let tol = limit.tolerance;
    let rows: Vec<SemiRow> = family
        .members
        .par_iter()
        .map(|m| {
            let mass = m.current.mass();
            let diameter = m.current.complex().vertex_set_diameter(&m.current.support_vertices());
            SemiRow {
                param: m.param,
                mass,
                diameter,
                mass_ok: mass >= limit.mass - tol,
                diameter_ok: diameter >= limit.diameter - tol.max(1e-9),
            }
        })
        .collect();
    let last = rows.last().unwrap();
    Ok(SemicontinuityReport {
        family: family.name().into(),
        limit_mass: limit.mass,
        limit_diameter: limit.diameter,
        tolerance: tol,
        last_mass_ok: last.mass_ok,
        last_diameter_ok: last.diameter_ok,
        all_mass_ok: rows.iter().all(|r| r.mass_ok),
        all_diameter_ok: rows.iter().all(|r| r.diameter_ok),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// FillVol of the sphere around the tracked center.
    Fillvol,
    /// SF with one distance-to-witness function.
    Sf,
    /// SF_k over witness tuples.
    Sfk,
    /// IFV_eps of the ball.
    Ifv,
    /// SIF_eps with one distance-to-witness function.
    Sif,
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fillvol" => Ok(Quantity::Fillvol),
            "sf" => Ok(Quantity::Sf),
            "sfk" => Ok(Quantity::Sfk),
            "ifv" => Ok(Quantity::Ifv),
            "sif" => Ok(Quantity::Sif),
            _ => arg(format!("unknown quantity '{s}' (expected fillvol, sf, sfk, ifv or sif)")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepParams {
    pub r: f64,
    pub grid: usize,
    pub epsilon: f64,
    pub k: usize,
    pub candidates: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { r: 0.5, grid: 16, epsilon: 0.1, k: 1, candidates: 8 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub center: usize,
    pub witness: Option<usize>,
    pub value: f64,
    pub ball_mass: f64,
    /// Quadrature tolerance for integrated quantities, 1e-6 otherwise.
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRow {
    pub from: usize,
    pub to: usize,
    pub difference: f64,
    /// Values recomputed inside the common embedding, when there is one.
    pub embedded_values: Option<[f64; 2]>,
    /// Flat distance in the common embedding bounding the embedded gap.
    pub bound: Option<f64>,
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub family: String,
    pub quantity: Quantity,
    pub params: SweepParams,
    pub rows: Vec<SweepRow>,
    pub pairs: Vec<PairRow>,
    pub expected: Option<f64>,
    pub last_relative_error: Option<f64>,
    /// Every pair with a bound satisfies it.
    pub all_hold: bool,
    pub warnings: Vec<String>,
}

/// Computes a quantity on every member at its tracked points and compares
/// successive members. For refined disks the pair bound is checked inside
/// the stacked embedding, where both balls and the flat distance live on
/// one complex; elsewhere only the differences are reported.
pub fn continuity_sweep(family: &SequenceFamily, quantity: Quantity, params: &SweepParams) -> Result<SweepReport> {
    if !(params.r > 0.0) {
        return arg("radius must be positive");
    }
    let rows: Vec<SweepRow> = family
        .members
        .par_iter()
        .map(|m| member_value(family.kind, m, quantity, params))
        .collect::<Result<Vec<_>>>()?;
    let mut warnings = Vec::new();
    let mut pairs = Vec::new();
    for i in 1..rows.len() {
        let difference = (rows[i].value - rows[i - 1].value).abs();
        let mut row = PairRow { from: i - 1, to: i, difference, embedded_values: None, bound: None, holds: None };
        match (&family.members[i].to_previous, quantity) {
            (Some(g), Quantity::Fillvol) => {
                let (prev, cur) = (&family.members[i - 1], &family.members[i]);
                let st = stacked_embedding(&prev.current, &cur.current, g, STACK_DELTA)?;
                let gap = embedded_ball_gap(&st, params.r)?;
                row.embedded_values = Some([gap.fill_1, gap.fill_2]);
                row.bound = Some(gap.bound);
                row.holds = Some(gap.holds);
            }
            _ => {}
        }
        pairs.push(row);
    }
    if pairs.iter().all(|p| p.bound.is_none()) && pairs.len() > 0 {
        warnings.push("no common embedding for these members; differences are reported without bounds".into());
    }
    let expected = expected_value(family.kind, quantity, params);
    let last_relative_error = expected.map(|e| {
        let v = rows.last().unwrap().value;
        if e != 0.0 { (v - e).abs() / e.abs() } else { v.abs() }
    });
    Ok(SweepReport {
        family: family.name().into(),
        quantity,
        params: params.clone(),
        all_hold: pairs.iter().all(|p| p.holds != Some(false)),
        rows,
        pairs,
        expected,
        last_relative_error,
        warnings,
    })
}

fn expected_value(kind: FamilyKind, q: Quantity, p: &SweepParams) -> Option<f64> {
    match (kind, q) {
        (FamilyKind::RefinedDisk, Quantity::Fillvol) if p.r <= 1.0 => Some(PI * p.r * p.r),
        (FamilyKind::RefinedSphere, Quantity::Sf) if (p.r - PI / 2.0).abs() < 1e-9 => Some(PI * PI / 2.0),
        (FamilyKind::ThinTorus, Quantity::Sfk) => Some(0.0),
        _ => None,
    }
}

fn center_of(kind: FamilyKind, m: &Member) -> usize {
    let name = match kind {
        FamilyKind::RefinedDisk => "center",
        FamilyKind::RefinedSphere => "north",
        FamilyKind::ThinTorus => "origin",
        FamilyKind::SphereSplines => "base",
    };
    m.tracked(name).unwrap_or(0)
}

fn witness_of(t: &SimplicialCurrent, m: &Member, p: usize, r: f64) -> Result<usize> {
    if let Some(w) = m.tracked("equator") {
        return Ok(w);
    }
    // the vertex whose distance to p is closest to r
    let rho = PLFunction::distance_from_vertex(t.complex().clone(), p)?;
    let support = t.support_vertices();
    Ok(*support
        .iter()
        .min_by(|&&a, &&b| (rho.value(a) - r).abs().total_cmp(&(rho.value(b) - r).abs()))
        .unwrap())
}

fn member_value(kind: FamilyKind, m: &Member, q: Quantity, p: &SweepParams) -> Result<SweepRow> {
    let t = &m.current;
    let center = center_of(kind, m);
    let ball_cur = ball(t, center, p.r)?;
    let ball_mass = ball_cur.mass();
    let mut witness = None;
    let (value, tolerance) = match q {
        Quantity::Fillvol => (filling_volume(&ball_cur.boundary())?.value, 1e-6),
        Quantity::Ifv => (interval_filling_volume(&ball_cur.compact()?.0, p.epsilon, 1)?.fill.value, 1e-6),
        Quantity::Sf => {
            let w = witness_of(t, m, center, p.r)?;
            witness = Some(w);
            let rep = sliced_fill_witnesses(t, center, p.r, &[t.complex().anchor(w)], p.grid)?;
            (rep.integral, quadrature_tolerance(rep.richardson_error))
        }
        Quantity::Sif => {
            let w = witness_of(t, m, center, p.r)?;
            witness = Some(w);
            let f = PLFunction::distance_from_vertex(t.complex().clone(), w)?;
            let rep = sliced_interval_fill(t, center, p.r, &[f], p.epsilon, p.grid)?;
            (rep.integral, quadrature_tolerance(rep.richardson_error))
        }
        Quantity::Sfk => {
            let rep = sf_k(t, center, p.r, p.k, p.candidates, p.grid)?;
            let tol = rep.best.as_ref().map_or(1e-6, |b| quadrature_tolerance(b.richardson_error));
            (rep.value, tol)
        }
    };
    Ok(SweepRow { param: m.param, center, witness, value, ball_mass, tolerance })
}

/// Balls of radius r around the common center of two stacked disks (the
/// anchor sits halfway between the levels), refined once so that both live
/// on the same complex, then compared through the fill continuity bound.
fn embedded_ball_gap(st: &Stacked, r: f64) -> Result<crate::fillvol::ContinuityGap> {
    let c = &st.complex;
    let dim = c.coords(0).unwrap().len();
    let mut anchor = vec![0.0; dim];
    anchor[dim - 1] = 0.5 * STACK_DELTA;
    let rho = PLFunction::sample(c.clone(), &Field::Distance(Anchor::Coords(anchor)))?;
    let refinement = subdivide_at_level(&rho, r)?;
    let s1 = refinement.sublevel(&st.coarse, &rho)?;
    let s2 = refinement.sublevel(&st.fine, &rho)?;
    crate::fillvol::fillvol_continuity_gap(&s1, &s2)
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceShiftReport {
    pub r: f64,
    /// sup |f - rho| over vertices.
    pub delta: f64,
    pub flat: f64,
    pub annulus_mass: f64,
    pub boundary_annulus_mass: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Flat distance between <T, f, r> and <T, rho, r> against the annulus
/// masses of rho^-1(r - delta, r + delta), where delta bounds |f - rho|.
/// Both slices are taken on the common refinement along both level sets.
pub fn slice_shift_check(t: &SimplicialCurrent, rho: &PLFunction, f: &PLFunction, r: f64) -> Result<SliceShiftReport> {
    crate::current::same_complex(t.complex(), rho.complex())?;
    crate::current::same_complex(t.complex(), f.complex())?;
    let delta = rho.values().iter().zip(f.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let r1 = subdivide_at_level(f, r)?;
    let f1 = r1.transfer_function(f)?;
    let rho1 = r1.transfer_function(rho)?;
    let t1 = r1.transfer_current(t)?;
    let r2 = subdivide_at_level(&rho1, r)?;
    let t2 = r2.transfer_current(&t1)?;
    let f2 = r2.transfer_function(&f1)?;
    let rho2 = r2.transfer_function(&rho1)?;
    let slice_by = |g: &PLFunction, s: f64| -> Result<SimplicialCurrent> {
        let below = restrict(&t2, Region::Sublevel(g, s), RestrictMode::Barycenter)?;
        let bd_below = restrict(&t2.boundary(), Region::Sublevel(g, s), RestrictMode::Barycenter)?;
        below.boundary().checked_sub(&bd_below)
    };
    let sf = slice_by(&f2, r1.level)?;
    let srho = slice_by(&rho2, r2.level)?;
    let flat = flat_distance(&sf, &srho)?.value;
    // the snapped levels move by at most the snap tolerance; widen the band
    // by the same amount
    let slack = (r1.level - r).abs() + (r2.level - r).abs();
    let (lo, hi) = (r - delta - slack, r + delta + slack);
    let annulus_mass = band_mass(t, rho, lo, hi)?;
    let boundary_annulus_mass = if t.dim() == 0 { 0.0 } else { band_mass(&t.boundary(), rho, lo, hi)? };
    let bound = annulus_mass + boundary_annulus_mass;
    Ok(SliceShiftReport { r, delta, flat, annulus_mass, boundary_annulus_mass, bound, holds: flat <= bound + 1e-6 })
}

fn band_mass(t: &SimplicialCurrent, rho: &PLFunction, lo: f64, hi: f64) -> Result<f64> {
    if t.is_zero() {
        return Ok(0.0);
    }
    let (vlo, vhi) = rho.min_max();
    if hi < vlo || lo > vhi {
        return Ok(0.0);
    }
    if lo <= vlo && hi >= vhi {
        return Ok(t.mass());
    }
    let m = if lo <= vlo {
        restrict(t, Region::Sublevel(rho, hi), RestrictMode::Subdivided)?
    } else if hi >= vhi {
        restrict(t, Region::Superlevel(rho, lo), RestrictMode::Subdivided)?
    } else {
        restrict(t, Region::Band(rho, lo, hi), RestrictMode::Subdivided)?
    };
    Ok(m.mass())
}

/// rho + a vertex perturbation uniform in (-delta, delta).
pub fn perturbed(rho: &PLFunction, delta: f64, rng: &mut impl Rng) -> Result<PLFunction> {
    let values: Vec<f64> = rho.values().iter().map(|v| v + delta * (2.0 * rng.gen::<f64>() - 1.0)).collect();
    PLFunction::new(rho.complex().clone(), values)
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnulusDecay {
    pub center: usize,
    pub r: f64,
    pub deltas: Vec<f64>,
    pub masses: Vec<f64>,
    /// mass(delta / 2) / mass(delta) for successive entries.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

/// Masses of T restricted to rho_p^-1(r - delta, r + delta) for a
/// sequence of deltas.
pub fn annulus_decay(t: &SimplicialCurrent, p: usize, r: f64, deltas: &[f64]) -> Result<AnnulusDecay> {
    let rho = PLFunction::distance_from_vertex(t.complex().clone(), p)?;
    let masses: Vec<f64> = deltas.iter().map(|&d| band_mass(t, &rho, r - d, r + d)).collect::<Result<_>>()?;
    let ratios: Vec<f64> =
        masses.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 }).collect();
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    Ok(AnnulusDecay { center: p, r, deltas: deltas.to_vec(), masses, ratios, max_ratio })
}

#[derive(Debug, Clone, Serialize)]
pub struct PointTrack {
    pub name: String,
    pub disappearing: bool,
    pub ball_masses: Vec<f64>,
    /// Last ball mass below `collapse_ratio` times the first.
    pub collapsed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisappearingReport {
    pub r: f64,
    pub collapse_ratio: f64,
    pub points: Vec<PointTrack>,
    /// Every point flagged as disappearing collapsed and no other did.
    pub consistent: bool,
}

/// Ball masses around each tracked point along the family. A Cauchy
/// sequence of points whose balls lose their mass has no limit point in
/// the limit space.
pub fn disappearing_points(family: &SequenceFamily, r: f64, collapse_ratio: f64) -> Result<DisappearingReport> {
    let names: Vec<(String, bool)> =
        family.members[0].tracked.iter().map(|t| (t.name.clone(), t.disappearing)).collect();
    let mut points = Vec::new();
    for (name, disappearing) in names {
        let ball_masses: Vec<f64> = family
            .members
            .par_iter()
            .map(|m| {
                let v = m.tracked(&name).ok_or_else(|| Error::Argument(format!("member lacks point {name}")))?;
                Ok(ball(&m.current, v, r)?.mass())
            })
            .collect::<Result<_>>()?;
        let collapsed = ball_masses.last().unwrap() < &(collapse_ratio * ball_masses[0]);
        points.push(PointTrack { name, disappearing, ball_masses, collapsed });
    }
    let consistent = points.iter().all(|p| p.collapsed == p.disappearing);
    Ok(DisappearingReport { r, collapse_ratio, points, consistent })
}

#[derive(Debug, Clone, Serialize)]
pub struct SfInSetRow {
    pub param: f64,
    pub sf_k: f64,
    pub ball_mass: f64,
    pub threshold: f64,
    /// SF_k >= C r^m.
    pub hypothesis: bool,
    /// ball mass >= C r^m.
    pub conclusion: bool,
}

/// Along the family at a tracked point: wherever SF_k(p, r) >= c r^m, the
/// ball mass must be at least c r^m as well.
pub fn sf_in_set(
    family: &SequenceFamily,
    point_name: &str,
    r: f64,
    c: f64,
    k: usize,
    candidates: usize,
    grid: usize,
) -> Result<Vec<SfInSetRow>> {
    family
        .members
        .par_iter()
        .map(|m| {
            let p = m.tracked(point_name).ok_or_else(|| Error::Argument(format!("member lacks point {point_name}")))?;
            let rep = sf_k(&m.current, p, r, k, candidates, grid)?;
            let ball_mass = ball(&m.current, p, r)?.mass();
            let threshold = c * r.powi(m.current.dim() as i32);
            let tol = rep.best.as_ref().map_or(1e-6, |b| quadrature_tolerance(b.richardson_error));
            Ok(SfInSetRow {
                param: m.param,
                sf_k: rep.value,
                ball_mass,
                threshold,
                hypothesis: rep.value + tol >= threshold,
                conclusion: ball_mass + tol >= threshold,
            })
        })
        .collect()
}
