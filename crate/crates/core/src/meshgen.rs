//! Deterministic mesh generators returning fundamental currents.

use crate::complex::{Embedding, GeometricComplex};
use crate::current::SimplicialCurrent;
use crate::error::Result;
use crate::metric::Metric;
use std::f64::consts::PI;
use std::sync::Arc;

fn build(points: Vec<Vec<f64>>, metric: Metric, oriented: Vec<(Vec<usize>, i64)>, dim: usize) -> Result<SimplicialCurrent> {
    let simplices: Vec<Vec<usize>> = oriented.iter().map(|(s, _)| s.clone()).collect();
    let c = Arc::new(GeometricComplex::new(Embedding::with_metric(&points, metric)?, &simplices)?);
    SimplicialCurrent::from_oriented(c, dim, &oriented)
}

fn orient_ccw(p: &[Vec<f64>], t: [usize; 3]) -> Vec<usize> {
    let (a, b, c) = (&p[t[0]], &p[t[1]], &p[t[2]]);
    let area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    if area >= 0.0 {
        t.to_vec()
    } else {
        vec![t[0], t[2], t[1]]
    }
}

/// [0, w] x [0, h] split into nx * ny squares, two triangles each, oriented
/// counterclockwise. Vertex `i + (nx + 1) * j` sits at (i w / nx, j h / ny).
pub fn rectangle(w: f64, h: f64, nx: usize, ny: usize) -> SimplicialCurrent {
    let mut pts = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            pts.push(vec![w * i as f64 / nx as f64, h * j as f64 / ny as f64]);
        }
    }
    let id = |i: usize, j: usize| i + (nx + 1) * j;
    let mut tris = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            tris.push((vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)], 1));
            tris.push((vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)], 1));
        }
    }
    build(pts, Metric::Euclidean, tris, 2).expect("rectangle mesh is valid")
}

/// Unit square with n x n cells.
pub fn unit_square(n: usize) -> SimplicialCurrent {
    rectangle(1.0, 1.0, n, n)
}

/// Disk of the given radius around the origin: vertex 0 is the center and
/// ring k carries 6k equally spaced vertices, with ring spacing close to `h`.
pub fn disk(radius: f64, h: f64) -> SimplicialCurrent {
    let rings = ((radius / h).round() as usize).max(1);
    disk_rings(radius, rings, 0.0)
}

/// Hexagonal-ring disk with `rings` rings; `twist` rotates ring k by
/// twist * k radians.
pub fn disk_rings(radius: f64, rings: usize, twist: f64) -> SimplicialCurrent {
    let mut pts = vec![vec![0.0, 0.0]];
    let mut ring_start = vec![0usize];
    let mut angles: Vec<Vec<f64>> = vec![vec![0.0]];
    for k in 1..=rings {
        ring_start.push(pts.len());
        let n = 6 * k;
        let rad = radius * k as f64 / rings as f64;
        let mut a = Vec::with_capacity(n);
        for j in 0..n {
            let th = 2.0 * PI * j as f64 / n as f64 + twist * k as f64;
            pts.push(vec![rad * th.cos(), rad * th.sin()]);
            a.push(2.0 * PI * j as f64 / n as f64);
        }
        angles.push(a);
    }
    let mut tris = Vec::new();
    for j in 0..6 {
        tris.push((orient_ccw(&pts, [0, 1 + j, 1 + (j + 1) % 6]), 1));
    }
    for k in 2..=rings {
        let (inner, outer) = (&angles[k - 1], &angles[k]);
        let (ni, no) = (inner.len(), outer.len());
        let (si, so) = (ring_start[k - 1], ring_start[k]);
        let (mut i, mut o) = (0usize, 0usize);
        while i < ni || o < no {
            let next_i = if i < ni { inner.get(i + 1).copied().unwrap_or(2.0 * PI) } else { f64::INFINITY };
            let next_o = if o < no { outer.get(o + 1).copied().unwrap_or(2.0 * PI) } else { f64::INFINITY };
            let (a, b) = (si + i % ni, so + o % no);
            if next_o <= next_i + 1e-12 && o < no {
                tris.push((orient_ccw(&pts, [a, b, so + (o + 1) % no]), 1));
                o += 1;
            } else {
                tris.push((orient_ccw(&pts, [a, b, si + (i + 1) % ni]), 1));
                i += 1;
            }
        }
    }
    build(pts, Metric::Euclidean, tris, 2).expect("disk mesh is valid")
}

/// Latitude-longitude sphere with poles at vertices 0 (north) and 1
/// (south), `n_lat` latitude bands and `n_lon` meridians, under the
/// great-circle metric. Triangles are oriented outward.
pub fn sphere_latlong(radius: f64, n_lat: usize, n_lon: usize) -> SimplicialCurrent {
    let mut pts = vec![vec![0.0, 0.0, radius], vec![0.0, 0.0, -radius]];
    for i in 1..n_lat {
        let th = PI * i as f64 / n_lat as f64;
        for j in 0..n_lon {
            let ph = 2.0 * PI * j as f64 / n_lon as f64;
            pts.push(vec![radius * th.sin() * ph.cos(), radius * th.sin() * ph.sin(), radius * th.cos()]);
        }
    }
    let id = |i: usize, j: usize| 2 + (i - 1) * n_lon + j % n_lon;
    let mut tris = Vec::new();
    let out = |p: &[Vec<f64>], t: [usize; 3]| -> Vec<usize> { orient_outward(p, t) };
    for j in 0..n_lon {
        tris.push((out(&pts, [0, id(1, j), id(1, j + 1)]), 1));
        tris.push((out(&pts, [1, id(n_lat - 1, j), id(n_lat - 1, j + 1)]), 1));
    }
    for i in 1..n_lat - 1 {
        for j in 0..n_lon {
            tris.push((out(&pts, [id(i, j), id(i + 1, j), id(i + 1, j + 1)]), 1));
            tris.push((out(&pts, [id(i, j), id(i + 1, j + 1), id(i, j + 1)]), 1));
        }
    }
    build(pts, Metric::Sphere { radius }, tris, 2).expect("sphere mesh is valid")
}

fn orient_outward(p: &[Vec<f64>], t: [usize; 3]) -> Vec<usize> {
    let (a, b, c) = (&p[t[0]], &p[t[1]], &p[t[2]]);
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0];
    if n[0] * centroid[0] + n[1] * centroid[1] + n[2] * centroid[2] >= 0.0 {
        t.to_vec()
    } else {
        vec![t[0], t[2], t[1]]
    }
}

/// Icosahedron subdivided `level` times, vertices on the sphere of the
/// given radius. Returns points and outward-oriented triangles.
pub fn icosphere_data(radius: f64, level: usize) -> (Vec<Vec<f64>>, Vec<[usize; 3]>) {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts: Vec<[f64; 3]> = vec![
        [-1.0, g, 0.0], [1.0, g, 0.0], [-1.0, -g, 0.0], [1.0, -g, 0.0],
        [0.0, -1.0, g], [0.0, 1.0, g], [0.0, -1.0, -g], [0.0, 1.0, -g],
        [g, 0.0, -1.0], [g, 0.0, 1.0], [-g, 0.0, -1.0], [-g, 0.0, 1.0],
    ];
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    let norm = |p: [f64; 3]| {
        let l = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        [p[0] / l, p[1] / l, p[2] / l]
    };
    for p in pts.iter_mut() {
        *p = norm(*p);
    }
    for _ in 0..level {
        let mut mid = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, pts: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (pts[a], pts[b]);
                pts.push(norm([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                pts.len() - 1
            })
        };
        for f in &faces {
            let a = midpoint(f[0], f[1], &mut pts);
            let b = midpoint(f[1], f[2], &mut pts);
            let c = midpoint(f[2], f[0], &mut pts);
            next.extend([[f[0], a, c], [f[1], b, a], [f[2], c, b], [a, b, c]]);
        }
        faces = next;
    }
    let pts: Vec<Vec<f64>> = pts.iter().map(|p| vec![radius * p[0], radius * p[1], radius * p[2]]).collect();
    let faces = faces.into_iter().map(|f| {
        let o = orient_outward(&pts, f);
        [o[0], o[1], o[2]]
    }).collect();
    (pts, faces)
}

/// Icosphere in Euclidean R^3.
pub fn icosphere(radius: f64, level: usize) -> SimplicialCurrent {
    let (pts, faces) = icosphere_data(radius, level);
    let tris = faces.into_iter().map(|f| (f.to_vec(), 1)).collect();
    build(pts, Metric::Euclidean, tris, 2).expect("icosphere is valid")
}

/// Tetrahedra of the Kuhn triangulation of a box grid. `cells[i]` cells of
/// size `spacing[i]` along axis i starting at `origin`; periodic axes wrap
/// their vertex indices (and need at least 3 cells). Tetrahedra are
/// positively oriented.
pub fn kuhn_grid(origin: [f64; 3], spacing: [f64; 3], cells: [usize; 3], periodic: [bool; 3], metric: Metric) -> Result<SimplicialCurrent> {
    for a in 0..3 {
        if periodic[a] && cells[a] < 3 {
            return Err(crate::Error::Construction("periodic axes need at least 3 cells".into()));
        }
    }
    let nv = |a: usize| if periodic[a] { cells[a] } else { cells[a] + 1 };
    let (nx, ny, nz) = (nv(0), nv(1), nv(2));
    let mut pts = Vec::with_capacity(nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                pts.push(vec![
                    origin[0] + spacing[0] * i as f64,
                    origin[1] + spacing[1] * j as f64,
                    origin[2] + spacing[2] * k as f64,
                ]);
            }
        }
    }
    let id = |mut c: [usize; 3]| {
        for a in 0..3 {
            if periodic[a] {
                c[a] %= cells[a];
            }
        }
        c[0] + nx * (c[1] + ny * c[2])
    };
    const PERMS: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1), ([0, 2, 1], -1), ([1, 0, 2], -1),
        ([1, 2, 0], 1), ([2, 0, 1], 1), ([2, 1, 0], -1),
    ];
    let mut tets = Vec::with_capacity(6 * cells[0] * cells[1] * cells[2]);
    for k in 0..cells[2] {
        for j in 0..cells[1] {
            for i in 0..cells[0] {
                for (perm, sign) in PERMS {
                    let mut c = [i, j, k];
                    let mut t = vec![id(c)];
                    for &axis in &perm {
                        c[axis] += 1;
                        t.push(id(c));
                    }
                    tets.push((t, sign));
                }
            }
        }
    }
    build(pts, metric, tets, 3)
}

/// The flat torus S^1 x S^1 x S^1_eps, with circumferences 2 pi, 2 pi and
/// 2 eps (so the short circle has diameter eps), meshed with `n` cells on
/// the long circles and `nz` on the short one.
pub fn thin_torus(eps: f64, n: usize, nz: usize) -> Result<SimplicialCurrent> {
    let periods = vec![2.0 * PI, 2.0 * PI, 2.0 * eps];
    kuhn_grid(
        [0.0; 3],
        [2.0 * PI / n as f64, 2.0 * PI / n as f64, 2.0 * eps / nz as f64],
        [n, n, nz],
        [true, true, true],
        Metric::FlatTorus { periods },
    )
}

/// A patch of the thin torus around the origin: the square
/// [-half, half]^2 of the long directions times the whole short circle,
/// with `cells_xy` and `cells_z` cells. Balls of radius below `half` around
/// the origin see the torus metric exactly.
pub fn thin_torus_patch(eps: f64, half: f64, cells_xy: usize, cells_z: usize) -> Result<SimplicialCurrent> {
    let periods = vec![2.0 * PI, 2.0 * PI, 2.0 * eps];
    let s = 2.0 * half / cells_xy as f64;
    // the short circle is centered on the origin
    let z0 = -eps + eps / cells_z as f64 * 0.0;
    kuhn_grid(
        [-half, -half, z0],
        [s, s, 2.0 * eps / cells_z as f64],
        [cells_xy, cells_xy, cells_z],
        [false, false, true],
        Metric::FlatTorus { periods },
    )
}

/// Cube [-half, half]^3 in Euclidean space with `cells` cells per side.
pub fn euclidean_cube(half: f64, cells: usize) -> Result<SimplicialCurrent> {
    let s = 2.0 * half / cells as f64;
    kuhn_grid([-half; 3], [s; 3], [cells; 3], [false; 3], Metric::Euclidean)
}

/// Output of [`sphere_splines`].
#[derive(Debug, Clone)]
pub struct SplineSphere {
    pub current: SimplicialCurrent,
    /// Vertex index of each spike tip.
    pub tips: Vec<usize>,
    /// Base vertex carrying each spike (removed from the surface but kept
    /// as an isolated vertex so base indices stay stable).
    pub bases: Vec<usize>,
    /// Lateral area of each spike cone.
    pub spike_areas: Vec<f64>,
    /// A base vertex far from all spikes.
    pub far_vertex: usize,
}

/// Unit icosphere of the given level carrying `j` spikes of height
/// `height` and width `width`. Spikes sit at vertices chosen by farthest
/// point sampling from vertex 0. The star of each spike vertex is replaced
/// by an annulus between its link and a small ring of radius width/2,
/// capped by a cone to the tip. With `j = 0` this is the plain icosphere.
pub fn sphere_splines(level: usize, j: usize, width: f64, height: f64) -> Result<SplineSphere> {
    let (mut pts, faces) = icosphere_data(1.0, level);
    let nbase = pts.len();
    let order = farthest_point_order(&pts, 0, j + 1);
    let spikes: Vec<usize> = order[..j].to_vec();
    let far_vertex = order[j];
    let mut keep_face = vec![true; faces.len()];
    let mut tris: Vec<(Vec<usize>, i64)> = Vec::new();
    let mut tips = Vec::new();
    let mut spike_areas = Vec::new();
    for &v in &spikes {
        let c = pts[v].clone();
        // link of v in cyclic order, read off the faces around it
        let star: Vec<usize> = (0..faces.len()).filter(|&f| faces[f].contains(&v)).collect();
        for &f in &star {
            keep_face[f] = false;
        }
        let mut next = std::collections::HashMap::new();
        for &f in &star {
            let t = faces[f];
            let p = t.iter().position(|&x| x == v).unwrap();
            next.insert(t[(p + 1) % 3], t[(p + 2) % 3]);
        }
        let mut link = vec![*next.keys().min().unwrap()];
        while link.len() < star.len() {
            link.push(next[link.last().unwrap()]);
        }
        // small ring: points at geodesic-ish distance width/2 toward each
        // link vertex, then the tip
        let ring: Vec<usize> = link
            .iter()
            .map(|&u| {
                let d: Vec<f64> = (0..3).map(|a| pts[u][a] - c[a]).collect();
                let dn: f64 = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                let p: Vec<f64> = (0..3).map(|a| c[a] + 0.5 * width * d[a] / dn).collect();
                pts.push(p);
                pts.len() - 1
            })
            .collect();
        let tip: Vec<f64> = c.iter().map(|x| x * (1.0 + height)).collect();
        pts.push(tip);
        let tip_id = pts.len() - 1;
        let m = link.len();
        let mut area = 0.0;
        for i in 0..m {
            let (a, b) = (link[i], link[(i + 1) % m]);
            let (ra, rb) = (ring[i], ring[(i + 1) % m]);
            tris.push((vec![ra, a, b], 1));
            tris.push((vec![ra, b, rb], 1));
            tris.push((vec![tip_id, ra, rb], 1));
            area += tri_area(&pts[tip_id], &pts[ra], &pts[rb]);
        }
        tips.push(tip_id);
        spike_areas.push(area);
    }
    for (f, t) in faces.iter().enumerate() {
        if keep_face[f] {
            tris.push((t.to_vec(), 1));
        }
    }
    // orient every triangle consistently with the base faces: the link
    // order above follows the outward orientation of the star
    let _ = nbase;
    let current = build(pts, Metric::Euclidean, tris, 2)?;
    Ok(SplineSphere { current, tips, bases: spikes, spike_areas, far_vertex })
}

fn tri_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    0.5 * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
}

/// Farthest point sampling in Euclidean space, starting from `start`.
pub fn farthest_point_order(pts: &[Vec<f64>], start: usize, count: usize) -> Vec<usize> {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let mut order = vec![start];
    let mut best: Vec<f64> = pts.iter().map(|p| d(p, &pts[start])).collect();
    while order.len() < count.min(pts.len()) {
        let (i, _) = best
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        order.push(i);
        for (k, p) in pts.iter().enumerate() {
            best[k] = best[k].min(d(p, &pts[i]));
        }
    }
    order
}

/// Vertex closest to a point under the complex's metric.
pub fn nearest_vertex(c: &GeometricComplex, p: &[f64]) -> usize {
    (0..c.num_vertices())
        .min_by(|&a, &b| {
            c.distance_to_point(a, p).unwrap().total_cmp(&c.distance_to_point(b, p).unwrap())
        })
        .expect("nonempty complex")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_and_disk_are_oriented_discs() {
        let sq = unit_square(4);
        assert!((sq.mass() - 1.0).abs() < 1e-14);
        assert!((sq.boundary().mass() - 4.0).abs() < 1e-14);
        assert!(sq.iter().all(|(_, c)| c.abs() == 1));
        let d = disk(1.0, 0.1);
        let n = 6 * 10;
        let polygon = 0.5 * n as f64 * (2.0 * PI / n as f64).sin();
        assert!((d.mass() - polygon).abs() < 1e-12);
        assert!(d.boundary().boundary().is_zero());
        // boundary is the outer polygon only
        assert!((d.boundary().mass() - n as f64 * 2.0 * (PI / n as f64).sin()).abs() < 1e-12);
    }

    #[test]
    fn sphere_is_closed_and_near_4pi() {
        let s = sphere_latlong(1.0, 24, 48);
        assert!(s.boundary().is_zero());
        assert!((s.mass() - 4.0 * PI).abs() < 0.02 * 4.0 * PI);
        let ico = icosphere(1.0, 2);
        assert!(ico.boundary().is_zero());
        assert_eq!(ico.len(), 320);
    }

    #[test]
    fn torus_volume_is_exact() {
        for eps in [1.0, 0.5] {
            let t = thin_torus(eps, 6, 3).unwrap();
            assert!(t.boundary().is_zero());
            let v = (2.0 * PI).powi(2) * 2.0 * eps;
            assert!((t.mass() - v).abs() < 1e-9 * v);
        }
        let cube = euclidean_cube(0.5, 3).unwrap();
        assert!((cube.mass() - 1.0).abs() < 1e-12);
        assert!((cube.boundary().mass() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn spikes_add_area_and_keep_the_surface_closed() {
        let base = sphere_splines(2, 0, 0.0, 1.0).unwrap();
        for j in [2usize, 3, 4] {
            let s = sphere_splines(2, j, 1.0 / (j * j) as f64, 1.0).unwrap();
            assert!(s.current.boundary().is_zero(), "j = {j}");
            assert!(s.current.mass() > base.current.mass());
            assert_eq!(s.tips.len(), j);
        }
    }
}

/// Midpoint subdivision of a 2-chain with coordinates: each triangle splits
/// into four with the parent's orientation. Old vertices keep their indices.
/// Midpoints of boundary edges are pushed radially onto the circle of radius
/// `boundary_radius` around the origin when given.
///
/// Also returns the vertex map fine -> coarse sending the midpoint of [a, b]
/// to min(a, b). It is simplicial and carries the subdivided chain back onto
/// the original one exactly: of the four children of [a < b < c] only
/// [m_ac, m_bc, c] survives, landing on [a, b, c].
pub fn midpoint_subdivide(t: &SimplicialCurrent, boundary_radius: Option<f64>) -> Result<(SimplicialCurrent, Vec<usize>)> {
    use crate::error::arg;
    use std::collections::BTreeMap;
    if t.dim() != 2 {
        return arg("midpoint subdivision needs a 2-chain");
    }
    let c = t.complex();
    let n = c.num_vertices();
    let Some(metric) = c.embedding().metric().cloned() else {
        return arg("midpoint subdivision needs a coordinate embedding");
    };
    let mut pts: Vec<Vec<f64>> = (0..n).map(|v| c.coords(v).unwrap().to_vec()).collect();
    let mut g: Vec<usize> = (0..n).collect();
    let on_boundary: std::collections::BTreeSet<Vec<u32>> =
        t.boundary().iter().map(|(i, _)| c.simplex(1, i).to_vec()).collect();
    let mut mids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut mid = |a: usize, b: usize, pts: &mut Vec<Vec<f64>>, g: &mut Vec<usize>| -> usize {
        let key = (a.min(b), a.max(b));
        *mids.entry(key).or_insert_with(|| {
            let mut p: Vec<f64> = pts[a].iter().zip(&pts[b]).map(|(x, y)| 0.5 * (x + y)).collect();
            if let Some(r) = boundary_radius {
                if on_boundary.contains(&vec![key.0 as u32, key.1 as u32]) {
                    let nrm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if nrm > 0.0 {
                        p.iter_mut().for_each(|x| *x *= r / nrm);
                    }
                }
            }
            pts.push(p);
            g.push(key.0);
            pts.len() - 1
        })
    };
    let mut tris = Vec::with_capacity(4 * t.len());
    for (i, coeff) in t.iter() {
        let s = c.simplex(2, i);
        let (a, b, cc) = (s[0] as usize, s[1] as usize, s[2] as usize);
        let ab = mid(a, b, &mut pts, &mut g);
        let bc = mid(b, cc, &mut pts, &mut g);
        let ca = mid(cc, a, &mut pts, &mut g);
        tris.push((vec![a, ab, ca], coeff));
        tris.push((vec![ab, b, bc], coeff));
        tris.push((vec![ca, bc, cc], coeff));
        tris.push((vec![ab, bc, ca], coeff));
    }
    Ok((build(pts, metric, tris, 2)?, g))
}
