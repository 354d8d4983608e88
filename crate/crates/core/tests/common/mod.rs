//! Random instances and independent oracles shared by the integration
//! tests and the acceptance harness.
#![allow(dead_code)]

use currentlab::complex::Embedding;
use currentlab::current::Field;
use currentlab::{FiniteMetricSpace, GeometricComplex, PLFunction, SimplicialCurrent};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Jittered grid on [0, nx] x [0, ny] (scaled to the unit square), two
/// triangles per cell with a random diagonal.
pub fn jittered_mesh(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Arc<GeometricComplex> {
    let h = 1.0 / nx.max(ny) as f64;
    let mut pts = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            let jit = |r: &mut ChaCha8Rng| 0.25 * h * (2.0 * r.gen::<f64>() - 1.0);
            pts.push(vec![i as f64 * h + jit(rng), j as f64 * h + jit(rng)]);
        }
    }
    let id = |i: usize, j: usize| i + (nx + 1) * j;
    let mut tris = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if rng.gen_bool(0.5) {
                tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            } else {
                tris.push(vec![id(i, j), id(i + 1, j), id(i, j + 1)]);
                tris.push(vec![id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
    }
    Arc::new(GeometricComplex::new(Embedding::euclidean(&pts).unwrap(), &tris).unwrap())
}

/// Jittered Kuhn cube in R^3 with `n` cells per side.
pub fn jittered_cube(rng: &mut ChaCha8Rng, n: usize) -> Arc<GeometricComplex> {
    let h = 1.0 / n as f64;
    let mut pts = Vec::new();
    for k in 0..=n {
        for j in 0..=n {
            for i in 0..=n {
                let mut p = vec![i as f64 * h, j as f64 * h, k as f64 * h];
                for x in p.iter_mut() {
                    *x += 0.2 * h * (2.0 * rng.gen::<f64>() - 1.0);
                }
                pts.push(p);
            }
        }
    }
    let id = |c: [usize; 3]| c[0] + (n + 1) * (c[1] + (n + 1) * c[2]);
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = Vec::new();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for p in perms {
                    let mut c = [i, j, k];
                    let mut t = vec![id(c)];
                    for a in p {
                        c[a] += 1;
                        t.push(id(c));
                    }
                    tets.push(t);
                }
            }
        }
    }
    Arc::new(GeometricComplex::new(Embedding::euclidean(&pts).unwrap(), &tets).unwrap())
}

/// Random chain of dimension k with coefficients in {-2..2}, each simplex
/// present with probability `density`.
pub fn random_chain(rng: &mut ChaCha8Rng, c: &Arc<GeometricComplex>, k: usize, density: f64) -> SimplicialCurrent {
    let mut coeffs = Vec::new();
    for i in 0..c.count(k) {
        if rng.gen_bool(density) {
            coeffs.push((i, [-2i64, -1, 1, 2][rng.gen_range(0..4)]));
        }
    }
    SimplicialCurrent::new(c.clone(), k, coeffs).unwrap()
}

/// A random instance: a 2-d or 3-d jittered mesh and a chain of random
/// dimension on it.
pub fn random_instance(rng: &mut ChaCha8Rng) -> SimplicialCurrent {
    let c = if rng.gen_bool(0.7) {
        let (nx, ny) = (rng.gen_range(2..6), rng.gen_range(2..6));
        jittered_mesh(rng, nx, ny)
    } else {
        jittered_cube(rng, 2)
    };
    let k = rng.gen_range(1..=c.dim());
    random_chain(rng, &c, k, 0.6)
}

/// Affine function plus vertex noise.
pub fn random_pl(rng: &mut ChaCha8Rng, c: &Arc<GeometricComplex>) -> PLFunction {
    let d = c.coords(0).unwrap().len();
    let a: Vec<f64> = (0..d).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect();
    let noise = 0.2 * rng.gen::<f64>();
    let values = (0..c.num_vertices())
        .map(|v| {
            let p = c.coords(v).unwrap();
            p.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>() + noise * (2.0 * rng.gen::<f64>() - 1.0)
        })
        .collect();
    PLFunction::new(c.clone(), values).unwrap()
}

/// A level strictly inside the range of f.
pub fn random_level(rng: &mut ChaCha8Rng, f: &PLFunction) -> f64 {
    let (lo, hi) = f.min_max();
    lo + (0.15 + 0.7 * rng.gen::<f64>()) * (hi - lo)
}

pub fn coordinate(c: &Arc<GeometricComplex>, axis: usize) -> PLFunction {
    PLFunction::sample(c.clone(), &Field::Coordinate(axis)).unwrap()
}

/// Orientation-normalized simplices keyed by quantized vertex coordinates,
/// so chains on differently numbered complexes can be compared.
pub fn geometric_tuples(t: &SimplicialCurrent) -> BTreeMap<Vec<Vec<i64>>, i64> {
    let c = t.complex();
    let mut out: BTreeMap<Vec<Vec<i64>>, i64> = BTreeMap::new();
    for (i, coeff) in t.iter() {
        let mut pts: Vec<Vec<i64>> = c
            .simplex(t.dim(), i)
            .iter()
            .map(|&v| c.coords(v as usize).unwrap().iter().map(|x| (x * 1e8).round() as i64).collect())
            .collect();
        // bubble sort tracking the permutation sign
        let mut sign = 1;
        for a in 0..pts.len() {
            for b in 0..pts.len() - 1 - a {
                if pts[b] > pts[b + 1] {
                    pts.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        *out.entry(pts).or_insert(0) += sign * coeff;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Equality of chains on different complexes. Chains of dimension <= 1 are
/// compared simplex by simplex; higher ones may be triangulated differently
/// (cut prisms are split along a numbering-dependent diagonal), so they are
/// compared by mass, by their boundaries and by their integrals against
/// affine test forms f dx_i ^ dx_j ^ ....
pub fn same_current(a: &SimplicialCurrent, b: &SimplicialCurrent) -> bool {
    if a.dim() <= 1 || a.is_zero() || b.is_zero() {
        return geometric_tuples(a) == geometric_tuples(b);
    }
    if (a.mass() - b.mass()).abs() > 1e-9 * (1.0 + a.mass()) || !same_current(&a.boundary(), &b.boundary()) {
        return false;
    }
    let d = a.complex().coords(0).unwrap().len();
    let k = a.dim();
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for c in &combos {
            for i in c.last().map_or(0, |&l| l + 1)..d {
                next.push([c.clone(), vec![i]].concat());
            }
        }
        combos = next;
    }
    let forms = |t: &SimplicialCurrent| -> Vec<f64> {
        let c = t.complex();
        let mut out = Vec::new();
        for f in 0..=d {
            let fv = if f == d { PLFunction::constant(c.clone(), 1.0) } else { coordinate(c, f) };
            for combo in &combos {
                let pis: Vec<PLFunction> = combo.iter().map(|&i| coordinate(c, i)).collect();
                out.push(t.evaluate(&fv, &pis).unwrap());
            }
        }
        out
    };
    forms(a).iter().zip(forms(b)).all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs()))
}

/// The complex with its vertices renumbered by a random permutation, and
/// the map old -> new.
pub fn relabeled(rng: &mut ChaCha8Rng, c: &Arc<GeometricComplex>) -> (Arc<GeometricComplex>, Vec<usize>) {
    let n = c.num_vertices();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pts = vec![Vec::new(); n];
    for v in 0..n {
        pts[perm[v]] = c.coords(v).unwrap().to_vec();
    }
    let top = c.dim();
    let simplices: Vec<Vec<usize>> =
        (0..c.count(top)).map(|i| c.simplex(top, i).iter().map(|&v| perm[v as usize]).collect()).collect();
    let nc = Arc::new(GeometricComplex::new(Embedding::euclidean(&pts).unwrap(), &simplices).unwrap());
    (nc, perm)
}

/// Boundary computed from scratch by the alternating face formula on
/// vertex tuples.
pub fn naive_boundary(t: &SimplicialCurrent) -> BTreeMap<Vec<u32>, i64> {
    let c = t.complex();
    let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for (i, coeff) in t.iter() {
        let s = c.simplex(t.dim(), i);
        for j in 0..s.len() {
            let mut f = s.to_vec();
            f.remove(j);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            *out.entry(f).or_insert(0) += sign * coeff;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Integer flat norm of a k-chain D by enumeration of the (k+1)-chain V in
/// the box [-radius, radius]; U is then determined as D - dV.
pub fn brute_force_flat_norm(d: &SimplicialCurrent, radius: i64) -> f64 {
    let c = d.complex();
    let k = d.dim();
    let m = c.count(k + 1);
    let faces: Vec<Vec<(usize, i64)>> = (0..m).map(|i| c.faces(k + 1, i).collect()).collect();
    let base: Vec<i64> = (0..c.count(k)).map(|i| d.coeff(i)).collect();
    let mk = c.masses(k);
    let mk1 = c.masses(k + 1);
    let mut v = vec![-radius; m];
    let mut best = f64::INFINITY;
    loop {
        let mut u = base.clone();
        let mut cost = 0.0;
        for (i, &vi) in v.iter().enumerate() {
            cost += vi.abs() as f64 * mk1[i];
            for &(f, s) in &faces[i] {
                u[f] -= s * vi;
            }
        }
        cost += u.iter().enumerate().map(|(i, &x)| x.abs() as f64 * mk[i]).sum::<f64>();
        best = best.min(cost);
        // odometer
        let mut pos = 0;
        loop {
            if pos == m {
                return best;
            }
            if v[pos] < radius {
                v[pos] += 1;
                break;
            }
            v[pos] = -radius;
            pos += 1;
        }
    }
}

/// Exact Gromov-Hausdorff distance by branch and bound over minimal
/// correspondences (a map X -> Y together with a map Y -> X), minimizing the
/// running distortion.
pub fn brute_force_gh(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    fn go(
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
        step: usize,
        pairs: &mut Vec<(usize, usize)>,
        current: f64,
        best: &mut f64,
    ) {
        if current >= *best {
            return;
        }
        let (nx, ny) = (x.len(), y.len());
        if step == nx + ny {
            *best = current;
            return;
        }
        let options: Vec<(usize, usize)> =
            if step < nx { (0..ny).map(|b| (step, b)).collect() } else { (0..nx).map(|a| (a, step - nx)).collect() };
        for p in options {
            let add = pairs.iter().map(|&(a, b)| (x.d(a, p.0) - y.d(b, p.1)).abs()).fold(0.0, f64::max);
            pairs.push(p);
            go(x, y, step + 1, pairs, current.max(add), best);
            pairs.pop();
        }
    }
    let mut best = f64::INFINITY;
    go(x, y, 0, &mut Vec::new(), 0.0, &mut best);
    0.5 * best
}

/// Fixed test set of small metric spaces.
pub fn gh_test_spaces() -> Vec<(String, FiniteMetricSpace)> {
    let line = |xs: &[f64]| {
        let rows = xs.iter().map(|a| xs.iter().map(|b| (a - b).abs()).collect()).collect();
        FiniteMetricSpace::new(rows, None).unwrap()
    };
    let cycle = |n: usize| {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| { let d = (i as i64 - j as i64).unsigned_abs() as usize; d.min(n - d) as f64 }).collect())
            .collect();
        FiniteMetricSpace::new(rows, None).unwrap()
    };
    let equal = |n: usize, d: f64| {
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { d }).collect()).collect();
        FiniteMetricSpace::new(rows, None).unwrap()
    };
    let plane = |pts: &[[f64; 2]]| {
        let v: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
        FiniteMetricSpace::from_points(&v, &currentlab::Metric::Euclidean).unwrap()
    };
    vec![
        ("point".into(), line(&[0.0])),
        ("pair".into(), line(&[0.0, 1.0])),
        ("line3".into(), line(&[0.0, 1.0, 2.0])),
        ("uneven4".into(), line(&[0.0, 0.3, 1.7, 2.0])),
        ("triangle".into(), equal(3, 1.0)),
        ("simplex4".into(), equal(4, 1.0)),
        ("cycle4".into(), cycle(4)),
        ("cycle5".into(), cycle(5)),
        ("cycle6".into(), cycle(6)),
        ("plane5".into(), plane(&[[0.0, 0.0], [1.0, 0.2], [0.4, 1.1], [1.5, 1.3], [0.8, 0.5]])),
        ("plane6".into(), plane(&[[0.0, 0.0], [2.0, 0.0], [1.0, 1.7], [0.3, 0.9], [1.6, 1.0], [1.0, 0.4]])),
    ]
}

// ---------------------------------------------------------------------------
// Chain identities. Each returns Err with a description on failure.

use currentlab::slicing::{self, subdivide_at_level};

fn expect_zero(what: &str, c: &SimplicialCurrent) -> Result<(), String> {
    if c.is_zero() {
        Ok(())
    } else {
        Err(format!("{what}: residual with {} simplices, mass {:e}", c.len(), c.mass()))
    }
}

fn err(e: currentlab::Error) -> String {
    e.to_string()
}

/// dd = 0, and the boundary agrees with the alternating face formula.
pub fn check_boundary_squared(t: &SimplicialCurrent) -> Result<(), String> {
    let b = t.boundary();
    expect_zero("dd T", &b.boundary())?;
    if t.dim() > 0 {
        let ours: BTreeMap<Vec<u32>, i64> = b.iter().map(|(i, c)| (b.complex().simplex(b.dim(), i).to_vec(), c)).collect();
        if ours != naive_boundary(t) {
            return Err("boundary differs from the alternating face sum".into());
        }
    }
    Ok(())
}

/// <T1 + T2, f, s> = <T1, f, s> + <T2, f, s> on one refinement, and the
/// free function `slice` agrees with it.
pub fn check_slice_additivity(t1: &SimplicialCurrent, t2: &SimplicialCurrent, f: &PLFunction, s: f64) -> Result<(), String> {
    let r = subdivide_at_level(f, s).map_err(err)?;
    let sum = t1.checked_add(t2).map_err(err)?;
    let lhs = r.slice(&sum, f).map_err(err)?;
    let rhs = r.slice(t1, f).map_err(err)?.checked_add(&r.slice(t2, f).map_err(err)?).map_err(err)?;
    expect_zero("slice additivity", &lhs.checked_sub(&rhs).map_err(err)?)?;
    let free = slicing::slice(&sum, f, s).map_err(err)?.current;
    if !slicing::same_chain_by_vertices(&free, &lhs) {
        return Err("slice() disagrees with the refinement slice".into());
    }
    Ok(())
}

/// d<T, f, s> = -<dT, f, s> for dim T >= 2.
pub fn check_boundary_slice(t: &SimplicialCurrent, f: &PLFunction, s: f64) -> Result<(), String> {
    let r = subdivide_at_level(f, s).map_err(err)?;
    let a = r.slice(t, f).map_err(err)?.boundary();
    let b = r.slice(&t.boundary(), f).map_err(err)?;
    expect_zero("d<T,f,s> + <dT,f,s>", &a.checked_add(&b).map_err(err)?)
}

/// <T|A, f, s> = <T, f, s>|A for A = {g <= a}. A is made a subcomplex by
/// refining along g first; restriction is then by vertex values.
pub fn check_restriction(t: &SimplicialCurrent, f: &PLFunction, s: f64, g: &PLFunction, a: f64) -> Result<(), String> {
    let r1 = subdivide_at_level(g, a).map_err(err)?;
    let level = r1.level;
    let t1 = r1.transfer_current(t).map_err(err)?;
    let f1 = r1.transfer_function(f).map_err(err)?;
    let g1 = r1.level_values(g);
    let (lo, hi) = g.min_max();
    let tol = 1e-12 * (1.0 + hi - lo);
    let ta = t1.restrict_vertices(|v| g1[v] <= level + tol);
    let r2 = subdivide_at_level(&f1, s).map_err(err)?;
    let g2 = r2.transfer_values(&g1);
    let lhs = r2.slice(&ta, &f1).map_err(err)?;
    let rhs = r2.slice(&t1, &f1).map_err(err)?.restrict_vertices(|v| g2[v] <= level + tol);
    expect_zero("<T|A,f,s> - <T,f,s>|A", &lhs.checked_sub(&rhs).map_err(err)?)
}

/// Push-forward naturality. Under a relabeling phi of the vertices,
/// phi#dT = d phi#T and <phi#T, f o phi^-1, s> = phi#<T, f, s> (compared
/// geometrically, since the refinements number new vertices differently).
/// Under the collapse map of a midpoint subdivision, g#dS = d g#S.
pub fn check_push_forward(rng: &mut ChaCha8Rng, t: &SimplicialCurrent, f: &PLFunction, s: f64) -> Result<(), String> {
    let c = t.complex();
    let (nc, perm) = relabeled(rng, c);
    let pt = t.push_forward(&nc, &perm).map_err(err)?;
    let pb = t.boundary().push_forward(&nc, &perm).map_err(err)?;
    expect_zero("phi#dT - d phi#T", &pb.checked_sub(&pt.boundary()).map_err(err)?)?;
    if geometric_tuples(&pt) != geometric_tuples(t) {
        return Err("relabeled chain differs geometrically".into());
    }
    let mut values = vec![0.0; c.num_vertices()];
    for v in 0..c.num_vertices() {
        values[perm[v]] = f.value(v);
    }
    let pf = PLFunction::new(nc.clone(), values).map_err(err)?;
    let a = slicing::slice(&pt, &pf, s).map_err(err)?.current;
    let b = slicing::slice(t, f, s).map_err(err)?.current;
    if !same_current(&a, &b) {
        return Err("slice of the relabeled chain differs from the relabeled slice".into());
    }
    if t.dim() == 2 && c.dim() == 2 {
        let (fine, g) = currentlab::meshgen::midpoint_subdivide(&SimplicialCurrent::fundamental(c.clone(), 2), None)
            .map_err(err)?;
        let sf = random_chain(rng, fine.complex(), 2, 0.5);
        let lhs = sf.boundary().push_forward(c, &g).map_err(err)?;
        let rhs = sf.push_forward(c, &g).map_err(err)?.boundary();
        expect_zero("g#dS - d g#S", &lhs.checked_sub(&rhs).map_err(err)?)?;
    }
    Ok(())
}

/// One randomized instance of each chain identity, keyed by seed.
pub fn property_instance(name: &str, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let rng = &mut r;
    let t = random_instance(rng);
    let c = t.complex().clone();
    let f = random_pl(rng, &c);
    let s = random_level(rng, &f);
    match name {
        "boundary_squared" => check_boundary_squared(&t),
        "slice_additivity" => {
            let t2 = random_chain(rng, &c, t.dim(), 0.5);
            check_slice_additivity(&t, &t2, &f, s)
        }
        "boundary_slice" => {
            let k = rng.gen_range(2..=c.dim());
            let t = random_chain(rng, &c, k, 0.6);
            check_boundary_slice(&t, &f, s)
        }
        "restriction" => {
            let g = random_pl(rng, &c);
            let a = random_level(rng, &g);
            check_restriction(&t, &f, s, &g, a)
        }
        "push_forward" => check_push_forward(rng, &t, &f, s),
        _ => Err(format!("unknown property {name}")),
    }
}

pub const PROPERTIES: [&str; 5] = ["boundary_squared", "slice_additivity", "boundary_slice", "restriction", "push_forward"];
