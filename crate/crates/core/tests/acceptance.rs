//! Acceptance harness: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness. The process exits with status 1 when
//! any criterion fails.

mod common;

use common::*;
use currentlab::complex::Embedding;
use currentlab::current::Field;
use currentlab::fillvol::{fillvol_continuity_gap, filling_volume_0d, flat_norm};
use currentlab::lab::{self, Quantity, SweepParams};
use currentlab::metricspace::gh_bounds;
use currentlab::product::product_current;
use currentlab::slicedfill::{sliced_fill, sliced_fill_witnesses, tetra_check, C_E3};
use currentlab::slicing::coarea_profile;
use currentlab::{meshgen, FiniteMetricSpace, GeometricComplex, PLFunction, SimplicialCurrent};
use rand::Rng;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(id: usize, name: &str, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let o = match std::panic::catch_unwind(f) {
        Ok(o) => o,
        Err(e) => {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        }
    };
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {id:>2} {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), o.detail);
    o.pass
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// 1. SF on the unit sphere, witness on the equator, r = pi/2, grid 128.
fn sphere_sliced_fill() -> Outcome {
    let start = Instant::now();
    let s = meshgen::sphere_latlong(1.0, 50, 100);
    let c = s.complex().clone();
    let faces = c.count(2);
    let eq = meshgen::nearest_vertex(&c, &[1.0, 0.0, 0.0]);
    let rep = sliced_fill_witnesses(&s, 0, PI / 2.0, &[c.anchor(eq)], 128).unwrap();
    let want = PI * PI / 2.0;
    let e = rel(rep.integral, want);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        e <= 0.05 && secs < 120.0,
        format!("{faces} faces, SF = {:.4}, expected {want:.4}, rel err {e:.4} (<= 0.05), {secs:.1}s (< 120s)", rep.integral),
    )
}

// 2. SF on the unit disk with the x coordinate, h = 0.02.
fn disk_sliced_fill() -> Outcome {
    let start = Instant::now();
    let d = meshgen::disk(1.0, 0.02);
    let x = PLFunction::sample(d.complex().clone(), &Field::Coordinate(0)).unwrap();
    let rep = sliced_fill(&d, 0, 1.0, &[x], 64).unwrap();
    let e = rel(rep.integral, PI);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        e <= 0.05 && secs < 120.0,
        format!("{} faces, SF = {:.4}, expected pi, rel err {e:.4} (<= 0.05), {secs:.1}s (< 120s)", d.complex().count(2), rep.integral),
    )
}

// 3. M(T x I_eps) = eps M(T) and d(T x I) = T x dI - (dT) x I exactly.
fn product_identities() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for seed in 0..50u64 {
        let mut r = rng(1000 + seed);
        let t = random_instance(&mut r);
        let eps = r.gen_range(0.05..2.0);
        let layers = r.gen_range(1..4);
        let pc = product_current(&t, eps, layers).unwrap();
        let m = pc.current.mass();
        let e = if t.mass() > 0.0 { rel(m, eps * t.mass()) } else { m };
        worst = worst.max(e);
        let lhs = pc.current.boundary();
        let rhs = pc.product.times_boundary(&t).unwrap().checked_sub(&pc.product.prism(&t.boundary()).unwrap()).unwrap();
        if e > 1e-9 || !lhs.checked_sub(&rhs).unwrap().is_zero() {
            bad.push(seed);
        }
    }
    outcome(bad.is_empty(), format!("50 chains, worst mass rel err {worst:.2e} (<= 1e-9), boundary identity failures {bad:?}"))
}

/// Small complexes with at most 12 simplices: one triangle, two triangles
/// sharing an edge, or a graph (path, tree or cycle) for 0-chains.
fn small_complex(r: &mut rand_chacha::ChaCha8Rng) -> (Arc<GeometricComplex>, usize) {
    let pt = |r: &mut rand_chacha::ChaCha8Rng| vec![r.gen_range(0.0..2.0), r.gen_range(0.0..2.0)];
    match r.gen_range(0..4) {
        0 => {
            let pts = vec![vec![0.0, 0.0], vec![r.gen_range(0.5..2.0), 0.0], vec![r.gen_range(-0.5..1.5), r.gen_range(0.3..2.0)]];
            (Arc::new(GeometricComplex::new(Embedding::euclidean(&pts).unwrap(), &[vec![0, 1, 2]]).unwrap()), 1)
        }
        1 => {
            let pts = vec![
                vec![0.0, 0.0],
                vec![r.gen_range(0.5..2.0), 0.0],
                vec![r.gen_range(0.0..1.5), r.gen_range(0.3..2.0)],
                vec![r.gen_range(0.0..1.5), -r.gen_range(0.3..2.0)],
            ];
            let c = GeometricComplex::new(Embedding::euclidean(&pts).unwrap(), &[vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
            (Arc::new(c), 1)
        }
        _ => {
            let n = r.gen_range(2..7);
            let pts: Vec<Vec<f64>> = (0..n).map(|_| pt(r)).collect();
            let mut edges: Vec<Vec<usize>> = (1..n).map(|v| vec![r.gen_range(0..v), v]).collect();
            if n >= 3 && n <= 5 && r.gen_bool(0.5) {
                // close a cycle through the path 0..n
                edges = (0..n).map(|v| vec![v, (v + 1) % n]).collect();
            }
            (Arc::new(GeometricComplex::new(Embedding::euclidean(&pts).unwrap(), &edges).unwrap()), 0)
        }
    }
}

fn simplex_count(c: &GeometricComplex) -> usize {
    (0..=c.dim()).map(|k| c.count(k)).sum()
}

// 4. LP flat norm against exhaustive integer search.
fn flat_norm_oracle() -> Outcome {
    let mut r = rng(4);
    let (mut integral, mut fractional, mut violations) = (0, 0, Vec::new());
    let mut max_gap = 0.0f64;
    for i in 0..200 {
        let (c, k) = small_complex(&mut r);
        assert!(simplex_count(&c) <= 12);
        let coeffs: Vec<(usize, i64)> = (0..c.count(k)).map(|j| (j, r.gen_range(-2..=2))).collect();
        let d = SimplicialCurrent::new(c.clone(), k, coeffs).unwrap();
        // For 1-chains an optimal V has |V| <= max |D| <= 2 on every
        // triangle (shrinking |V| on a triangle with a free edge lowers the
        // cost); for 0-chains V is an acyclic flow carrying at most
        // min(sum D+, sum D-) units.
        let box_radius = if k == 1 {
            2
        } else {
            let pos: i64 = d.iter().map(|(_, x)| x.max(0)).sum();
            let neg: i64 = d.iter().map(|(_, x)| (-x).max(0)).sum();
            pos.min(neg)
        };
        let oracle = brute_force_flat_norm(&d, box_radius);
        let lp = flat_norm(&d).unwrap();
        if lp.value > oracle + 1e-6 {
            violations.push(format!("#{i}: lp {} > oracle {oracle}", lp.value));
        }
        if lp.integral {
            integral += 1;
            max_gap = max_gap.max((lp.value - oracle).abs());
            if (lp.value - oracle).abs() > 1e-6 {
                violations.push(format!("#{i}: integral lp {} != oracle {oracle}", lp.value));
            }
        } else {
            fractional += 1;
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "200 complexes, {integral} integral certificates (max |lp - oracle| {max_gap:.1e}), {fractional} fractional; violations {violations:?}"
        ),
    )
}

/// Minimal matching cost between unit copies of the positive and negative
/// atoms, by enumeration of permutations.
fn matching_oracle(space: &FiniteMetricSpace, theta: &[i64], sigma: &[i64]) -> f64 {
    let units = |s: i64| -> Vec<usize> {
        (0..theta.len()).filter(|&i| sigma[i] == s).flat_map(|i| std::iter::repeat(i).take(theta[i] as usize)).collect()
    };
    let (pos, neg) = (units(1), units(-1));
    fn go(space: &FiniteMetricSpace, pos: &[usize], neg: &mut Vec<usize>, at: usize, acc: f64, best: &mut f64) {
        if acc >= *best {
            return;
        }
        if at == pos.len() {
            *best = acc;
            return;
        }
        for j in at..neg.len() {
            neg.swap(at, j);
            go(space, pos, neg, at + 1, acc + space.d(pos[at], neg[at]), best);
            neg.swap(at, j);
        }
    }
    let mut best = f64::INFINITY;
    go(space, &pos, &mut neg.clone(), 0, 0.0, &mut best);
    best
}

// 5. 0-dimensional fills against the one-point lower bound.
fn zero_dim_fill() -> Outcome {
    let mut r = rng(5);
    let (mut below, mut pair_bad, mut match_bad, mut pairs) = (0, 0, 0, 0);
    for i in 0..500 {
        let n = if i % 5 == 0 { 2 } else { r.gen_range(2..8) };
        let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).collect();
        let metric = if i % 2 == 0 { currentlab::Metric::Euclidean } else { currentlab::Metric::FlatTorus { periods: vec![2.0, 2.0] } };
        let space = FiniteMetricSpace::from_points(&pts, &metric).unwrap();
        let (theta, sigma) = if n == 2 && i % 5 == 0 {
            (vec![1, 1], vec![1, -1])
        } else {
            // split a total weight between at least one atom of each sign
            let npos = r.gen_range(1..n);
            let mut theta: Vec<i64> = (0..n).map(|_| r.gen_range(1..4)).collect();
            let sp: i64 = theta[..npos].iter().sum();
            let sn: i64 = theta[npos..].iter().sum();
            if sp > sn {
                theta[n - 1] += sp - sn;
            } else {
                theta[0] += sn - sp;
            }
            let sigma = (0..n).map(|j| if j < npos { 1 } else { -1 }).collect();
            (theta, sigma)
        };
        let rep = filling_volume_0d(&space, &theta, &sigma).unwrap();
        let lower = (0..n)
            .map(|j| theta[j] as f64 * (0..n).filter(|&k| k != j).map(|k| space.d(j, k)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        if rep.value < lower - 1e-9 * (1.0 + lower) {
            below += 1;
        }
        if theta.iter().sum::<i64>() <= 12 {
            let m = matching_oracle(&space, &theta, &sigma);
            if (m - rep.value).abs() > 1e-9 * (1.0 + m) {
                match_bad += 1;
            }
        }
        if n == 2 && theta == [1, 1] {
            pairs += 1;
            if rep.value != space.d(0, 1) {
                pair_bad += 1;
            }
        }
    }
    outcome(
        below == 0 && pair_bad == 0 && match_bad == 0,
        format!("500 sets: {below} below the lower bound, {pair_bad}/{pairs} unit pairs != d(p1,p2), {match_bad} disagree with matching oracle"),
    )
}

// 6. Tetrahedral dichotomy on the thin torus with C = 0.9 C_E3.
fn tetra_dichotomy() -> Outcome {
    let c = 0.9 * C_E3;
    let mut lines = Vec::new();
    let mut ok = true;
    for &eps in &[0.8, 0.4, 0.2] {
        // balls of radius up to eps/2 around the origin stay inside the patch
        let t = meshgen::thin_torus_patch(eps, 0.75 * eps, 6, 8).unwrap();
        let p = meshgen::nearest_vertex(t.complex(), &[0.0, 0.0, 0.0]);
        for (label, r, want_pass) in [("eps/8", eps / 8.0, true), ("eps/2", eps / 2.0, false)] {
            match tetra_check(&t, p, r, c, 0.5, 5, 4) {
                Ok(rep) => {
                    ok &= rep.passed == want_pass;
                    lines.push(format!("eps={eps} r={label}: passed={} min_h={:.3}", rep.passed, rep.min_h));
                }
                Err(e) => {
                    ok = false;
                    // diagnostic with a small positive constant
                    let diag = tetra_check(&t, p, r, 0.1, 0.5, 5, 4)
                        .map(|d| format!("with C=0.1: passed={} min_h={:.3}", d.passed, d.min_h))
                        .unwrap_or_else(|e| e.to_string());
                    lines.push(format!("eps={eps} r={label}: {e}; {diag}"));
                }
            }
        }
    }
    outcome(ok, format!("C = 0.9 * C_E3 = {c}; {}", lines.join("; ")))
}

// 7. Coarea inequality, and the unit square with f = x.
fn coarea() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut bad = 0;
    for seed in 0..100u64 {
        let mut r = rng(7000 + seed);
        let t = random_instance(&mut r);
        let f = random_pl(&mut r, t.complex());
        let rep = coarea_profile(&t, &f, 64).unwrap();
        let tol = 2.0 * rep.step * rep.max_slice_mass;
        worst = worst.max(rep.integral - rep.bound - tol);
        if rep.integral > rep.bound + tol {
            bad += 1;
        }
    }
    let sq = meshgen::unit_square(16);
    let x = PLFunction::sample(sq.complex().clone(), &Field::Coordinate(0)).unwrap();
    let area = coarea_profile(&sq, &x, 129).unwrap().integral;
    let e = (area - 1.0).abs();
    outcome(
        bad == 0 && e <= 1e-6,
        format!("100 pairs, {bad} violations, max(integral - bound - tol) = {worst:.3e}; unit square integral {area:.9} (|err| {e:.1e} <= 1e-6)"),
    )
}

// 8. Chain identities on 100 random instances each.
fn property_suite() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (j, name) in PROPERTIES.iter().enumerate() {
        let fails: Vec<u64> = (0..100u64).filter(|s| property_instance(name, 8000 + 100 * j as u64 + s).is_err()).collect();
        ok &= fails.is_empty();
        parts.push(format!("{name} {}/100", 100 - fails.len()));
    }
    outcome(ok, parts.join(", "))
}

// 9. Continuity bounds: fill gap on refined disks, slice shift, annulus decay.
fn continuity_bounds() -> Outcome {
    let fam = lab::build_family("refined_disk", &[0.5, 0.25, 0.125], 0).unwrap();
    let mut gaps = Vec::new();
    let mut ok = true;
    for w in fam.members.windows(2) {
        let g = w[1].to_previous.as_ref().unwrap();
        let st = lab::stacked_embedding(&w[0].current, &w[1].current, g, lab::STACK_DELTA).unwrap();
        let gap = fillvol_continuity_gap(&st.coarse, &st.fine).unwrap();
        ok &= gap.holds;
        gaps.push(format!("{:.2e}<={:.2e}", gap.gap, gap.bound));
    }
    let sweep = lab::continuity_sweep(&fam, Quantity::Fillvol, &SweepParams::default()).unwrap();
    ok &= sweep.all_hold && sweep.pairs.iter().all(|p| p.holds == Some(true));

    let t = meshgen::disk(1.0, 0.2);
    let rho = PLFunction::distance_from_vertex(t.complex().clone(), 0).unwrap();
    let mut r = rng(9);
    let mut shift_bad = 0;
    for _ in 0..50 {
        let delta = r.gen_range(0.005..0.1);
        let f = lab::perturbed(&rho, delta, &mut r).unwrap();
        let radius = r.gen_range(0.3..0.8);
        if !lab::slice_shift_check(&t, &rho, &f, radius).unwrap().holds {
            shift_bad += 1;
        }
    }
    ok &= shift_bad == 0;

    let fine = meshgen::disk(1.0, 0.05);
    let mut worst_ratio = 0.0f64;
    for radius in [0.3, 0.4, 0.5, 0.6, 0.7] {
        let d = lab::annulus_decay(&fine, 0, radius, &[0.2, 0.1, 0.05, 0.025]).unwrap();
        worst_ratio = worst_ratio.max(d.max_ratio);
    }
    ok &= worst_ratio <= 0.6;
    outcome(
        ok,
        format!(
            "fill gaps [{}], sweep pairs hold {}; slice shift {}/50 hold; annulus decay worst ratio {worst_ratio:.3} (<= 0.6)",
            gaps.join(", "),
            sweep.all_hold,
            50 - shift_bad
        ),
    )
}

// 10. Semicontinuity and disappearing points on sphere_splines.
fn semicontinuity_witness() -> Outcome {
    let fam = lab::build_family("sphere_splines", &[2.0, 3.0, 4.0, 6.0], 0).unwrap();
    let semi = lab::semicontinuity_report(&fam).unwrap();
    let dis = lab::disappearing_points(&fam, 0.5, 0.25).unwrap();
    let c_sf = 2.0;
    let rows = lab::sf_in_set(&fam, "base", 0.5, c_sf, 1, 8, 16).unwrap();
    let base_ok = rows.iter().all(|r| r.conclusion && (!r.hypothesis || r.conclusion));
    let masses: Vec<String> = semi.rows.iter().map(|r| format!("{:.3}", r.mass)).collect();
    let tracks: Vec<String> = dis
        .points
        .iter()
        .map(|p| format!("{} {:.3}->{:.3}", p.name, p.ball_masses[0], p.ball_masses.last().unwrap()))
        .collect();
    let ball: Vec<String> = rows.iter().map(|r| format!("{:.3}", r.ball_mass)).collect();
    outcome(
        semi.all_mass_ok && semi.all_diameter_ok && dis.consistent && base_ok,
        format!(
            "masses [{}] >= {:.3}, diameters ok {}; ball masses {} (consistent {}); base ball masses [{}] >= C_SF r^2 = {:.3}",
            masses.join(", "),
            semi.limit_mass,
            semi.all_diameter_ok,
            tracks.join(", "),
            dis.consistent,
            ball.join(", "),
            c_sf * 0.25
        ),
    )
}

// 11. Exact GH against a branch and bound oracle on all pairs of a fixed set.
fn gh_exactness() -> Outcome {
    let spaces = gh_test_spaces();
    let mut bad = Vec::new();
    let mut count = 0;
    for (a, x) in &spaces {
        for (b, y) in &spaces {
            let g = gh_bounds(x, y, 6).unwrap();
            let o = brute_force_gh(x, y);
            count += 1;
            if !g.exact || g.lower != g.upper || g.upper != o {
                bad.push(format!("{a}/{b}: {} vs {o}", g.upper));
            }
        }
        let s = gh_bounds(x, x, 6).unwrap();
        if (s.lower, s.upper) != (0.0, 0.0) {
            bad.push(format!("{a}/{a} self distance ({}, {})", s.lower, s.upper));
        }
    }
    outcome(bad.is_empty(), format!("{count} pairs over {} spaces; mismatches {bad:?}", spaces.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("sphere sliced filling", sphere_sliced_fill),
        ("euclidean sliced filling", disk_sliced_fill),
        ("product mass and boundary identity", product_identities),
        ("flat norm vs exhaustive oracle", flat_norm_oracle),
        ("0-dimensional filling", zero_dim_fill),
        ("tetrahedral dichotomy", tetra_dichotomy),
        ("coarea inequality", coarea),
        ("property suite", property_suite),
        ("continuity bounds", continuity_bounds),
        ("semicontinuity witness", semicontinuity_witness),
        ("GH exactness", gh_exactness),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|q| name.contains(q.as_str()) || q == &(i + 1).to_string()) {
            continue;
        }
        ran += 1;
        if !run(i + 1, name, *f) {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
