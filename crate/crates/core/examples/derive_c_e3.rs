//! Brute-force minimisation of h(p, 1, s1, s2) in Euclidean 3-space.
//!
//! P is the intersection of the unit sphere around p = 0 with the spheres
//! of radius s1, s2 around two witnesses p1, p2 on that unit sphere, and h
//! is the distance between its two points (zero when P is empty or a single
//! point). The tetrahedral constant is the best, over witness pairs, of the
//! minimum of h over [1/2, 3/2]^2.
//!
//! Run with `cargo run --release --example derive_c_e3`.

use currentlab::slicedfill::C_E3;

const GRID: usize = 401;
const ANGLES: usize = 720;

/// h for witnesses p1 = (1, 0, 0), p2 = (cos g, sin g, 0).
fn h(g: f64, s1: f64, s2: f64) -> f64 {
    // x.p_i = 1 - s_i^2 / 2 on the unit sphere
    let (c1, c2) = (1.0 - 0.5 * s1 * s1, 1.0 - 0.5 * s2 * s2);
    let (sg, cg) = g.sin_cos();
    if sg.abs() < 1e-15 {
        return 0.0;
    }
    let u = c1;
    let v = (c2 - c1 * cg) / sg;
    let w2 = 1.0 - u * u - v * v;
    if w2 > 0.0 { 2.0 * w2.sqrt() } else { 0.0 }
}

fn scan(g: f64) -> (f64, (f64, f64), f64) {
    let mut min = f64::INFINITY;
    let mut at = (0.0, 0.0);
    let mut min_pos = f64::INFINITY;
    for i in 0..GRID {
        let s1 = 0.5 + i as f64 / (GRID - 1) as f64;
        for j in 0..GRID {
            let s2 = 0.5 + j as f64 / (GRID - 1) as f64;
            let v = h(g, s1, s2);
            if v < min {
                min = v;
                at = (s1, s2);
            }
            if v > 0.0 {
                min_pos = min_pos.min(v);
            }
        }
    }
    (min, at, min_pos)
}

fn main() {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for a in 1..=ANGLES {
        let g = std::f64::consts::PI * a as f64 / ANGLES as f64;
        let (min, _, _) = scan(g);
        if min > best.0 {
            best = (min, g);
        }
    }
    let eq = std::f64::consts::PI / 3.0;
    let (min_eq, at_eq, pos_eq) = scan(eq);
    println!("witness angles scanned: {ANGLES}, grid {GRID}x{GRID} on [1/2, 3/2]^2");
    println!("best min h over witness pairs: {} (angle {:.4})", best.0, best.1);
    println!("equilateral witnesses: min h = {min_eq} at s = {at_eq:?}, smallest nonzero {pos_eq:.4}, h(1,1) = {:.4}", h(eq, 1.0, 1.0));
    println!("stored C_E3 = {C_E3}");
    assert_eq!(best.0, C_E3);
}
