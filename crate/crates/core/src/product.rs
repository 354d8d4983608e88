//! Products with an interval I_eps = [0, eps], realised by prism
//! triangulations, and the interval filling volumes built on them.
//!
//! Orientation: the prism over [v0 < ... < vk] x [l, l+1] is the staircase
//! sum_i (-1)^i [(v0,l) .. (vi,l), (vi,l+1) .. (vk,l+1)]. With this choice
//!
//!   d(T x I) = T x dI - (dT) x I,    T x dI = psi_eps# T - psi_0# T,
//!
//! exactly, in every dimension. A convention-independent version of the
//! identity has to carry the minus sign: applying d to both sides with a
//! plus sign would force psi_eps# dT = psi_0# dT.

use crate::complex::{Embedding, GeometricComplex};
use crate::current::{Field, PLFunction, SimplicialCurrent};
use crate::error::{arg, Result};
use crate::fillvol::{filling_volume, FillingReport};
use crate::metricspace::FiniteMetricSpace;
use crate::slicedfill::{quadrature_tolerance, slice_quadrature, SlicedFillReport};
use crate::slicing::ball_at;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Triangulated base x I_eps with `layers` slabs.
#[derive(Debug, Clone)]
pub struct ProductComplex {
    pub base: Arc<GeometricComplex>,
    pub epsilon: f64,
    pub layers: usize,
    pub complex: Arc<GeometricComplex>,
}

impl ProductComplex {
    pub fn new(base: &Arc<GeometricComplex>, epsilon: f64, layers: usize) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return arg(format!("epsilon must be positive, got {epsilon}"));
        }
        if layers == 0 {
            return arg("layers must be at least 1");
        }
        let n = base.num_vertices();
        let per = layers + 1;
        let heights: Vec<f64> = (0..per).map(|l| epsilon * l as f64 / layers as f64).collect();
        let embedding = match base.embedding() {
            Embedding::Coordinates { dim, data, metric } => {
                let mut pts = Vec::with_capacity(n * per);
                for v in 0..n {
                    for &z in &heights {
                        let mut p = data[v * dim..(v + 1) * dim].to_vec();
                        p.push(z);
                        pts.push(p);
                    }
                }
                Embedding::with_metric(&pts, metric.with_interval(*dim))?
            }
            Embedding::Points { .. } => {
                let total = n * per;
                let mut d = vec![0.0; total * total];
                for u in 0..n {
                    for v in 0..n {
                        let duv = base.distance(u, v);
                        for a in 0..per {
                            for b in 0..per {
                                let dz = heights[a] - heights[b];
                                d[(u * per + a) * total + v * per + b] = (duv * duv + dz * dz).sqrt();
                            }
                        }
                    }
                }
                let labels = (0..total).map(|i| format!("{}@{}", i / per, i % per)).collect();
                Embedding::points(Arc::new(FiniteMetricSpace::from_flat_unchecked(total, d, Some(labels))?))
            }
        };
        let top = base.dim() + 1;
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); top + 1];
        for k in 0..=base.dim() {
            for i in 0..base.count(k) {
                let s = base.simplex(k, i);
                for l in 0..layers {
                    for pivot in 0..=k {
                        lists[k + 1].extend(staircase(s, pivot, l, per));
                    }
                }
            }
        }
        let complex = GeometricComplex::from_sorted_levels(embedding, lists)?;
        Ok(ProductComplex { base: base.clone(), epsilon, layers, complex: Arc::new(complex) })
    }

    /// Vertex (v, l) of the product.
    pub fn vertex(&self, v: usize, layer: usize) -> usize {
        v * (self.layers + 1) + layer
    }

    /// psi_l as a vertex map from the base.
    pub fn lift_map(&self, layer: usize) -> Vec<usize> {
        (0..self.base.num_vertices()).map(|v| self.vertex(v, layer)).collect()
    }

    /// psi_l# T for the copy at height l eps / layers.
    pub fn lift(&self, t: &SimplicialCurrent, layer: usize) -> Result<SimplicialCurrent> {
        crate::current::same_complex(t.complex(), &self.base)?;
        if layer > self.layers {
            return arg(format!("layer {layer} exceeds {}", self.layers));
        }
        t.push_forward(&self.complex, &self.lift_map(layer))
    }

    /// T x dI = psi_eps# T - psi_0# T.
    pub fn times_boundary(&self, t: &SimplicialCurrent) -> Result<SimplicialCurrent> {
        self.lift(t, self.layers)?.checked_sub(&self.lift(t, 0)?)
    }

    /// The prism chain T x I_eps.
    pub fn prism(&self, t: &SimplicialCurrent) -> Result<SimplicialCurrent> {
        crate::current::same_complex(t.complex(), &self.base)?;
        let k = t.dim();
        let per = self.layers + 1;
        let mut out: BTreeMap<u32, i64> = BTreeMap::new();
        for (i, c) in t.iter() {
            let s = self.base.simplex(k, i);
            for l in 0..self.layers {
                for pivot in 0..=k {
                    let tuple = staircase(s, pivot, l, per);
                    let idx = self.complex.find(&tuple).expect("prism simplices were inserted");
                    let sign = if pivot % 2 == 0 { 1 } else { -1 };
                    *out.entry(idx as u32).or_insert(0) += sign * c;
                }
            }
        }
        Ok(SimplicialCurrent::from_map(self.complex.clone(), k + 1, out))
    }
}

/// [(v0,l) .. (v_p,l), (v_p,l+1) .. (vk,l+1)]; already increasing because
/// vertex (v, l) has index v * per + l.
fn staircase(s: &[u32], pivot: usize, l: usize, per: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(s.len() + 1);
    for &v in &s[..=pivot] {
        out.push(v * per as u32 + l as u32);
    }
    for &v in &s[pivot..] {
        out.push(v * per as u32 + l as u32 + 1);
    }
    out
}

#[derive(Debug, Clone)]
pub struct ProductCurrent {
    pub product: ProductComplex,
    pub current: SimplicialCurrent,
}

/// T x I_eps on a fresh prism complex over T's complex.
pub fn product_current(t: &SimplicialCurrent, epsilon: f64, layers: usize) -> Result<ProductCurrent> {
    let product = ProductComplex::new(t.complex(), epsilon, layers)?;
    let current = product.prism(t)?;
    Ok(ProductCurrent { product, current })
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalFillReport {
    pub epsilon: f64,
    pub layers: usize,
    pub mass: f64,
    pub fill: FillingReport,
    /// eps^-1 * IFV
    pub scaled: f64,
    /// M(T) >= eps^-1 IFV
    pub bound_holds: bool,
}

/// IFV_eps(T) = FillVol(d(T x I_eps)), filled inside the prism complex.
pub fn interval_filling_volume(t: &SimplicialCurrent, epsilon: f64, layers: usize) -> Result<IntervalFillReport> {
    let pc = product_current(t, epsilon, layers)?;
    let b = pc.current.boundary();
    let fill = filling_volume(&b)?;
    let mass = t.mass();
    let scaled = fill.value / epsilon;
    Ok(IntervalFillReport {
        epsilon,
        layers,
        mass,
        bound_holds: mass + 1e-9 * (1.0 + mass) >= scaled,
        scaled,
        fill,
    })
}

/// FillVol(d(S x I_eps)) with S compacted to its own carrier first, so the
/// prism complex stays the size of the support.
pub(crate) fn carrier_interval_fill(s: &SimplicialCurrent, epsilon: f64) -> Result<f64> {
    if s.is_zero() {
        return Ok(0.0);
    }
    let (small, _) = s.compact()?;
    let pc = product_current(&small, epsilon, 1)?;
    Ok(filling_volume(&pc.current.boundary())?.value)
}

/// SIF_eps(p, r, F) = eps^-1 * quadrature over A_r of
/// FillVol(d(Slice(S(p, r), F, t) x I_eps)). Here k may equal m.
/// The report's mass_lower_bound is SIF / prod(Lip F_j).
pub fn sliced_interval_fill(
    t: &SimplicialCurrent,
    p: usize,
    r: f64,
    fs: &[PLFunction],
    epsilon: f64,
    grid: usize,
) -> Result<SlicedFillReport> {
    if p >= t.complex().num_vertices() {
        return arg(format!("center vertex {p} out of range"));
    }
    if !(r > 0.0) || !(epsilon > 0.0) {
        return arg("radius and epsilon must be positive");
    }
    if fs.len() > t.dim() {
        return arg(format!("SIF slices at most m = {} times", t.dim()));
    }
    let ball = ball_at(t, &t.complex().anchor(p), r)?;
    let moved = fs.iter().map(|f| ball.refinement.transfer_function(f)).collect::<Result<Vec<_>>>()?;
    let value = move |s: &SimplicialCurrent| -> Result<f64> { Ok(carrier_interval_fill(s, epsilon)? / epsilon) };
    let q = slice_quadrature(&ball.current, &moved, grid, &value)?;
    let richardson_error = q.half.map_or(0.0, |h| (q.integral - h).abs() / 3.0);
    let lipschitz: Vec<f64> = fs.iter().map(|f| f.lip()).collect();
    let lip_prod: f64 = lipschitz.iter().product();
    let mass_lower_bound = if lip_prod > 0.0 { q.integral / lip_prod } else { 0.0 };
    let ball_mass = ball.current.mass();
    let tol = if lip_prod > 0.0 { quadrature_tolerance(richardson_error) / lip_prod } else { 0.0 };
    Ok(SlicedFillReport {
        center: p,
        r,
        k: fs.len(),
        region: q.region,
        grid,
        nodes: q.nodes,
        values: q.values,
        integral: q.integral,
        half_grid_integral: q.half,
        richardson_error,
        mass_lower_bound,
        ball_mass,
        bound_holds: mass_lower_bound <= ball_mass + tol,
        skipped: q.skipped,
        lipschitz,
        warnings: q.warnings,
    })
}

/// Coordinate function on the base, for convenience in sweeps.
pub fn coordinate(t: &SimplicialCurrent, axis: usize) -> Result<PLFunction> {
    PLFunction::sample(t.complex().clone(), &Field::Coordinate(axis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fillvol::flat_distance;
    use crate::meshgen;

    #[test]
    fn unit_edge_times_interval() {
        let c = Arc::new(GeometricComplex::new(Embedding::euclidean(&[vec![0.0], vec![1.0]]).unwrap(), &[vec![0, 1]]).unwrap());
        let e = SimplicialCurrent::fundamental(c, 1);
        let pc = product_current(&e, 0.5, 1).unwrap();
        assert!((pc.current.mass() - 0.5).abs() < 1e-12);
        let lhs = pc.current.boundary();
        let lateral = pc.product.prism(&e.boundary()).unwrap();
        let rhs = pc.product.times_boundary(&e).unwrap().checked_sub(&lateral).unwrap();
        assert_eq!(lhs, rhs);
        let ifv = interval_filling_volume(&e, 0.1, 1).unwrap();
        assert!((ifv.fill.value - 0.1).abs() < 1e-12);
        assert!(ifv.bound_holds);
    }

    #[test]
    fn triangle_loop_cylinder() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let c = Arc::new(GeometricComplex::new(Embedding::euclidean(&pts).unwrap(), &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap());
        let lp = SimplicialCurrent::from_oriented(c, 1, &[(vec![0, 1], 1), (vec![1, 2], 1), (vec![2, 0], 1)]).unwrap();
        let pc = product_current(&lp, 0.3, 2).unwrap();
        let b = pc.current.boundary();
        assert_eq!(b, pc.product.times_boundary(&lp).unwrap());
        assert!((b.mass() - 2.0 * lp.mass()).abs() < 1e-12);
        assert!((pc.current.mass() - 0.3 * lp.mass()).abs() < 1e-12);
        assert!(pc.current.boundary().boundary().is_zero());
    }

    #[test]
    fn zero_and_bad_epsilon() {
        let sq = meshgen::unit_square(2);
        let z = SimplicialCurrent::zero(sq.complex().clone(), 2);
        assert!(product_current(&z, 0.2, 1).unwrap().current.is_zero());
        assert!(product_current(&sq, 0.0, 1).is_err());
    }

    #[test]
    fn disk_interval_fill() {
        let d = meshgen::disk(1.0, 0.25);
        let ifv = interval_filling_volume(&d, 0.2, 1).unwrap();
        assert!(ifv.scaled <= d.mass() + 1e-9);
        assert!((ifv.scaled - d.mass()).abs() < 1e-6 * d.mass());
    }

    #[test]
    fn flat_distance_product_bound() {
        let sq = meshgen::unit_square(2);
        let c = sq.complex().clone();
        let a = SimplicialCurrent::from_oriented(c.clone(), 1, &[(vec![0, 1], 1), (vec![1, 2], 1)]).unwrap();
        let b = SimplicialCurrent::from_oriented(c.clone(), 1, &[(vec![0, 4], 1), (vec![4, 5], 1), (vec![5, 2], 1)]).unwrap();
        let eps = 0.3;
        let base = flat_distance(&a, &b).unwrap().value;
        let pcx = ProductComplex::new(&c, eps, 1).unwrap();
        let lifted = flat_distance(&pcx.prism(&a).unwrap(), &pcx.prism(&b).unwrap()).unwrap().value;
        assert!(lifted <= (2.0 + eps) * base + 1e-9, "{lifted} vs {base}");
    }

    #[test]
    fn sif_of_disk_is_ball_area() {
        let d = meshgen::disk(1.0, 0.1);
        let x = coordinate(&d, 0).unwrap();
        let rep = sliced_interval_fill(&d, 0, 0.5, &[x], 0.2, 16).unwrap();
        let area = std::f64::consts::PI * 0.25;
        assert!((rep.integral - area).abs() < 0.05 * area, "{}", rep.integral);
        assert!(rep.bound_holds);
        let k0 = sliced_interval_fill(&d, 0, 0.5, &[], 0.2, 16).unwrap();
        assert!((k0.integral - rep.ball_mass).abs() < 1e-6);
    }
}
