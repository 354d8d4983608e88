//! Finite metric spaces: validation, diameter, packings, nets, Hausdorff
//! distance and Gromov–Hausdorff bounds.

use crate::error::{arg, Error, Result};
use serde::Serialize;

/// Absolute tolerance used when validating metric axioms.
pub const METRIC_TOL: f64 = 1e-9;

/// A finite metric space stored as a dense symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
}

/// Greedy packing certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingReport {
    pub radius: f64,
    pub count: usize,
    pub centers: Vec<usize>,
}

/// Bracket on the Gromov–Hausdorff distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhBounds {
    pub lower: f64,
    pub upper: f64,
    /// Whether the upper bound came from the exhaustive search.
    pub exact: bool,
    /// Correspondence realising `upper` as pairs (x, y).
    pub correspondence: Vec<(usize, usize)>,
}

impl FiniteMetricSpace {
    /// Builds and fully validates a space from a square matrix.
    pub fn new(rows: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Metric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        Self::from_flat(n, dist, labels)
    }

    /// Builds from a row-major n*n buffer and validates it.
    pub fn from_flat(n: usize, dist: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        let space = Self::from_flat_unchecked(n, dist, labels)?;
        space.validate()?;
        Ok(space)
    }

    /// Builds without the O(n^3) triangle check. Shape, finiteness, zero
    /// diagonal and symmetry are still enforced. Intended for matrices that
    /// are metric by construction (for instance distances between points of
    /// a Euclidean space).
    pub fn from_flat_unchecked(
        n: usize,
        mut dist: Vec<f64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if dist.len() != n * n {
            return Err(Error::Metric(format!(
                "buffer has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Metric(format!("{} labels for {n} points", l.len())));
            }
        }
        for i in 0..n {
            if dist[i * n + i].abs() > METRIC_TOL {
                return Err(Error::Metric(format!("dist[{i}][{i}] = {} is not 0", dist[i * n + i])));
            }
            dist[i * n + i] = 0.0;
            for j in 0..n {
                let v = dist[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Metric(format!("dist[{i}][{j}] = {v} is not a finite nonnegative number")));
                }
                let w = dist[j * n + i];
                if (v - w).abs() > METRIC_TOL {
                    return Err(Error::Metric(format!("dist[{i}][{j}] = {v} but dist[{j}][{i}] = {w}")));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let m = 0.5 * (dist[i * n + j] + dist[j * n + i]);
                dist[i * n + j] = m;
                dist[j * n + i] = m;
            }
        }
        Ok(FiniteMetricSpace { n, dist, labels })
    }

    /// Distance matrix of points under a metric.
    pub fn from_points(points: &[Vec<f64>], metric: &crate::Metric) -> Result<Self> {
        let n = points.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = metric.distance(&points[i], &points[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self::from_flat_unchecked(n, dist, None)
    }

    /// Checks the triangle inequality, reporting the first violating triple.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let dij = self.dist[i * n + j];
                for k in 0..n {
                    let via = dij + self.dist[j * n + k];
                    let direct = self.dist[i * n + k];
                    if direct > via + METRIC_TOL {
                        return Err(Error::Metric(format!(
                            "triangle inequality fails for ({i}, {j}, {k}): d({i},{k}) = {direct} > d({i},{j}) + d({j},{k}) = {via}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    /// Largest pairwise distance; 0 for the empty and one-point spaces.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().fold(0.0, |m, &v| m.max(v))
    }

    /// Diameter of a subset.
    pub fn subset_diameter(&self, idx: &[usize]) -> f64 {
        let mut m: f64 = 0.0;
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                m = m.max(self.d(i, j));
            }
        }
        m
    }

    /// Subspace on the given indices, in the given order.
    pub fn subspace(&self, idx: &[usize]) -> FiniteMetricSpace {
        let k = idx.len();
        let mut dist = vec![0.0; k * k];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                dist[a * k + b] = self.d(i, j);
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| idx.iter().map(|&i| l[i].clone()).collect());
        FiniteMetricSpace { n: k, dist, labels }
    }

    /// Greedy maximal packing by disjoint open balls of radius `r`, scanning
    /// points in index order. The count is a lower bound on N(X, r).
    pub fn packing_number(&self, r: f64) -> Result<PackingReport> {
        if !(r > 0.0) {
            return arg(format!("packing radius must be positive, got {r}"));
        }
        let mut centers: Vec<usize> = Vec::new();
        for i in 0..self.n {
            if centers.iter().all(|&c| self.d(c, i) >= 2.0 * r) {
                centers.push(i);
            }
        }
        Ok(PackingReport { radius: r, count: centers.len(), centers })
    }

    /// Exact maximum packing by branch and bound. Refuses spaces with more
    /// than `limit` points.
    pub fn packing_number_exact(&self, r: f64, limit: usize) -> Result<PackingReport> {
        if !(r > 0.0) {
            return arg(format!("packing radius must be positive, got {r}"));
        }
        if self.n > limit {
            return arg(format!("exact packing limited to {limit} points, got {}", self.n));
        }
        fn search(
            x: &FiniteMetricSpace,
            r: f64,
            next: usize,
            chosen: &mut Vec<usize>,
            best: &mut Vec<usize>,
        ) {
            if chosen.len() + (x.n - next) <= best.len() {
                return;
            }
            if next == x.n {
                *best = chosen.clone();
                return;
            }
            if chosen.iter().all(|&c| x.d(c, next) >= 2.0 * r) {
                chosen.push(next);
                search(x, r, next + 1, chosen, best);
                chosen.pop();
            }
            search(x, r, next + 1, chosen, best);
        }
        let mut best = Vec::new();
        search(self, r, 0, &mut Vec::new(), &mut best);
        Ok(PackingReport { radius: r, count: best.len(), centers: best })
    }

    /// Greedy r-net: points pairwise at least `r` apart such that every point
    /// lies within distance `r` of some net point.
    pub fn greedy_net(&self, r: f64) -> Result<Vec<usize>> {
        if !(r > 0.0) {
            return arg(format!("net radius must be positive, got {r}"));
        }
        let mut net: Vec<usize> = Vec::new();
        for i in 0..self.n {
            if net.iter().all(|&c| self.d(c, i) >= r) {
                net.push(i);
            }
        }
        Ok(net)
    }

    /// Hausdorff distance between two nonempty index sets.
    pub fn hausdorff_distance(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return arg("hausdorff distance needs nonempty subsets");
        }
        if let Some(&bad) = a.iter().chain(b).find(|&&i| i >= self.n) {
            return arg(format!("index {bad} out of range for {} points", self.n));
        }
        let directed = |from: &[usize], to: &[usize]| {
            from.iter()
                .map(|&i| to.iter().map(|&j| self.d(i, j)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        Ok(directed(a, b).max(directed(b, a)))
    }
}

/// Distortion of a correspondence given as (x, y) pairs.
pub fn distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, &(x1, y1)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[a + 1..] {
            worst = worst.max((x.d(x1, x2) - y.d(y1, y2)).abs());
        }
    }
    worst
}

/// Gromov–Hausdorff bounds. When both spaces have at most `exact_limit`
/// points, the upper bound is half the minimal correspondence distortion
/// and equals the lower bound. Otherwise a greedy correspondence gives the
/// upper bound and the diameter gap the lower bound.
pub fn gh_bounds(x: &FiniteMetricSpace, y: &FiniteMetricSpace, exact_limit: usize) -> Result<GhBounds> {
    if x.is_empty() || y.is_empty() {
        return arg("Gromov-Hausdorff bounds need nonempty spaces");
    }
    let diam_gap = 0.5 * (x.diameter() - y.diameter()).abs();
    if x.len().max(y.len()) <= exact_limit {
        let (dis, corr) = exact_min_distortion(x, y);
        let value = 0.5 * dis;
        return Ok(GhBounds { lower: value, upper: value, exact: true, correspondence: corr });
    }
    let forward = greedy_correspondence(x, y);
    let backward: Vec<(usize, usize)> =
        greedy_correspondence(y, x).into_iter().map(|(b, a)| (a, b)).collect();
    let (df, db) = (distortion(x, y, &forward), distortion(x, y, &backward));
    let (dis, corr) = if df <= db { (df, forward) } else { (db, backward) };
    Ok(GhBounds { lower: diam_gap, upper: (0.5 * dis).max(diam_gap), exact: false, correspondence: corr })
}

/// Minimal distortion over all correspondences: threshold search over the
/// finite set of candidate distortion values, each tested by backtracking.
fn exact_min_distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (f64, Vec<(usize, usize)>) {
    let mut cands: Vec<f64> = vec![0.0];
    for a in 0..x.len() {
        for b in a..x.len() {
            for c in 0..y.len() {
                for d in c..y.len() {
                    cands.push((x.d(a, b) - y.d(c, d)).abs());
                    cands.push((x.d(a, b) - y.d(d, c)).abs());
                }
            }
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    let mut best = feasible_correspondence(x, y, cands[hi]).expect("largest candidate is always feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible_correspondence(x, y, cands[mid]) {
            Some(c) => {
                best = c;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let mut corr = best;
    corr.sort_unstable();
    corr.dedup();
    (distortion(x, y, &corr), corr)
}

/// Finds a correspondence of distortion at most `tau`, if one exists. Every
/// correspondence contains the union of the graph of some map X -> Y and the
/// transposed graph of some map Y -> X, so it suffices to search those.
fn feasible_correspondence(x: &FiniteMetricSpace, y: &FiniteMetricSpace, tau: f64) -> Option<Vec<(usize, usize)>> {
    let slack = tau + 1e-12;
    let ok = |chosen: &[(usize, usize)], p: (usize, usize)| {
        chosen.iter().all(|&(a, b)| (x.d(a, p.0) - y.d(b, p.1)).abs() <= slack)
    };
    fn rec(
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
        step: usize,
        chosen: &mut Vec<(usize, usize)>,
        ok: &dyn Fn(&[(usize, usize)], (usize, usize)) -> bool,
    ) -> bool {
        let (nx, ny) = (x.len(), y.len());
        if step == nx + ny {
            return true;
        }
        if step < nx {
            let a = step;
            for b in 0..ny {
                if ok(chosen, (a, b)) {
                    chosen.push((a, b));
                    if rec(x, y, step + 1, chosen, ok) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        } else {
            let b = step - nx;
            if chosen.iter().any(|&(_, cb)| cb == b) {
                return rec(x, y, step + 1, chosen, ok);
            }
            for a in 0..nx {
                if ok(chosen, (a, b)) {
                    chosen.push((a, b));
                    if rec(x, y, step + 1, chosen, ok) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
    }
    let mut chosen = Vec::new();
    if rec(x, y, 0, &mut chosen, &ok) {
        Some(chosen)
    } else {
        None
    }
}

/// Greedy correspondence: points of X in index order pick the partner that
/// least increases the running distortion, then uncovered points of Y do
/// the same.
fn greedy_correspondence(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Vec<(usize, usize)> {
    let cost = |chosen: &[(usize, usize)], p: (usize, usize)| {
        chosen.iter().map(|&(a, b)| (x.d(a, p.0) - y.d(b, p.1)).abs()).fold(0.0, f64::max)
    };
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for a in 0..x.len() {
        let b = (0..y.len())
            .min_by(|&b1, &b2| cost(&chosen, (a, b1)).total_cmp(&cost(&chosen, (a, b2))))
            .unwrap();
        chosen.push((a, b));
    }
    let covered: Vec<bool> = (0..y.len()).map(|b| chosen.iter().any(|&(_, cb)| cb == b)).collect();
    for b in 0..y.len() {
        if !covered[b] {
            let a = (0..x.len())
                .min_by(|&a1, &a2| cost(&chosen, (a1, b)).total_cmp(&cost(&chosen, (a2, b))))
                .unwrap();
            chosen.push((a, b));
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> FiniteMetricSpace {
        let rows = points.iter().map(|a| points.iter().map(|b| (a - b).abs()).collect()).collect();
        FiniteMetricSpace::new(rows, None).unwrap()
    }

    fn uniform(n: usize, d: f64) -> FiniteMetricSpace {
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { d }).collect()).collect();
        FiniteMetricSpace::new(rows, None).unwrap()
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(line(&[0.0]).diameter(), 0.0);
        assert_eq!(line(&[0.0, 3.0]).diameter(), 3.0);
        // chordal hexagon: brute force over pairs
        let pts: Vec<Vec<f64>> = (0..6)
            .map(|k| {
                let a = k as f64 * std::f64::consts::PI / 3.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let x = FiniteMetricSpace::from_points(&pts, &crate::Metric::Euclidean).unwrap();
        let mut brute: f64 = 0.0;
        for p in &pts {
            for q in &pts {
                brute = brute.max(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
            }
        }
        assert!((x.diameter() - brute).abs() < 1e-15);
        assert!((x.diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let rows = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        let err = FiniteMetricSpace::new(rows, None).unwrap_err().to_string();
        assert!(err.contains("(0, 1, 2)"), "{err}");
    }

    #[test]
    fn packing_examples() {
        assert_eq!(line(&[0.0]).packing_number(7.0).unwrap().count, 1);
        assert_eq!(line(&[0.0, 5.0]).packing_number(2.0).unwrap().count, 2);
        let pts: Vec<f64> = (0..10).map(|i| i as f64 / 9.0).collect();
        let x = line(&pts);
        let greedy = x.packing_number(0.25).unwrap();
        let exact = x.packing_number_exact(0.25, 12).unwrap();
        assert!(greedy.count == 2 || greedy.count == 3);
        assert!(2 * greedy.count >= exact.count);
        assert!(x.packing_number(0.0).is_err());
    }

    #[test]
    fn packing_is_antitone() {
        let pts: Vec<f64> = (0..30).map(|i| ((i * 37) % 101) as f64 / 10.0).collect();
        let x = line(&pts);
        let mut prev = usize::MAX;
        for k in 1..40 {
            let c = x.packing_number(k as f64 * 0.05).unwrap().count;
            assert!(c <= prev);
            prev = c;
        }
    }

    #[test]
    fn hausdorff_examples() {
        let pts: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let x = line(&pts);
        let all: Vec<usize> = (0..11).collect();
        assert_eq!(x.hausdorff_distance(&all, &all).unwrap(), 0.0);
        assert_eq!(x.hausdorff_distance(&[2], &[7]).unwrap(), x.d(2, 7));
        assert!((x.hausdorff_distance(&[0, 10], &all).unwrap() - 0.5).abs() < 1e-15);
        assert!(x.hausdorff_distance(&[], &all).is_err());
    }

    #[test]
    fn gh_examples() {
        let one = line(&[0.0]);
        let two = line(&[0.0, 2.0]);
        let b = gh_bounds(&one, &two, 7).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        let b = gh_bounds(&uniform(3, 1.0), &uniform(3, 2.0), 7).unwrap();
        assert_eq!(b.upper, 0.5);
        let x = line(&[0.0, 1.0, 3.5]);
        let b = gh_bounds(&x, &x, 7).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn heuristic_bounds_are_ordered() {
        let x = line(&(0..12).map(|i| (i * i) as f64 / 20.0).collect::<Vec<_>>());
        let y = line(&(0..9).map(|i| i as f64 / 2.0).collect::<Vec<_>>());
        let b = gh_bounds(&x, &y, 7).unwrap();
        assert!(!b.exact);
        assert!(b.lower <= b.upper);
        assert!((distortion(&x, &y, &b.correspondence) * 0.5 - b.upper).abs() < 1e-12 || b.upper == b.lower);
    }
}
