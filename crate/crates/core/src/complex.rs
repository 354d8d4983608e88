//! Geometric simplicial complexes with Cayley–Menger simplex masses.

use crate::error::{Error, Result};
use crate::linalg::{self, CmVolume};
use crate::metric::Metric;
use crate::metricspace::FiniteMetricSpace;
use std::collections::HashMap;
use std::sync::Arc;

/// Largest supported simplex arity (simplices up to dimension 5).
pub const MAX_VERTS: usize = 6;

pub(crate) type Key = [u32; MAX_VERTS];

pub(crate) fn key(verts: &[u32]) -> Key {
    let mut k = [u32::MAX; MAX_VERTS];
    k[..verts.len()].copy_from_slice(verts);
    k
}

/// Sorts `verts` in place and returns the sign of the sorting permutation,
/// or 0 when a vertex repeats.
pub fn sort_with_sign(verts: &mut [u32]) -> i64 {
    let mut sign = 1;
    for i in 1..verts.len() {
        let mut j = i;
        while j > 0 && verts[j - 1] > verts[j] {
            verts.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if verts.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// Where the vertices of a complex live.
#[derive(Debug, Clone)]
pub enum Embedding {
    /// Coordinate vectors of a common length under a metric.
    Coordinates { dim: usize, data: Vec<f64>, metric: Metric },
    /// Points of a finite metric space; vertex `i` is point `index[i]`.
    Points { space: Arc<FiniteMetricSpace>, index: Vec<usize> },
}

impl Embedding {
    pub fn euclidean(points: &[Vec<f64>]) -> Result<Self> {
        Self::with_metric(points, Metric::Euclidean)
    }

    pub fn with_metric(points: &[Vec<f64>], metric: Metric) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        let mut data = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Construction(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::Construction(format!("vertex {i} has a non-finite coordinate")));
            }
            data.extend_from_slice(p);
        }
        Ok(Embedding::Coordinates { dim, data, metric })
    }

    pub fn points(space: Arc<FiniteMetricSpace>) -> Self {
        let index = (0..space.len()).collect();
        Embedding::Points { space, index }
    }

    pub fn len(&self) -> usize {
        match self {
            Embedding::Coordinates { dim, data, .. } => {
                if *dim == 0 {
                    0
                } else {
                    data.len() / dim
                }
            }
            Embedding::Points { index, .. } => index.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coords(&self, i: usize) -> Option<&[f64]> {
        match self {
            Embedding::Coordinates { dim, data, .. } => Some(&data[i * dim..(i + 1) * dim]),
            Embedding::Points { .. } => None,
        }
    }

    pub fn metric(&self) -> Option<&Metric> {
        match self {
            Embedding::Coordinates { metric, .. } => Some(metric),
            Embedding::Points { .. } => None,
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            Embedding::Coordinates { dim, data, metric } => {
                metric.distance(&data[i * dim..(i + 1) * dim], &data[j * dim..(j + 1) * dim])
            }
            Embedding::Points { space, index } => space.d(index[i], index[j]),
        }
    }

    /// Restriction to the listed vertices, in order.
    pub fn select(&self, keep: &[usize]) -> Embedding {
        match self {
            Embedding::Coordinates { dim, data, metric } => {
                let mut out = Vec::with_capacity(keep.len() * dim);
                for &i in keep {
                    out.extend_from_slice(&data[i * dim..(i + 1) * dim]);
                }
                Embedding::Coordinates { dim: *dim, data: out, metric: metric.clone() }
            }
            Embedding::Points { space, index } => Embedding::Points {
                space: space.clone(),
                index: keep.iter().map(|&i| index[i]).collect(),
            },
        }
    }

    /// k-volume of the simplex on the given vertices.
    pub fn simplex_volume(&self, verts: &[u32]) -> CmVolume {
        let k = verts.len() - 1;
        if k == 0 {
            return CmVolume::Volume(1.0);
        }
        if let Embedding::Coordinates { metric, .. } = self {
            let base = self.coords(verts[0] as usize).unwrap();
            let others: Vec<&[f64]> = verts[1..].iter().map(|&v| self.coords(v as usize).unwrap()).collect();
            if let Some(diffs) = metric.flat_differences(base, &others) {
                let mut g = vec![0.0; k * k];
                for i in 0..k {
                    for j in i..k {
                        let dot: f64 = diffs[i].iter().zip(&diffs[j]).map(|(a, b)| a * b).sum();
                        g[i * k + j] = dot;
                        g[j * k + i] = dot;
                    }
                }
                return linalg::volume_from_gram(&g, k);
            }
        }
        linalg::cayley_menger_volume(&self.sq_distance_matrix(verts), k)
    }

    pub fn sq_distance_matrix(&self, verts: &[u32]) -> Vec<f64> {
        let n = verts.len();
        let mut d2 = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = self.distance(verts[i] as usize, verts[j] as usize);
                d2[i * n + j] = d * d;
                d2[j * n + i] = d * d;
            }
        }
        d2
    }

    /// Gram matrix of the edge vectors of a simplex (flat realisation).
    pub fn gram(&self, verts: &[u32]) -> Vec<f64> {
        linalg::gram_from_sq_distances(&self.sq_distance_matrix(verts), verts.len() - 1)
    }
}

/// The k-simplices of a complex.
#[derive(Debug, Clone, Default)]
pub(crate) struct Level {
    pub arity: usize,
    pub verts: Vec<u32>,
    pub mass: Vec<f64>,
    pub lookup: HashMap<Key, u32>,
}

impl Level {
    fn new(arity: usize) -> Self {
        Level { arity, ..Default::default() }
    }

    fn len(&self) -> usize {
        self.verts.len() / self.arity
    }

    fn get(&self, i: usize) -> &[u32] {
        &self.verts[i * self.arity..(i + 1) * self.arity]
    }

    fn insert(&mut self, sorted: &[u32]) -> (u32, bool) {
        let k = key(sorted);
        if let Some(&i) = self.lookup.get(&k) {
            return (i, false);
        }
        let i = self.lookup.len() as u32;
        self.lookup.insert(k, i);
        self.verts.extend_from_slice(sorted);
        (i, true)
    }
}

/// Simplicial complex whose vertices carry an embedding. Each simplex is
/// stored once, with its vertices in ascending order, and carries its
/// k-volume as mass.
#[derive(Debug, Clone)]
pub struct GeometricComplex {
    embedding: Embedding,
    levels: Vec<Level>,
}

impl GeometricComplex {
    /// Builds the complex spanned by `simplices` (any dimensions, any vertex
    /// order) together with all their faces. Listed simplices keep their
    /// order within each dimension; missing faces are appended after them.
    pub fn new(embedding: Embedding, simplices: &[Vec<usize>]) -> Result<Self> {
        let n = embedding.len();
        let top = simplices.iter().map(|s| s.len()).max().unwrap_or(1).max(1);
        if top > MAX_VERTS {
            return Err(Error::Construction(format!(
                "simplices with {top} vertices exceed the supported maximum of {MAX_VERTS}"
            )));
        }
        let mut levels: Vec<Level> = (1..=top).map(Level::new).collect();
        for v in 0..n as u32 {
            levels[0].insert(&[v]);
        }
        for s in simplices {
            let mut v: Vec<u32> = Vec::with_capacity(s.len());
            for &x in s {
                if x >= n {
                    return Err(Error::Construction(format!("vertex {x} out of range for {n} vertices")));
                }
                v.push(x as u32);
            }
            if v.is_empty() {
                return Err(Error::Construction("empty simplex".into()));
            }
            if sort_with_sign(&mut v) == 0 {
                return Err(Error::Construction(format!("simplex {s:?} repeats a vertex")));
            }
            if s.len() > 1 {
                let (_, fresh) = levels[s.len() - 1].insert(&v);
                if !fresh {
                    return Err(Error::Construction(format!("duplicate simplex {s:?}")));
                }
            }
        }
        let mut complex = GeometricComplex { embedding, levels };
        complex.close_under_faces();
        complex.compute_masses()?;
        Ok(complex)
    }

    /// Builds from already-sorted simplex lists per dimension. Missing faces
    /// are added.
    pub(crate) fn from_sorted_levels(embedding: Embedding, lists: Vec<Vec<u32>>) -> Result<Self> {
        let n = embedding.len();
        let mut levels: Vec<Level> = Vec::with_capacity(lists.len().max(1));
        let mut l0 = Level::new(1);
        for v in 0..n as u32 {
            l0.insert(&[v]);
        }
        levels.push(l0);
        for (k, list) in lists.into_iter().enumerate().skip(1) {
            let mut level = Level::new(k + 1);
            level.lookup.reserve(list.len() / (k + 1));
            for s in list.chunks_exact(k + 1) {
                level.insert(s);
            }
            levels.push(level);
        }
        let mut complex = GeometricComplex { embedding, levels };
        complex.close_under_faces();
        complex.compute_masses()?;
        Ok(complex)
    }

    fn close_under_faces(&mut self) {
        for k in (2..self.levels.len()).rev() {
            let (lower, upper) = self.levels.split_at_mut(k);
            let face_level = &mut lower[k - 1];
            let level = &upper[0];
            let mut face = Vec::with_capacity(k);
            for i in 0..level.len() {
                let s = &level.verts[i * (k + 1)..(i + 1) * (k + 1)];
                for skip in 0..=k {
                    face.clear();
                    face.extend(s.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v));
                    face_level.insert(&face);
                }
            }
        }
        while self.levels.len() > 1 && self.levels.last().unwrap().len() == 0 {
            self.levels.pop();
        }
    }

    fn compute_masses(&mut self) -> Result<()> {
        for k in 0..self.levels.len() {
            let count = self.levels[k].len();
            let mut mass = Vec::with_capacity(count);
            for i in 0..count {
                if k == 0 {
                    mass.push(1.0);
                    continue;
                }
                let s = &self.levels[k].verts[i * (k + 1)..(i + 1) * (k + 1)];
                match self.embedding.simplex_volume(s) {
                    CmVolume::Volume(v) => mass.push(v),
                    CmVolume::NonEmbeddable(d) => {
                        return Err(Error::Construction(format!(
                            "simplex {s:?} has negative Cayley-Menger determinant {d:e}"
                        )))
                    }
                }
            }
            self.levels[k].mass = mass;
        }
        Ok(())
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn num_vertices(&self) -> usize {
        self.embedding.len()
    }

    /// Highest dimension with at least one simplex (0 for a bare vertex set).
    pub fn dim(&self) -> usize {
        self.levels.len() - 1
    }

    /// Number of k-simplices.
    pub fn count(&self, k: usize) -> usize {
        self.levels.get(k).map_or(0, |l| l.len())
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[u32] {
        self.levels[k].get(i)
    }

    pub fn simplex_mass(&self, k: usize, i: usize) -> f64 {
        self.levels[k].mass[i]
    }

    pub fn masses(&self, k: usize) -> &[f64] {
        self.levels.get(k).map_or(&[], |l| &l.mass[..])
    }

    /// Index of the k-simplex with the given sorted vertices.
    pub fn find(&self, sorted: &[u32]) -> Option<usize> {
        let k = sorted.len().checked_sub(1)?;
        if sorted.len() > MAX_VERTS {
            return None;
        }
        self.levels.get(k)?.lookup.get(&key(sorted)).map(|&i| i as usize)
    }

    /// Looks up an arbitrarily ordered tuple: (index, orientation sign).
    pub fn find_oriented(&self, verts: &[usize]) -> Option<(usize, i64)> {
        let mut v: Vec<u32> = verts.iter().map(|&x| x as u32).collect();
        let sign = sort_with_sign(&mut v);
        if sign == 0 {
            return None;
        }
        self.find(&v).map(|i| (i, sign))
    }

    pub fn coords(&self, v: usize) -> Option<&[f64]> {
        self.embedding.coords(v)
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.embedding.distance(a, b)
    }

    /// Distance from a vertex to an arbitrary point, for coordinate
    /// embeddings.
    pub fn distance_to_point(&self, v: usize, p: &[f64]) -> Option<f64> {
        match &self.embedding {
            Embedding::Coordinates { metric, .. } => Some(metric.distance(self.coords(v).unwrap(), p)),
            Embedding::Points { .. } => None,
        }
    }

    /// Largest distance between vertices of the complex.
    pub fn diameter(&self) -> f64 {
        let n = self.num_vertices();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                m = m.max(self.distance(i, j));
            }
        }
        m
    }

    /// Largest distance between the listed vertices.
    pub fn vertex_set_diameter(&self, verts: &[usize]) -> f64 {
        let mut m: f64 = 0.0;
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                m = m.max(self.distance(i, j));
            }
        }
        m
    }

    /// Shortest-path distances along edges from vertex `src`.
    pub fn graph_geodesic_from(&self, src: usize) -> Vec<f64> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let n = self.num_vertices();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in 0..self.count(1) {
            let s = self.simplex(1, e);
            let (a, b, w) = (s[0] as usize, s[1] as usize, self.simplex_mass(1, e));
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(Reverse((ordered(0.0), src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            let d = f64::from_bits(d);
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((ordered(nd), v)));
                }
            }
        }
        dist
    }

    /// Faces of the k-simplex `i` as (face index, sign (-1)^j).
    pub fn faces(&self, k: usize, i: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let s = self.simplex(k, i);
        (0..=k).map(move |skip| {
            let mut face = [0u32; MAX_VERTS];
            let mut m = 0;
            for (j, &v) in s.iter().enumerate() {
                if j != skip {
                    face[m] = v;
                    m += 1;
                }
            }
            let idx = self.find(&face[..k]).expect("complex is closed under faces");
            (idx, if skip % 2 == 0 { 1 } else { -1 })
        })
    }

    /// Subcomplex spanned by the given simplices, with vertices renumbered
    /// compactly (in increasing order of old index).
    pub fn subcomplex(self: &Arc<Self>, cells: &[(usize, usize)]) -> Result<Compaction> {
        let n = self.num_vertices();
        let mut used = vec![false; n];
        for &(k, i) in cells {
            for &v in self.simplex(k, i) {
                used[v as usize] = true;
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&v| used[v]).collect();
        let mut vertex_map = vec![u32::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            vertex_map[old] = new as u32;
        }
        let top = cells.iter().map(|&(k, _)| k).max().unwrap_or(0);
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); top + 1];
        for &(k, i) in cells {
            if k == 0 {
                continue;
            }
            // renumbering is monotone, so sorted order is kept
            lists[k].extend(self.simplex(k, i).iter().map(|&v| vertex_map[v as usize]));
        }
        let sub = GeometricComplex::from_sorted_levels(self.embedding.select(&keep), lists)?;
        let sub = Arc::new(sub);
        let mut simplex_map: Vec<Vec<u32>> = Vec::with_capacity(sub.levels.len());
        for k in 0..sub.levels.len() {
            let mut back = vec![0u32; sub.count(k)];
            for j in 0..sub.count(k) {
                let old: Vec<u32> = sub.simplex(k, j).iter().map(|&v| keep[v as usize] as u32).collect();
                back[j] = self.find(&old).expect("subcomplex simplex exists in parent") as u32;
            }
            simplex_map.push(back);
        }
        Ok(Compaction { parent: self.clone(), complex: sub, kept_vertices: keep, vertex_map, to_parent: simplex_map })
    }
}

fn ordered(x: f64) -> u64 {
    // nonnegative floats order like their bit patterns
    x.to_bits()
}

/// A subcomplex with compact vertex numbering, plus the maps back to the
/// parent complex.
#[derive(Debug, Clone)]
pub struct Compaction {
    pub parent: Arc<GeometricComplex>,
    pub complex: Arc<GeometricComplex>,
    /// Parent index of each new vertex.
    pub kept_vertices: Vec<usize>,
    /// New index of each parent vertex, `u32::MAX` when dropped.
    pub vertex_map: Vec<u32>,
    /// Parent index of each new k-simplex.
    pub to_parent: Vec<Vec<u32>>,
}

impl Compaction {
    pub fn transfer_values(&self, values: &[f64]) -> Vec<f64> {
        self.kept_vertices.iter().map(|&v| values[v]).collect()
    }
}
