//! Weighted L1 minimisation under linear equality constraints,
//!
//!   minimise  sum_j w_j |x_j|   subject to  A x = b,
//!
//! solved by a primal simplex method on a dense tableau. Each free variable
//! is split into a positive and a negative part that share one tableau
//! column; a basic variable records which part is basic. Pricing is
//! Dantzig's rule, with a switch to Bland's rule while the method stalls on
//! degenerate pivots, so every run is deterministic and terminates.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Problem data with sparse columns.
#[derive(Debug, Clone, Default)]
pub struct L1Problem {
    pub rows: usize,
    /// Column j as (row, value) pairs.
    pub cols: Vec<Vec<(usize, f64)>>,
    /// Nonnegative weight of each column.
    pub weights: Vec<f64>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct L1Solution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Largest constraint violation |A x - b|.
    pub residual: f64,
    pub iterations: usize,
}

const PIVOT_TOL: f64 = 1e-9;
const ZERO_TOL: f64 = 1e-12;
const STALL_LIMIT: usize = 50;

struct Tableau {
    m: usize,
    ncol: usize,
    t: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<(usize, f64)>,
    basic_row: Vec<usize>,
    cost: Vec<f64>,
    z: Vec<f64>,
    artificial_from: usize,
    iterations: usize,
}

impl Tableau {
    fn recompute_z(&mut self) {
        let (m, ncol) = (self.m, self.ncol);
        let mut z = vec![0.0; ncol];
        for i in 0..m {
            let cb = self.cost[self.basis[i].0];
            if cb != 0.0 {
                let row = &self.t[i * ncol..(i + 1) * ncol];
                for (zj, &v) in z.iter_mut().zip(row) {
                    *zj += cb * v;
                }
            }
        }
        self.z = z;
    }

    /// Reduced cost of column j in direction d.
    #[inline]
    fn reduced(&self, j: usize, d: f64) -> f64 {
        self.cost[j] - d * self.z[j]
    }

    fn choose_entering(&self, bland: bool, allow_artificial: bool, tol: f64) -> Option<(usize, f64)> {
        let limit = if allow_artificial { self.ncol } else { self.artificial_from };
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..limit {
            if self.basic_row[j] != usize::MAX {
                continue;
            }
            let dirs: &[f64] = if j >= self.artificial_from { &[1.0] } else { &[1.0, -1.0] };
            for &d in dirs {
                let rc = self.reduced(j, d);
                if rc < -tol {
                    if bland {
                        return Some((j, d));
                    }
                    if best.map_or(true, |b| rc < b.2) {
                        best = Some((j, d, rc));
                    }
                }
            }
        }
        best.map(|(j, d, _)| (j, d))
    }

    fn choose_leaving(&self, q: usize, d: f64, bland: bool, phase2: bool) -> Option<usize> {
        let ncol = self.ncol;
        let mut best: Option<(usize, f64, f64)> = None;
        for i in 0..self.m {
            let a = d * self.t[i * ncol + q];
            let blocked = phase2 && self.basis[i].0 >= self.artificial_from;
            let ratio = if blocked && a.abs() > PIVOT_TOL {
                0.0
            } else if a > PIVOT_TOL {
                self.beta[i] / a
            } else {
                continue;
            };
            let better = match best {
                None => true,
                Some((bi, br, ba)) => {
                    if ratio < br - 1e-12 {
                        true
                    } else if ratio <= br + 1e-12 {
                        if bland {
                            self.basis[i].0 < self.basis[bi].0
                        } else {
                            a.abs() > ba
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                best = Some((i, ratio, a.abs()));
            }
        }
        best.map(|b| b.0)
    }

    fn pivot(&mut self, r: usize, q: usize, d: f64) {
        let ncol = self.ncol;
        let piv = d * self.t[r * ncol + q];
        let rc_y = self.reduced(q, d);
        {
            let row = &mut self.t[r * ncol..(r + 1) * ncol];
            for v in row.iter_mut() {
                *v /= piv;
            }
            row[q] = d;
        }
        self.beta[r] /= piv;
        let pivot_row: Vec<f64> = self.t[r * ncol..(r + 1) * ncol].to_vec();
        let nz: Vec<usize> = (0..ncol).filter(|&j| pivot_row[j] != 0.0).collect();
        let beta_r = self.beta[r];
        let work = self.m * nz.len();
        let update = |(i, (row, b)): (usize, (&mut [f64], &mut f64))| {
            if i == r {
                return;
            }
            let f = d * row[q];
            if f == 0.0 {
                return;
            }
            for &j in &nz {
                let v = row[j] - f * pivot_row[j];
                row[j] = if v.abs() < ZERO_TOL { 0.0 } else { v };
            }
            row[q] = 0.0;
            *b -= f * beta_r;
            if b.abs() < ZERO_TOL {
                *b = 0.0;
            }
        };
        if work > 200_000 {
            self.t
                .par_chunks_mut(ncol)
                .zip(self.beta.par_iter_mut())
                .enumerate()
                .for_each(update);
        } else {
            self.t.chunks_mut(ncol).zip(self.beta.iter_mut()).enumerate().for_each(update);
        }
        for &j in &nz {
            self.z[j] += rc_y * pivot_row[j];
        }
        let (old, _) = self.basis[r];
        self.basic_row[old] = usize::MAX;
        self.basis[r] = (q, d);
        self.basic_row[q] = r;
        self.iterations += 1;
    }

    fn run(&mut self, phase2: bool, max_iter: usize) -> Result<()> {
        let scale = self.cost.iter().fold(1.0f64, |a, &c| a.max(c.abs()));
        let tol = 1e-9 * scale;
        let mut stalled = 0usize;
        loop {
            if self.iterations > max_iter {
                return Err(Error::Solver(format!("simplex exceeded {max_iter} iterations")));
            }
            let bland = stalled > STALL_LIMIT;
            let Some((q, d)) = self.choose_entering(bland, !phase2, tol) else {
                return Ok(());
            };
            let Some(r) = self.choose_leaving(q, d, bland, phase2) else {
                return Err(Error::Solver("objective unbounded below".into()));
            };
            let step = self.beta[r] / (d * self.t[r * self.ncol + q]);
            if step.abs() <= 1e-14 {
                stalled += 1;
            } else {
                stalled = 0;
            }
            self.pivot(r, q, d);
        }
    }
}

impl L1Problem {
    pub fn new(rows: usize) -> Self {
        L1Problem { rows, cols: Vec::new(), weights: Vec::new(), rhs: vec![0.0; rows] }
    }

    pub fn add_column(&mut self, entries: Vec<(usize, f64)>, weight: f64) -> usize {
        self.cols.push(entries);
        self.weights.push(weight);
        self.cols.len() - 1
    }

    pub fn solve(&self) -> Result<L1Solution> {
        let m = self.rows;
        let n = self.cols.len();
        if self.weights.len() != n || self.rhs.len() != m {
            return Err(Error::Argument("inconsistent L1 problem dimensions".into()));
        }
        if self.weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::Argument("weights must be finite and nonnegative".into()));
        }
        if m == 0 {
            return Ok(L1Solution { x: vec![0.0; n], objective: 0.0, residual: 0.0, iterations: 0 });
        }
        // a singleton column gives a starting basis for its row; prefer the
        // cheapest one
        let mut start: Vec<Option<(usize, f64)>> = vec![None; m];
        for (j, col) in self.cols.iter().enumerate() {
            let live: Vec<&(usize, f64)> = col.iter().filter(|e| e.1 != 0.0).collect();
            if live.len() == 1 {
                let (i, a) = *live[0];
                let better = match start[i] {
                    None => true,
                    Some((k, _)) => self.weights[j] < self.weights[k],
                };
                if better {
                    start[i] = Some((j, a));
                }
            }
        }
        let missing: Vec<usize> = (0..m).filter(|&i| start[i].is_none()).collect();
        let ncol = n + missing.len();
        let mut t = vec![0.0; m * ncol];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                t[i * ncol + j] += a;
            }
        }
        let mut beta = self.rhs.clone();
        let mut basis = vec![(0usize, 1.0f64); m];
        let mut basic_row = vec![usize::MAX; ncol];
        for (k, &i) in missing.iter().enumerate() {
            let j = n + k;
            let s = if self.rhs[i] < 0.0 { -1.0 } else { 1.0 };
            t[i * ncol + j] = s;
            start[i] = Some((j, s));
        }
        for i in 0..m {
            let (j, a) = start[i].unwrap();
            let d = if self.rhs[i] / a < 0.0 { -1.0 } else { 1.0 };
            let scale = d * a;
            for v in &mut t[i * ncol..(i + 1) * ncol] {
                *v /= scale;
            }
            beta[i] /= scale;
            basis[i] = (j, d);
            basic_row[j] = i;
        }
        let mut tab = Tableau {
            m,
            ncol,
            t,
            beta,
            basis,
            basic_row,
            cost: vec![0.0; ncol],
            z: vec![0.0; ncol],
            artificial_from: n,
            iterations: 0,
        };
        let max_iter = 200 * (m + ncol) + 1000;
        if !missing.is_empty() {
            for j in n..ncol {
                tab.cost[j] = 1.0;
            }
            tab.recompute_z();
            tab.run(false, max_iter)?;
            let infeas: f64 = (0..m).filter(|&i| tab.basis[i].0 >= n).map(|i| tab.beta[i]).sum();
            let bscale = self.rhs.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
            if infeas > 1e-7 * bscale {
                return Err(Error::Infeasible(format!("constraints cannot be met (phase one residual {infeas:e})")));
            }
            for j in n..ncol {
                tab.cost[j] = 0.0;
            }
        }
        tab.cost[..n].copy_from_slice(&self.weights);
        tab.recompute_z();
        tab.run(true, max_iter)?;
        let mut x = vec![0.0; n];
        for i in 0..m {
            let (j, d) = tab.basis[i];
            if j < n {
                x[j] = d * tab.beta[i];
            }
        }
        let objective = x.iter().zip(&self.weights).map(|(v, w)| v.abs() * w).sum();
        let residual = self.residual(&x);
        Ok(L1Solution { x, objective, residual, iterations: tab.iterations })
    }

    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if x[j] != 0.0 {
                for &(i, a) in col {
                    ax[i] += a * x[j];
                }
            }
        }
        ax.iter().zip(&self.rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}
