//! Integer min-cost transport between two weighted point sets, by successive
//! shortest augmenting paths on the complete bipartite residual graph.

use crate::error::{arg, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub cost: f64,
    /// (supply index, demand index, units moved)
    pub flows: Vec<(usize, usize, i64)>,
    pub augmentations: usize,
}

/// Moves `supply[i]` units out of source i and `demand[j]` units into sink j
/// at unit price `cost(i, j)`. Totals must agree.
pub fn min_cost_transport(supply: &[i64], demand: &[i64], cost: impl Fn(usize, usize) -> f64) -> Result<TransportPlan> {
    if supply.iter().chain(demand).any(|&v| v < 0) {
        return arg("transport weights must be nonnegative");
    }
    let total: i64 = supply.iter().sum();
    if total != demand.iter().sum::<i64>() {
        return arg(format!(
            "unbalanced transport: supply {} against demand {}",
            total,
            demand.iter().sum::<i64>()
        ));
    }
    let (p, q) = (supply.len(), demand.len());
    let c: Vec<f64> = (0..p * q).map(|k| cost(k / q, k % q)).collect();
    if c.iter().any(|v| !v.is_finite()) {
        return arg("transport costs must be finite");
    }
    let mut flow = vec![0i64; p * q];
    let mut left = supply.to_vec();
    let mut need = demand.to_vec();
    let mut augmentations = 0;
    // distances to supply nodes (0..p) and demand nodes (p..p+q)
    let mut dist = vec![f64::INFINITY; p + q];
    let mut pred = vec![usize::MAX; p + q];
    let mut shipped = 0;
    while shipped < total {
        dist.fill(f64::INFINITY);
        pred.fill(usize::MAX);
        for i in 0..p {
            if left[i] > 0 {
                dist[i] = 0.0;
            }
        }
        // Bellman-Ford; the residual graph has no negative cycles because
        // every intermediate flow is optimal for its value
        for _ in 0..(p + q) {
            let mut changed = false;
            for i in 0..p {
                if dist[i].is_finite() {
                    for j in 0..q {
                        let nd = dist[i] + c[i * q + j];
                        if nd < dist[p + j] - 1e-15 {
                            dist[p + j] = nd;
                            pred[p + j] = i;
                            changed = true;
                        }
                    }
                }
            }
            for j in 0..q {
                if dist[p + j].is_finite() {
                    for i in 0..p {
                        if flow[i * q + j] > 0 {
                            let nd = dist[p + j] - c[i * q + j];
                            if nd < dist[i] - 1e-15 {
                                dist[i] = nd;
                                pred[i] = p + j;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let end = (0..q)
            .filter(|&j| need[j] > 0 && dist[p + j].is_finite())
            .min_by(|&a, &b| dist[p + a].total_cmp(&dist[p + b]).then(a.cmp(&b)))
            .expect("a balanced complete bipartite network always has a path");
        // walk back to find the bottleneck
        let mut amount = need[end];
        let mut node = p + end;
        loop {
            let i = pred[node];
            let prev = pred[i];
            if prev == usize::MAX {
                amount = amount.min(left[i]);
                break;
            }
            amount = amount.min(flow[i * q + (prev - p)]);
            node = prev;
        }
        let mut node = p + end;
        loop {
            let i = pred[node];
            let j = node - p;
            flow[i * q + j] += amount;
            let prev = pred[i];
            if prev == usize::MAX {
                left[i] -= amount;
                break;
            }
            flow[i * q + (prev - p)] -= amount;
            node = prev;
        }
        need[end] -= amount;
        shipped += amount;
        augmentations += 1;
    }
    let mut flows = Vec::new();
    let mut cost_total = 0.0;
    for i in 0..p {
        for j in 0..q {
            let f = flow[i * q + j];
            if f > 0 {
                flows.push((i, j, f));
                cost_total += f as f64 * c[i * q + j];
            }
        }
    }
    Ok(TransportPlan { cost: cost_total, flows, augmentations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_unit(pos: &[f64], neg: &[f64]) -> f64 {
        // all matchings of equal-size unit sets
        fn rec(pos: &[f64], neg: &mut Vec<f64>, i: usize, acc: f64, best: &mut f64) {
            if i == pos.len() {
                *best = best.min(acc);
                return;
            }
            for k in 0..neg.len() {
                let v = neg.remove(k);
                rec(pos, neg, i + 1, acc + (pos[i] - v).abs(), best);
                neg.insert(k, v);
            }
        }
        let mut best = f64::INFINITY;
        rec(pos, &mut neg.to_vec(), 0, 0.0, &mut best);
        best
    }

    #[test]
    fn colinear_alternating_points() {
        let pos = [0.0f64, 2.0];
        let neg = [1.0f64, 3.0];
        let plan = min_cost_transport(&[1, 1], &[1, 1], |i, j| (pos[i] - neg[j]).abs()).unwrap();
        assert_eq!(plan.cost, 2.0);
    }

    #[test]
    fn agrees_with_matching_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..6);
            let pos: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
            let neg: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
            let plan = min_cost_transport(&vec![1; n], &vec![1; n], |i, j| (pos[i] - neg[j]).abs()).unwrap();
            assert!((plan.cost - brute_unit(&pos, &neg)).abs() < 1e-9);
        }
    }

    #[test]
    fn multiplicities_are_respected() {
        // weight 2 at 0 against unit sinks at 1 and 3
        let pts = [1.0, 3.0];
        let plan = min_cost_transport(&[2], &[1, 1], |_, j| pts[j]).unwrap();
        assert_eq!(plan.cost, 4.0);
        assert!(min_cost_transport(&[2], &[1], |_, _| 1.0).is_err());
    }
}
