//! Ambient metrics for embedded vertices.

use serde::{Deserialize, Serialize};

/// Metric on coordinate vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    /// Great-circle distance on the sphere of the given radius, after radial
    /// projection of both points.
    Sphere { radius: f64 },
    /// Flat torus: coordinate i is periodic with period `periods[i]`; a period
    /// of 0 marks a non-periodic coordinate.
    FlatTorus { periods: Vec<f64> },
    /// Pythagorean product of `base` on the first `base_dim` coordinates with
    /// the Euclidean metric on the rest.
    Product { base: Box<Metric>, base_dim: usize },
}

fn wrap(d: f64, period: f64) -> f64 {
    if period > 0.0 {
        d - period * (d / period).round()
    } else {
        d
    }
}

impl Metric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt(),
            Metric::Sphere { radius } => {
                let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
                let (mut minus, mut plus) = (0.0, 0.0);
                for (x, y) in a.iter().zip(b) {
                    minus += (x / na - y / nb).powi(2);
                    plus += (x / na + y / nb).powi(2);
                }
                let angle = 2.0 * minus.sqrt().atan2(plus.sqrt());
                radius * angle
            }
            Metric::FlatTorus { periods } => a
                .iter()
                .zip(b)
                .enumerate()
                .map(|(i, (x, y))| wrap(x - y, periods.get(i).copied().unwrap_or(0.0)).powi(2))
                .sum::<f64>()
                .sqrt(),
            Metric::Product { base, base_dim } => {
                let k = *base_dim;
                let db = base.distance(&a[..k], &b[..k]);
                let rest: f64 = a[k..].iter().zip(&b[k..]).map(|(x, y)| (x - y) * (x - y)).sum();
                (db * db + rest).sqrt()
            }
        }
    }

    /// Point at parameter `lambda` along the segment from `a` to `b`,
    /// following the shortest lift on periodic coordinates.
    pub fn interpolate(&self, a: &[f64], b: &[f64], lambda: f64) -> Vec<f64> {
        match self {
            Metric::FlatTorus { periods } => a
                .iter()
                .zip(b)
                .enumerate()
                .map(|(i, (x, y))| x + lambda * wrap(y - x, periods.get(i).copied().unwrap_or(0.0)))
                .collect(),
            Metric::Product { base, base_dim } => {
                let k = *base_dim;
                let mut out = base.interpolate(&a[..k], &b[..k], lambda);
                out.extend(a[k..].iter().zip(&b[k..]).map(|(x, y)| x + lambda * (y - x)));
                out
            }
            _ => a.iter().zip(b).map(|(x, y)| x + lambda * (y - x)).collect(),
        }
    }

    /// Edge vectors from `base` to each of `others`, when the metric is flat
    /// so that the simplex volume can be computed from coordinates.
    pub(crate) fn flat_differences(&self, base: &[f64], others: &[&[f64]]) -> Option<Vec<Vec<f64>>> {
        match self {
            Metric::Euclidean => Some(others.iter().map(|o| o.iter().zip(base).map(|(x, y)| x - y).collect()).collect()),
            Metric::FlatTorus { periods } => Some(
                others
                    .iter()
                    .map(|o| {
                        o.iter()
                            .zip(base)
                            .enumerate()
                            .map(|(i, (x, y))| wrap(x - y, periods.get(i).copied().unwrap_or(0.0)))
                            .collect()
                    })
                    .collect(),
            ),
            Metric::Product { base: inner, base_dim } => {
                let k = *base_dim;
                let head: Vec<&[f64]> = others.iter().map(|o| &o[..k]).collect();
                let mut diffs = inner.flat_differences(&base[..k], &head)?;
                for (d, o) in diffs.iter_mut().zip(others) {
                    d.extend(o[k..].iter().zip(&base[k..]).map(|(x, y)| x - y));
                }
                Some(diffs)
            }
            Metric::Sphere { .. } => None,
        }
    }

    /// Euclidean ambient of dimension one more, used for products.
    pub fn with_interval(&self, base_dim: usize) -> Metric {
        match self {
            Metric::Euclidean => Metric::Euclidean,
            Metric::FlatTorus { periods } => {
                let mut p = periods.clone();
                p.resize(base_dim, 0.0);
                p.push(0.0);
                Metric::FlatTorus { periods: p }
            }
            other => Metric::Product { base: Box::new(other.clone()), base_dim },
        }
    }
}
