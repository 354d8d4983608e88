//! Small dense linear algebra on row-major slices. Sizes here never exceed
//! a handful of rows, so plain Gaussian elimination is enough.

/// Determinant by Gaussian elimination with partial pivoting. `a` is
/// overwritten.
pub fn det_in_place(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[piv * n + col].abs() {
                piv = row;
            }
        }
        let p = a[piv * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let factor = a[row * n + col] / p;
            if factor != 0.0 {
                for k in col..n {
                    a[row * n + k] -= factor * a[col * n + k];
                }
            }
        }
    }
    det
}

pub fn det(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    det_in_place(&mut m, n)
}

/// Solves `a x = b`; returns `None` when `a` is numerically singular.
pub fn solve(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[piv * n + col].abs() {
                piv = row;
            }
        }
        let p = m[piv * n + col];
        if p.abs() <= 1e-13 * scale {
            return None;
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            x.swap(col, piv);
        }
        for row in col + 1..n {
            let factor = m[row * n + col] / p;
            if factor != 0.0 {
                for k in col..n {
                    m[row * n + k] -= factor * m[col * n + k];
                }
                x[row] -= factor * x[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for k in col + 1..n {
            s -= m[col * n + k] * x[k];
        }
        x[col] = s / m[col * n + col];
    }
    Some(x)
}

/// Gram matrix of the edge vectors v_i - v_0 recovered from pairwise
/// squared distances, i.e. the reduced Cayley–Menger form.
/// `d2` is the (k+1)x(k+1) matrix of squared distances.
pub fn gram_from_sq_distances(d2: &[f64], k: usize) -> Vec<f64> {
    let n = k + 1;
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            g[i * k + j] = 0.5 * (d2[i + 1] + d2[j + 1] - d2[(i + 1) * n + (j + 1)]);
        }
    }
    g
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Outcome of a Cayley–Menger volume computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CmVolume {
    Volume(f64),
    /// The squared volume came out clearly negative: no Euclidean simplex
    /// has these edge lengths.
    NonEmbeddable(f64),
}

/// k-volume of a simplex from its (k+1)x(k+1) squared distance matrix.
pub fn cayley_menger_volume(d2: &[f64], k: usize) -> CmVolume {
    if k == 0 {
        return CmVolume::Volume(1.0);
    }
    let g = gram_from_sq_distances(d2, k);
    volume_from_gram(&g, k)
}

/// k-volume from a k x k Gram matrix.
pub fn volume_from_gram(g: &[f64], k: usize) -> CmVolume {
    if k == 0 {
        return CmVolume::Volume(1.0);
    }
    let scale = (0..k).fold(0.0f64, |s, i| s.max(g[i * k + i].abs()));
    let dg = det(g, k);
    let floor = 1e-10 * scale.powi(k as i32);
    if dg < -floor {
        CmVolume::NonEmbeddable(dg)
    } else {
        CmVolume::Volume(dg.max(0.0).sqrt() / factorial(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_permutation() {
        let a = [0.0, 1.0, 1.0, 0.0];
        assert_eq!(det(&a, 2), -1.0);
    }

    #[test]
    fn solve_small_system() {
        let a = [2.0, 1.0, 1.0, 3.0];
        let x = solve(&a, &[3.0, 5.0], 2).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn cm_right_triangle() {
        // legs 1,1, hypotenuse sqrt 2
        let d2 = [0.0, 1.0, 1.0, 1.0, 0.0, 2.0, 1.0, 2.0, 0.0];
        match cayley_menger_volume(&d2, 2) {
            CmVolume::Volume(v) => assert!((v - 0.5).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cm_rejects_triangle_inequality_violation() {
        // sides 1, 1, 3
        let d2 = [0.0, 1.0, 9.0, 1.0, 0.0, 1.0, 9.0, 1.0, 0.0];
        assert!(matches!(cayley_menger_volume(&d2, 2), CmVolume::NonEmbeddable(_)));
    }
}
