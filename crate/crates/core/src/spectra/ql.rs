//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.

use crate::error::{Error, Result};

/// Diagonalizes the tridiagonal matrix with diagonal `diag` and
/// off-diagonal `offdiag` (length `n - 1`).
///
/// Returns unsorted eigenvalues and the matching eigenvectors, with
/// `vectors[m]` paired to `values[m]`.
pub(crate) fn tridiagonal_eigen(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    debug_assert_eq!(offdiag.len(), n.saturating_sub(1));
    let mut d = diag.to_vec();
    // e[i] couples i and i+1; e[n-1] is scratch
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();

    let norm = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    // underflow guard only; the relative test below does the real work
    let floor = f64::EPSILON * f64::EPSILON * norm;
    let max_iter = 50 * n.max(1);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == max_iter {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: iter,
                });
            }
            iter += 1;

            // Wilkinson-style shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                rotate(&mut z, i, c, s);
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

/// Applies the plane rotation to eigenvector rows `i` and `i + 1`.
fn rotate(z: &mut [Vec<f64>], i: usize, c: f64, s: f64) {
    let (lo, hi) = z.split_at_mut(i + 1);
    let a = &mut lo[i];
    let b = &mut hi[0];
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let f = *y;
        *y = s * *x + c * f;
        *x = c * *x - s * f;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let (mut vals, _) = tridiagonal_eigen(&[0.0, 0.0], &[1.0]).unwrap();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 1.0).abs() < 1e-15);
        assert!((vals[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_by_one() {
        let (vals, vecs) = tridiagonal_eigen(&[3.0], &[]).unwrap();
        assert_eq!(vals, vec![3.0]);
        assert_eq!(vecs, vec![vec![1.0]]);
    }

    #[test]
    fn already_diagonal() {
        let (mut vals, _) = tridiagonal_eigen(&[2.0, -1.0, 5.0], &[0.0, 0.0]).unwrap();
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals, vec![-1.0, 2.0, 5.0]);
    }
}
