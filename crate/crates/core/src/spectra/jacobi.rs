//! Cyclic Jacobi rotations for dense real symmetric matrices.

use crate::error::{Error, Result};

/// Dense symmetric eigenproblem. `a` is row-major `n x n` and is consumed.
///
/// Stops once the off-diagonal Frobenius norm drops below
/// `rel_tol * ||A||_F`. Returns unsorted eigenvalues and eigenvectors with
/// `vectors[m]` paired to `values[m]`.
pub(crate) fn jacobi_eigen(
    mut a: Vec<f64>,
    n: usize,
    rel_tol: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    debug_assert_eq!(a.len(), n * n);
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();

    let total = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = rel_tol * total;
    let max_sweeps = 50 * n.max(1);

    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) >= target && total > 0.0 {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                index: 0,
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                let (lo, hi) = v.split_at_mut(q);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let vp = *x;
                    let vq = *y;
                    *x = c * vp - s * vq;
                    *y = s * vp + c * vq;
                }
            }
        }
    }

    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}
