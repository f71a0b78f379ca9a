//! Reference eigenvalue oracles that share no code with the library solvers.
#![allow(dead_code)]

use num_complex::Complex64;

/// Coefficients `c[0..=n]` of `det(λI - A)` (monic, `c[n] = 1`) by Faddeev–LeVerrier.
pub fn char_poly(a: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = vec![0.0; n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += a[i * n + l] * m[l * n + j];
                }
                next[i * n + j] = s;
            }
            next[i * n + i] += c[n - k + 1];
        }
        m = next;
        let mut tr = 0.0;
        for i in 0..n {
            for l in 0..n {
                tr += a[i * n + l] * m[l * n + i];
            }
        }
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[f64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * x + k)
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
pub fn durand_kerner(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(4.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Newton refinement of a real root.
pub fn newton_polish(c: &[f64], mut x: f64) -> f64 {
    let d: Vec<f64> = (1..c.len()).map(|k| k as f64 * c[k]).collect();
    for _ in 0..50 {
        let p = horner(c, Complex64::new(x, 0.0)).re;
        let dp = horner(&d, Complex64::new(x, 0.0)).re;
        if dp == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.abs() < 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Sorted eigenvalues of a small dense symmetric matrix from its characteristic polynomial.
pub fn oracle_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let c = char_poly(a, n);
    let mut roots: Vec<f64> = durand_kerner(&c)
        .into_iter()
        .map(|z| newton_polish(&c, z.re))
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}

/// Number of eigenvalues below `x` of the tridiagonal matrix (Sturm count).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for k in 0..diag.len() {
        let coupling = if k == 0 { 0.0 } else { off[k - 1] * off[k - 1] };
        q = diag[k] - x - if k == 0 { 0.0 } else { coupling / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[k].abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of an open tridiagonal matrix by bisection, ascending.
pub fn bisection_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let bound = diag
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let r = if i + 1 < n { off[i].abs() } else { 0.0 };
            d.abs() + l + r
        })
        .fold(0.0f64, f64::max)
        + 1.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if sturm_count(diag, off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Open-chain diagonal and off-diagonal from θ, potentials given as `(site, value)`.
pub fn theta_chain(n: usize, theta: f64, potentials: &[(usize, f64)]) -> (Vec<f64>, Vec<f64>) {
    let t1 = 1.0 + 0.5 * theta.cos();
    let t2 = 1.0 - 0.5 * theta.cos();
    let off = (1..n).map(|j| if j % 2 == 1 { t1 } else { t2 }).collect();
    let mut diag = vec![0.0; n];
    for &(s, v) in potentials {
        diag[s - 1] += v;
    }
    (diag, off)
}
