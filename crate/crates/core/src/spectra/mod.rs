//! Single-excitation Hamiltonian and its full eigendecomposition.
//!
//! Open chains are tridiagonal and go through implicit-shift QL; rings carry a
//! corner element and are handled by cyclic Jacobi on the dense matrix. Both
//! paths feed the same post-processing so that spectra are reproducible:
//!
//! * energies ascending,
//! * numerically degenerate levels rotated into position-localized states and
//!   ordered by localization center,
//! * each vector's first significant entry positive.

mod jacobi;
mod ql;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::EffectiveChain;

/// Entries below this magnitude are treated as noise by the sign rule.
pub const SIGN_THRESHOLD: f64 = 1e-8;

/// Levels closer than this (relative to the matrix max-norm) form a
/// degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Jacobi stopping rule: off-diagonal Frobenius norm below this fraction of
/// the full norm.
pub const JACOBI_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    /// Bond between the last and the first site of a ring.
    pub corner: Option<f64>,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = self.diag[i];
        }
        for (i, &t) in self.offdiag.iter().enumerate() {
            a[i * n + i + 1] += t;
            a[(i + 1) * n + i] += t;
        }
        if let Some(t) = self.corner {
            if n > 1 {
                a[n - 1] += t;
                a[(n - 1) * n] += t;
            } else {
                a[0] += 2.0 * t;
            }
        }
        a
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.to_dense().iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for (i, &t) in self.offdiag.iter().enumerate() {
            y[i] += t * x[i + 1];
            y[i + 1] += t * x[i];
        }
        if let (Some(t), true) = (self.corner, n > 0) {
            y[0] += t * x[n - 1];
            y[n - 1] += t * x[0];
        }
        y
    }

    /// Same matrix with `c` added to every diagonal entry.
    pub fn shifted(&self, c: f64) -> Self {
        HamiltonianMatrix {
            diag: self.diag.iter().map(|d| d + c).collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        HamiltonianMatrix {
            diag: self.diag.iter().map(|d| d * c).collect(),
            offdiag: self.offdiag.iter().map(|d| d * c).collect(),
            corner: self.corner.map(|t| t * c),
        }
    }
}

/// Ascending energies with orthonormal eigenvectors; `vectors[m]` belongs to
/// `energies[m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// `max_m ||H v_m - E_m v_m||`.
    pub fn max_residual(&self, h: &HamiltonianMatrix) -> f64 {
        self.energies
            .iter()
            .zip(&self.vectors)
            .map(|(&e, v)| {
                h.apply(v)
                    .iter()
                    .zip(v)
                    .map(|(hv, x)| (hv - e * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max_ij |<v_i, v_j> - δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max_m |E_m + E_{N+1-m}|`, zero for a spectrum symmetric about 0.
    pub fn chiral_asymmetry(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|m| (self.energies[m] + self.energies[n - 1 - m]).abs())
            .fold(0.0, f64::max)
    }
}

pub fn build_hamiltonian(chain: &EffectiveChain) -> HamiltonianMatrix {
    let n = chain.n_sites();
    HamiltonianMatrix {
        diag: (1..=n).map(|s| chain.potential(s)).collect(),
        offdiag: chain.hoppings().to_vec(),
        corner: chain.closing_hopping(),
    }
}

pub fn eigendecompose(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let n = h.dim();
    if n == 0 {
        return Ok(Spectrum {
            energies: vec![],
            vectors: vec![],
        });
    }
    let (values, vectors) = match h.corner {
        None => ql::tridiagonal_eigen(&h.diag, &h.offdiag)?,
        Some(_) => jacobi::jacobi_eigen(h.to_dense(), n, JACOBI_TOL)?,
    };
    Ok(canonicalize(values, vectors, h.max_norm()))
}

/// Convenience: chain to spectrum.
pub fn chain_spectrum(chain: &EffectiveChain) -> Result<Spectrum> {
    eigendecompose(&build_hamiltonian(chain))
}

/// Bulk band edges of a dimerized chain: `(|t1 - t2|, t1 + t2)`.
pub fn band_edges(t1: f64, t2: f64) -> (f64, f64) {
    ((t1 - t2).abs(), t1 + t2)
}

/// 1-based site of maximal weight; ties resolve to the lowest site.
pub fn localization_center(psi: &[f64]) -> usize {
    let mut best = 0;
    let mut best_w = -1.0;
    for (j, x) in psi.iter().enumerate() {
        let w = x * x;
        if w > best_w {
            best = j;
            best_w = w;
        }
    }
    best + 1
}

fn canonicalize(values: Vec<f64>, vectors: Vec<Vec<f64>>, scale: f64) -> Spectrum {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let energies: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut v = vectors[i].clone();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            v
        })
        .collect();

    let tol = DEGENERACY_TOL * scale.max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < energies.len() {
        let mut end = start + 1;
        while end < energies.len() && energies[end] - energies[end - 1] <= tol {
            end += 1;
        }
        if end - start > 1 {
            localize_cluster(&mut vectors[start..end]);
        }
        start = end;
    }

    for v in &mut vectors {
        fix_sign(v);
    }
    Spectrum { energies, vectors }
}

/// Rotates a degenerate block into eigenstates of the position operator and
/// orders them by localization center.
fn localize_cluster(block: &mut [Vec<f64>]) {
    let k = block.len();
    let mut x = vec![0.0; k * k];
    for a in 0..k {
        for b in a..k {
            let xab: f64 = block[a]
                .iter()
                .zip(&block[b])
                .enumerate()
                .map(|(j, (u, w))| (j + 1) as f64 * u * w)
                .sum();
            x[a * k + b] = xab;
            x[b * k + a] = xab;
        }
    }
    let rotation = match jacobi::jacobi_eigen(x, k, 1e-14) {
        Ok((_, r)) => r,
        // the block is tiny and well conditioned; keep it as is if not
        Err(_) => return,
    };
    let n = block[0].len();
    let mut rotated: Vec<Vec<f64>> = rotation
        .iter()
        .map(|coeffs| {
            let mut w = vec![0.0; n];
            for (c, u) in coeffs.iter().zip(block.iter()) {
                for (wj, uj) in w.iter_mut().zip(u) {
                    *wj += c * uj;
                }
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            w.iter_mut().for_each(|x| *x /= norm);
            w
        })
        .collect();
    rotated.sort_by_key(|w| localization_center(w));
    for (slot, w) in block.iter_mut().zip(rotated) {
        *slot = w;
    }
}

fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() >= SIGN_THRESHOLD) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}
