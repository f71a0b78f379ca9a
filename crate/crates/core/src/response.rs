//! Steady-state photon numbers of a weakly driven, uniformly damped chain.
//!
//! With a coherent drive `Ω` on one resonator at frequency `ω` and linewidth
//! `κ`, the linear response is the resolvent
//! `a = Ω (ω - H + iκ/2)^{-1} e_site`. It is evaluated here as a sum over
//! eigenmodes, with a dense complex solve as an independent cross-check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine;
use crate::error::{Error, Result};
use crate::spectra::{HamiltonianMatrix, Spectrum};

pub const DEFAULT_KAPPA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    /// 1-based driven resonator.
    pub site: usize,
    /// Drive frequency in the rotating frame, same units as the energies.
    pub omega_d: f64,
    pub amplitude: f64,
    pub kappa: f64,
}

impl DriveSpec {
    pub fn new(site: usize, omega_d: f64) -> Self {
        DriveSpec {
            site,
            omega_d,
            amplitude: 1.0,
            kappa: DEFAULT_KAPPA,
        }
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        if self.site == 0 || self.site > n_sites {
            return Err(Error::BadSite {
                site: self.site,
                n_sites,
            });
        }
        if !self.omega_d.is_finite() || !self.amplitude.is_finite() {
            return Err(Error::InvalidParameter("drive must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseProfile {
    pub photon_numbers: Vec<f64>,
    /// 1-based site of the largest photon number.
    pub peak_site: usize,
}

impl ResponseProfile {
    fn from_amplitudes(a: &[Complex64]) -> Self {
        let photon_numbers: Vec<f64> = a.iter().map(|z| z.norm_sqr()).collect();
        let peak_site = photon_numbers
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (j, &n)| {
                if n > best.1 {
                    (j, n)
                } else {
                    best
                }
            })
            .0
            + 1;
        ResponseProfile {
            photon_numbers,
            peak_site,
        }
    }

    pub fn total(&self) -> f64 {
        self.photon_numbers.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.photon_numbers[self.peak_site - 1]
    }
}

/// Complex field amplitudes from the eigenmode sum.
pub fn amplitudes(spectrum: &Spectrum, drive: &DriveSpec) -> Result<Vec<Complex64>> {
    let n = spectrum.len();
    drive.validate(n)?;
    let s = drive.site - 1;
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    for (e, v) in spectrum.energies.iter().zip(&spectrum.vectors) {
        let w = drive.amplitude * v[s] / Complex64::new(drive.omega_d - e, 0.5 * drive.kappa);
        for (aj, vj) in a.iter_mut().zip(v) {
            *aj += w * vj;
        }
    }
    Ok(a)
}

/// Complex field amplitudes from a direct solve of `(ω - H + iκ/2) a = Ω e_site`.
pub fn amplitudes_direct(h: &HamiltonianMatrix, drive: &DriveSpec) -> Result<Vec<Complex64>> {
    let n = h.dim();
    drive.validate(n)?;
    let z = Complex64::new(drive.omega_d, 0.5 * drive.kappa);
    let mut m: Vec<Complex64> = h.to_dense().into_iter().map(|x| Complex64::new(-x, 0.0)).collect();
    for i in 0..n {
        m[i * n + i] += z;
    }
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    b[drive.site - 1] = Complex64::new(drive.amplitude, 0.0);
    lu_solve(m, n, b)
}

/// Gaussian elimination with partial pivoting on a row-major matrix.
fn lu_solve(mut m: Vec<Complex64>, n: usize, mut b: Vec<Complex64>) -> Result<Vec<Complex64>> {
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].norm().total_cmp(&m[j * n + col].norm()))
            .unwrap();
        if m[pivot * n + col].norm() == 0.0 {
            return Err(Error::InvalidParameter("singular response matrix".into()));
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let d = m[col * n + col];
        for r in col + 1..n {
            let f = m[r * n + col] / d;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let t = m[col * n + k];
                m[r * n + k] -= f * t;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    for r in (0..n).rev() {
        let mut acc = b[r];
        for k in r + 1..n {
            acc -= m[r * n + k] * b[k];
        }
        b[r] = acc / m[r * n + r];
    }
    Ok(b)
}

pub fn steady_state_response(spectrum: &Spectrum, drive: &DriveSpec) -> Result<ResponseProfile> {
    Ok(ResponseProfile::from_amplitudes(&amplitudes(spectrum, drive)?))
}

/// Same as [`steady_state_response`] via the direct linear solve.
pub fn steady_state_response_direct(
    h: &HamiltonianMatrix,
    drive: &DriveSpec,
) -> Result<ResponseProfile> {
    Ok(ResponseProfile::from_amplitudes(&amplitudes_direct(h, drive)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub omega: f64,
    pub profile: ResponseProfile,
}

pub fn frequency_scan(
    spectrum: &Spectrum,
    site: usize,
    omega_grid: &[f64],
    amplitude: f64,
    kappa: f64,
) -> Result<Vec<ScanPoint>> {
    if omega_grid.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidParameter("frequency grid must be finite".into()));
    }
    engine::try_par_map(omega_grid, |&omega| {
        let drive = DriveSpec {
            site,
            omega_d: omega,
            amplitude,
            kappa,
        };
        Ok(ScanPoint {
            omega,
            profile: steady_state_response(spectrum, &drive)?,
        })
    })
}

/// Frequencies where the total photon number has a strict local maximum.
pub fn total_response_peaks(scan: &[ScanPoint]) -> Vec<f64> {
    let totals: Vec<f64> = scan.iter().map(|p| p.profile.total()).collect();
    (1..totals.len().saturating_sub(1))
        .filter(|&k| totals[k] > totals[k - 1] && totals[k] >= totals[k + 1])
        .map(|k| scan[k].omega)
        .collect()
}
