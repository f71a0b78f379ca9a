//! Effective photon-hopping chains.
//!
//! Chains come from two places: the dispersive mapping of a resonator array
//! with site qubits and coupler qubits ([`effective_from_physical`]), or the
//! dimerized `theta` parametrization used throughout the sweeps
//! ([`chain_from_theta`]). Energies are in units of the bare coupling `g0`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse onsite potentials keyed by 1-based site index.
pub type Potentials = BTreeMap<usize, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Open => f.write_str("open"),
            Boundary::Periodic => f.write_str("periodic"),
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::InvalidParameter(format!(
                "boundary must be `open` or `periodic`, got `{other}`"
            ))),
        }
    }
}

/// Circuit parameters of the resonator array before the dispersive
/// elimination of the qubits.
///
/// `site_couplings[n]` is the resonator–qubit coupling inside module `n+1`,
/// `coupler_couplings[n]` the coupling of coupler qubit `n+1` to its
/// resonators. All frequencies share the unit of `g0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub n_sites: usize,
    pub omega_c: f64,
    pub omega_d: f64,
    pub omega_q: f64,
    pub omega_coupler: f64,
    pub site_couplings: Vec<f64>,
    pub coupler_couplings: Vec<f64>,
}

impl PhysicalParams {
    /// Parameters given directly as detunings from the drive (`omega_d = 0`).
    pub fn from_detunings(
        n_sites: usize,
        delta_c: f64,
        delta_q: f64,
        delta_coupler: f64,
        site_couplings: Vec<f64>,
        coupler_couplings: Vec<f64>,
    ) -> Self {
        PhysicalParams {
            n_sites,
            omega_c: delta_c,
            omega_d: 0.0,
            omega_q: delta_q,
            omega_coupler: delta_coupler,
            site_couplings,
            coupler_couplings,
        }
    }

    pub fn delta_c(&self) -> f64 {
        self.omega_c - self.omega_d
    }

    pub fn delta_q(&self) -> f64 {
        self.omega_q - self.omega_d
    }

    pub fn delta_coupler(&self) -> f64 {
        self.omega_coupler - self.omega_d
    }

    fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_sites must be at least 2, got {}",
                self.n_sites
            )));
        }
        if self.delta_q() == 0.0 {
            return Err(Error::ZeroDetuning { name: "delta_q" });
        }
        if self.delta_coupler() == 0.0 {
            return Err(Error::ZeroDetuning {
                name: "delta_coupler",
            });
        }
        for (name, arr) in [
            ("site_couplings", &self.site_couplings),
            ("coupler_couplings", &self.coupler_couplings),
        ] {
            if arr.len() < self.n_sites {
                return Err(Error::LengthMismatch {
                    name,
                    expected: self.n_sites,
                    got: arr.len(),
                });
            }
        }
        Ok(())
    }

    /// Residual `g_n^2/Δq + 2 G_n^2/ΔQ` of the interior onsite shift.
    fn interior_residual(&self, n: usize) -> f64 {
        let g = self.site_couplings[n - 1];
        let gc = self.coupler_couplings[n - 1];
        g * g / self.delta_q() + 2.0 * gc * gc / self.delta_coupler()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MappingOptions {
    /// Measure onsite energies from the resonator detuning `Δc`.
    pub subtract_zero_point: bool,
}

impl Default for MappingOptions {
    fn default() -> Self {
        MappingOptions {
            subtract_zero_point: true,
        }
    }
}

/// Hopping angle of the dimerized chain: `t1 = base (1 + cos θ / 2)` on odd
/// bonds, `t2 = base (1 - cos θ / 2)` on even bonds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaSpec {
    pub theta: f64,
    pub base: f64,
}

impl ThetaSpec {
    pub fn new(theta: f64) -> Self {
        ThetaSpec { theta, base: 1.0 }
    }

    pub fn t1(&self) -> f64 {
        self.base * (1.0 + 0.5 * self.theta.cos())
    }

    pub fn t2(&self) -> f64 {
        self.base * (1.0 - 0.5 * self.theta.cos())
    }
}

/// Single-excitation photon chain: bonds, sparse onsite potentials and the
/// optional bond closing the ring.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChain {
    n_sites: usize,
    hoppings: Vec<f64>,
    closing: Option<f64>,
    potentials: Potentials,
}

impl EffectiveChain {
    /// Open chain with `hoppings[j-1]` joining sites `j` and `j+1`.
    pub fn open(hoppings: Vec<f64>, potentials: Potentials) -> Result<Self> {
        Self::new(hoppings, None, potentials)
    }

    /// Ring: `closing` joins site `N` back to site 1.
    pub fn periodic(hoppings: Vec<f64>, closing: f64, potentials: Potentials) -> Result<Self> {
        Self::new(hoppings, Some(closing), potentials)
    }

    fn new(hoppings: Vec<f64>, closing: Option<f64>, potentials: Potentials) -> Result<Self> {
        let n_sites = hoppings.len() + 1;
        if hoppings.iter().chain(closing.iter()).any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("hoppings must be finite".into()));
        }
        for (&site, &value) in &potentials {
            if site == 0 || site > n_sites {
                return Err(Error::BadSite { site, n_sites });
            }
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "potential at site {site} is not finite"
                )));
            }
        }
        Ok(EffectiveChain {
            n_sites,
            hoppings,
            closing,
            potentials,
        })
    }

    /// Dimerized chain at angle `theta` with potential `v1` on site 1.
    pub fn unilateral(n_sites: usize, theta: f64, v1: f64) -> Result<Self> {
        let mut potentials = Potentials::new();
        if v1 != 0.0 {
            potentials.insert(1, v1);
        }
        chain_from_theta(n_sites, ThetaSpec::new(theta), potentials, Boundary::Open)
    }

    /// Dimerized chain with `V cos φ` on site 1 and `V sin φ` on site `N`.
    pub fn bilateral(n_sites: usize, theta: f64, v: f64, phi: f64) -> Result<Self> {
        let (v1, v2) = bilateral_potentials(v, phi);
        let mut potentials = Potentials::new();
        if v1 != 0.0 {
            potentials.insert(1, v1);
        }
        if v2 != 0.0 {
            potentials.insert(n_sites, v2);
        }
        chain_from_theta(n_sites, ThetaSpec::new(theta), potentials, Boundary::Open)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn hoppings(&self) -> &[f64] {
        &self.hoppings
    }

    pub fn closing_hopping(&self) -> Option<f64> {
        self.closing
    }

    pub fn boundary(&self) -> Boundary {
        if self.closing.is_some() {
            Boundary::Periodic
        } else {
            Boundary::Open
        }
    }

    pub fn potentials(&self) -> &Potentials {
        &self.potentials
    }

    /// Onsite energy at a 1-based site, zero when none is set.
    pub fn potential(&self, site: usize) -> f64 {
        self.potentials.get(&site).copied().unwrap_or(0.0)
    }

    /// Odd- and even-bond magnitudes `(t1, t2)` taken from the first two
    /// bonds. Exact for dimerized chains; an approximation otherwise.
    pub fn dimerization(&self) -> (f64, f64) {
        let t1 = self.hoppings.first().map_or(0.0, |t| t.abs());
        let t2 = self.hoppings.get(1).map_or(0.0, |t| t.abs());
        (t1, t2)
    }

    /// Spatially reversed chain: site `j` becomes `N + 1 - j`.
    pub fn reversed(&self) -> Self {
        let n = self.n_sites;
        EffectiveChain {
            n_sites: n,
            hoppings: self.hoppings.iter().rev().copied().collect(),
            closing: self.closing,
            potentials: self
                .potentials
                .iter()
                .map(|(&s, &v)| (n + 1 - s, v))
                .collect(),
        }
    }

    /// Open chain made of sites `first..=last`, renumbered from 1.
    pub fn subchain(&self, first: usize, last: usize) -> Result<Self> {
        if first == 0 || last > self.n_sites || first > last {
            return Err(Error::InvalidParameter(format!(
                "subchain {first}..={last} outside 1..={}",
                self.n_sites
            )));
        }
        let hoppings = self.hoppings[first - 1..last - 1].to_vec();
        let potentials = self
            .potentials
            .range(first..=last)
            .map(|(&s, &v)| (s + 1 - first, v))
            .collect();
        EffectiveChain::open(hoppings, potentials)
    }

    /// Same chain with every onsite energy replaced.
    pub fn with_potentials(&self, potentials: Potentials) -> Result<Self> {
        Self::new(self.hoppings.clone(), self.closing, potentials)
    }
}

/// Dispersive mapping from circuit parameters to the photon chain.
///
/// Open chains use the end-site shifts `-g^2/Δq - G^2/ΔQ` (one coupler
/// neighbour) and `-g^2/Δq - 2G^2/ΔQ` in the interior. Rings treat every
/// site as interior and close with `-G_N G_1/ΔQ`.
pub fn effective_from_physical(
    p: &PhysicalParams,
    boundary: Boundary,
    opts: MappingOptions,
) -> Result<EffectiveChain> {
    p.validate()?;
    let n = p.n_sites;
    let dq = p.delta_q();
    let dc = p.delta_coupler();
    let g = &p.site_couplings;
    let gc = &p.coupler_couplings;
    let zero = if opts.subtract_zero_point {
        0.0
    } else {
        p.delta_c()
    };

    let hoppings: Vec<f64> = (0..n - 1).map(|j| -gc[j] * gc[j + 1] / dc).collect();

    let mut potentials = Potentials::new();
    for site in 1..=n {
        let i = site - 1;
        let coupler_factor = match boundary {
            Boundary::Open if site == 1 || site == n => 1.0,
            _ => 2.0,
        };
        let qubit = g[i] * g[i] / dq;
        let coupler = coupler_factor * gc[i] * gc[i] / dc;
        let value = zero - qubit - coupler;
        // cancelled shifts leave rounding noise behind
        let scale = zero.abs() + qubit.abs() + coupler.abs();
        if value.abs() > 8.0 * f64::EPSILON * scale {
            potentials.insert(site, value);
        }
    }

    match boundary {
        Boundary::Open => EffectiveChain::open(hoppings, potentials),
        Boundary::Periodic => {
            let closing = -gc[n - 1] * gc[0] / dc;
            EffectiveChain::periodic(hoppings, closing, potentials)
        }
    }
}

/// Interior sites `2..N-1` where `|g^2/Δq + 2G^2/ΔQ| > tol`.
///
/// An empty result means the interior onsite shifts cancel and the chain
/// reduces to a bare dimerized chain with end potentials only.
pub fn check_cancellation(p: &PhysicalParams, tol: f64) -> Result<Vec<usize>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be > 0, got {tol}")));
    }
    p.validate()?;
    Ok((2..p.n_sites)
        .filter(|&n| p.interior_residual(n).abs() > tol)
        .collect())
}

/// Dimerized chain: odd bonds get `t1(θ)`, even bonds `t2(θ)`.
pub fn chain_from_theta(
    n_sites: usize,
    spec: ThetaSpec,
    potentials: Potentials,
    boundary: Boundary,
) -> Result<EffectiveChain> {
    if n_sites < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_sites must be at least 2, got {n_sites}"
        )));
    }
    let (t1, t2) = (spec.t1(), spec.t2());
    let bond = |j: usize| if j % 2 == 1 { t1 } else { t2 };
    let hoppings = (1..n_sites).map(bond).collect();
    match boundary {
        Boundary::Open => EffectiveChain::open(hoppings, potentials),
        Boundary::Periodic => EffectiveChain::periodic(hoppings, bond(n_sites), potentials),
    }
}

/// Split a potential budget between the two chain ends:
/// `(V cos φ, V sin φ)`. Components below rounding level are set to zero.
pub fn bilateral_potentials(v: f64, phi: f64) -> (f64, f64) {
    let snap = |x: f64| {
        if x.abs() <= 4.0 * f64::EPSILON * v.abs() {
            0.0
        } else {
            x
        }
    };
    (snap(v * phi.cos()), snap(v * phi.sin()))
}

/// One onsite potential in a serialized chain description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SitePotential {
    pub site: usize,
    pub value: f64,
}

/// Serialized chain description. Either `theta` (dimerized chain) or an
/// explicit `hoppings` list must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n: usize,
    pub boundary: Boundary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hoppings: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closing_hopping: Option<f64>,
    #[serde(default)]
    pub potentials: Vec<SitePotential>,
}

impl ChainSpec {
    pub fn from_chain(chain: &EffectiveChain) -> Self {
        ChainSpec {
            n: chain.n_sites(),
            boundary: chain.boundary(),
            theta: None,
            hoppings: Some(chain.hoppings().to_vec()),
            closing_hopping: chain.closing_hopping(),
            potentials: chain
                .potentials()
                .iter()
                .map(|(&site, &value)| SitePotential { site, value })
                .collect(),
        }
    }

    pub fn to_chain(&self) -> Result<EffectiveChain> {
        let mut potentials = Potentials::new();
        for p in &self.potentials {
            *potentials.entry(p.site).or_insert(0.0) += p.value;
        }
        match (&self.hoppings, self.theta) {
            (Some(h), _) => {
                if h.len() + 1 != self.n {
                    return Err(Error::LengthMismatch {
                        name: "hoppings",
                        expected: self.n.saturating_sub(1),
                        got: h.len(),
                    });
                }
                match self.boundary {
                    Boundary::Open => EffectiveChain::open(h.clone(), potentials),
                    Boundary::Periodic => {
                        let closing = self.closing_hopping.ok_or_else(|| {
                            Error::InvalidParameter("periodic chain needs closing_hopping".into())
                        })?;
                        EffectiveChain::periodic(h.clone(), closing, potentials)
                    }
                }
            }
            (None, Some(theta)) => {
                chain_from_theta(self.n, ThetaSpec::new(theta), potentials, self.boundary)
            }
            (None, None) => Err(Error::InvalidParameter(
                "chain spec needs either `theta` or `hoppings`".into(),
            )),
        }
    }
}
