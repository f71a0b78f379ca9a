//! Labelling eigenstates as bulk, edge or bound states.
//!
//! The decision is operational: a state must be localized (IPR above
//! [`ClassifyParams::loc_threshold`]) and then its energy decides the family.
//!
//! * Inside the bulk gap it is a topological edge state when it sits within
//!   `edge_window` sites of a chain end or of a decoupling cut, otherwise a
//!   bound state.
//! * Beyond the band top it is a nontopological edge state when its center
//!   carries an onsite potential, otherwise a bound state.
//! * Localized states at band energies stay bulk.
//!
//! A cut is a site whose potential exceeds the band top: it effectively
//! removes itself from the chain and creates two new ends.

use serde::{Deserialize, Serialize};

use crate::engine;
use crate::error::{Error, Result};
use crate::model::{Boundary, EffectiveChain};
use crate::spectra::{band_edges, chain_spectrum, localization_center, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyParams {
    /// Minimum IPR for a state to count as localized.
    pub loc_threshold: f64,
    /// In-gap margin as a fraction of the band top: `|E| < inner - gap_margin * outer`.
    pub gap_margin: f64,
    /// Out-of-band margin as a fraction of the band top: `|E| > outer (1 + band_margin)`.
    pub band_margin: f64,
    /// Sites from a chain end or a cut that still count as an edge.
    pub edge_window: usize,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            loc_threshold: 0.01,
            gap_margin: 1e-3,
            band_margin: 1e-6,
            edge_window: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Bulk,
    TopologicalEdge,
    NontopologicalEdge,
    BoundState,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Bulk => "bulk",
            Label::TopologicalEdge => "topological_edge",
            Label::NontopologicalEdge => "nontopological_edge",
            Label::BoundState => "bound_state",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateClassification {
    /// 1-based rank in the ascending spectrum.
    pub index: usize,
    pub energy: f64,
    pub label: Label,
    /// 1-based site of maximal weight.
    pub center: usize,
    pub ipr: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub bulk: usize,
    pub topological_edge: usize,
    pub nontopological_edge: usize,
    pub bound_state: usize,
}

impl LabelCounts {
    pub fn get(&self, label: Label) -> usize {
        match label {
            Label::Bulk => self.bulk,
            Label::TopologicalEdge => self.topological_edge,
            Label::NontopologicalEdge => self.nontopological_edge,
            Label::BoundState => self.bound_state,
        }
    }

    fn bump(&mut self, label: Label) {
        match label {
            Label::Bulk => self.bulk += 1,
            Label::TopologicalEdge => self.topological_edge += 1,
            Label::NontopologicalEdge => self.nontopological_edge += 1,
            Label::BoundState => self.bound_state += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.bulk + self.topological_edge + self.nontopological_edge + self.bound_state
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub states: Vec<StateClassification>,
    /// `(inner, outer)` band edges the labels were computed against.
    pub gap: (f64, f64),
    pub counts: LabelCounts,
}

impl EdgeReport {
    pub fn with_label(&self, label: Label) -> impl Iterator<Item = &StateClassification> {
        self.states.iter().filter(move |s| s.label == label)
    }

    pub fn has(&self, label: Label) -> bool {
        self.counts.get(label) > 0
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }
}

/// Inverse participation ratio `Σ ψ_j^4` of a unit vector.
pub fn ipr(psi: &[f64]) -> Result<f64> {
    let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= 1e-8) {
        return Err(Error::NotNormalized { norm });
    }
    Ok(psi.iter().map(|x| x.powi(4)).sum())
}

/// Sites whose potential exceeds the band top.
pub fn decoupling_cuts(chain: &EffectiveChain, outer: f64) -> Vec<usize> {
    chain
        .potentials()
        .iter()
        .filter(|(_, v)| v.abs() > outer)
        .map(|(&s, _)| s)
        .collect()
}

/// Band edges of the chain's `(t1, t2)` dimerization.
pub fn chain_band_edges(chain: &EffectiveChain) -> (f64, f64) {
    let (t1, t2) = chain.dimerization();
    band_edges(t1, t2)
}

fn near_edge(center: usize, chain: &EffectiveChain, cuts: &[usize], window: usize) -> bool {
    let n = chain.n_sites();
    let near_end = chain.boundary() == Boundary::Open
        && (center <= window || center + window > n);
    near_end
        || cuts
            .iter()
            .any(|&s| s != center && s.abs_diff(center) <= window)
}

/// Labels one eigenstate. `index` is its 1-based rank in the spectrum.
pub fn classify_state(
    index: usize,
    energy: f64,
    psi: &[f64],
    edges: (f64, f64),
    chain: &EffectiveChain,
    params: &ClassifyParams,
) -> Result<StateClassification> {
    let ipr = ipr(psi)?;
    let center = localization_center(psi);
    let (inner, outer) = edges;
    let cuts = decoupling_cuts(chain, outer);
    let e = energy.abs();

    let label = if ipr < params.loc_threshold {
        Label::Bulk
    } else if e < inner - params.gap_margin * outer {
        if near_edge(center, chain, &cuts, params.edge_window) {
            Label::TopologicalEdge
        } else {
            Label::BoundState
        }
    } else if e > outer * (1.0 + params.band_margin) {
        if chain.potential(center) != 0.0 {
            Label::NontopologicalEdge
        } else {
            Label::BoundState
        }
    } else {
        Label::Bulk
    };

    Ok(StateClassification {
        index,
        energy,
        label,
        center,
        ipr,
    })
}

pub fn classify_spectrum(
    spectrum: &Spectrum,
    chain: &EffectiveChain,
    params: &ClassifyParams,
) -> Result<EdgeReport> {
    let edges = chain_band_edges(chain);
    let mut counts = LabelCounts::default();
    let states = spectrum
        .energies
        .iter()
        .zip(&spectrum.vectors)
        .enumerate()
        .map(|(m, (&e, v))| {
            let s = classify_state(m + 1, e, v, edges, chain, params)?;
            counts.bump(s.label);
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EdgeReport {
        states,
        gap: edges,
        counts,
    })
}

/// Diagonalize and classify in one go.
pub fn classify_chain(chain: &EffectiveChain, params: &ClassifyParams) -> Result<EdgeReport> {
    classify_spectrum(&chain_spectrum(chain)?, chain, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InGapWitness {
    pub theta: f64,
    pub index: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InGapScan {
    /// True when every grid angle hosts an in-gap topological edge level.
    pub exists: bool,
    /// One row per angle that has such a level (the one closest to zero).
    pub witnesses: Vec<InGapWitness>,
}

/// Scans a potential `v1` on site 1 over the hopping angle and checks for an
/// in-gap topological level at every grid point.
pub fn ingap_level_exists_over_theta(
    n_sites: usize,
    v1: f64,
    theta_grid: &[f64],
    params: &ClassifyParams,
) -> Result<InGapScan> {
    let per_point = engine::try_par_map(theta_grid, |&theta| {
        let chain = EffectiveChain::unilateral(n_sites, theta, v1)?;
        let report = classify_chain(&chain, params).map_err(|e| e.at("theta", theta))?;
        Ok(report
            .with_label(Label::TopologicalEdge)
            .min_by(|a, b| a.energy.abs().total_cmp(&b.energy.abs()))
            .map(|s| InGapWitness {
                theta,
                index: s.index,
                energy: s.energy,
            }))
    })?;
    let exists = !theta_grid.is_empty() && per_point.iter().all(Option::is_some);
    Ok(InGapScan {
        exists,
        witnesses: per_point.into_iter().flatten().collect(),
    })
}
