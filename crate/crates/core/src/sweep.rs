//! Parameter sweeps: spectra over θ and φ, phase diagrams, the analytic
//! unilateral boundary and band-inversion tracking.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_chain, ClassifyParams, EdgeReport, Label};
use crate::engine;
use crate::error::{Error, Result};
use crate::model::{chain_from_theta, Boundary, EffectiveChain, Potentials, ThetaSpec};

/// Slack allowed when checking that an angle grid stays inside `[0, 2π]`.
const ANGLE_SLACK: f64 = 1e-9;

/// Evenly spaced grid with both ends included.
pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (points - 1) as f64;
            (0..points)
                .map(|k| if k + 1 == points { end } else { start + step * k as f64 })
                .collect()
        }
    }
}

/// `points` angles covering `[0, 2π]`.
pub fn full_turn(points: usize) -> Vec<f64> {
    linspace(0.0, TAU, points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::InvalidParameter(format!("{name} grid is empty")));
        }
        if let Some(w) = values.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(format!(
                "{name} grid is not strictly increasing near {}",
                w[0]
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} grid has non-finite values")));
        }
        Ok(Axis { name, values })
    }

    fn angle(name: &str, values: Vec<f64>) -> Result<Self> {
        let axis = Axis::new(name, values)?;
        let (lo, hi) = (axis.values[0], *axis.values.last().unwrap());
        if lo < -ANGLE_SLACK || hi > TAU + ANGLE_SLACK {
            return Err(Error::InvalidParameter(format!(
                "{name} grid leaves [0, 2pi]: [{lo}, {hi}]"
            )));
        }
        Ok(axis)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Spacing between the first two points, or 0 for a single point.
    pub fn step(&self) -> f64 {
        if self.values.len() > 1 {
            self.values[1] - self.values[0]
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub report: EdgeReport,
}

impl SweepPoint {
    pub fn energies(&self) -> Vec<f64> {
        self.report.energies()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSweep {
    pub n_sites: usize,
    pub axis: Axis,
    pub points: Vec<SweepPoint>,
}

impl SpectrumSweep {
    /// Energies of level `index` (1-based) along the axis.
    pub fn level(&self, index: usize) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| p.report.states[index - 1].energy)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &EdgeReport)> {
        self.points.iter().map(|p| (p.value, &p.report))
    }

    /// Largest `|E_m + E_{N+1-m}|` over the whole sweep.
    pub fn max_chiral_asymmetry(&self) -> f64 {
        self.points
            .iter()
            .map(|p| {
                let e = p.energies();
                let n = e.len();
                (0..n).map(|m| (e[m] + e[n - 1 - m]).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

fn run_sweep<F>(n_sites: usize, axis: Axis, params: &ClassifyParams, build: F) -> Result<SpectrumSweep>
where
    F: Fn(f64) -> Result<EffectiveChain> + Sync + Send,
{
    let name: &'static str = if axis.name == "phi" { "phi" } else { "theta" };
    let points = engine::try_par_map(&axis.values, |&x| {
        let chain = build(x).map_err(|e| e.at(name, x))?;
        let report = classify_chain(&chain, params).map_err(|e| e.at(name, x))?;
        Ok(SweepPoint { value: x, report })
    })?;
    Ok(SpectrumSweep {
        n_sites,
        axis,
        points,
    })
}

/// Spectrum and classification at every θ with fixed onsite potentials.
pub fn sweep_theta(
    n_sites: usize,
    potentials: &Potentials,
    boundary: Boundary,
    theta_grid: &[f64],
    params: &ClassifyParams,
) -> Result<SpectrumSweep> {
    let axis = Axis::angle("theta", theta_grid.to_vec())?;
    run_sweep(n_sites, axis, params, |theta| {
        chain_from_theta(n_sites, ThetaSpec::new(theta), potentials.clone(), boundary)
    })
}

/// Bilateral spectrum at fixed θ while φ moves the budget `v` between the ends.
pub fn sweep_phi(
    n_sites: usize,
    theta: f64,
    v: f64,
    phi_grid: &[f64],
    params: &ClassifyParams,
) -> Result<SpectrumSweep> {
    let axis = Axis::angle("phi", phi_grid.to_vec())?;
    run_sweep(n_sites, axis, params, |phi| {
        EffectiveChain::bilateral(n_sites, theta, v, phi)
    })
}

/// Analytic onset of the split-off end state for a single end potential.
pub fn boundary_unilateral(theta: f64) -> f64 {
    ThetaSpec::new(theta).t2()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    RegionI,
    RegionII,
    RegionIII,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::RegionI, Region::RegionII, Region::RegionIII];

    pub fn roman(&self) -> &'static str {
        match self {
            Region::RegionI => "I",
            Region::RegionII => "II",
            Region::RegionIII => "III",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region{}", self.roman())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagramKind {
    Unilateral,
    Bilateral,
}

impl DiagramKind {
    /// Human-readable meaning of each region.
    pub fn legend(&self, region: Region) -> &'static str {
        match (self, region) {
            (DiagramKind::Unilateral, Region::RegionI) => "topological edge states only",
            (DiagramKind::Unilateral, Region::RegionII) => "trivial",
            (DiagramKind::Unilateral, Region::RegionIII) => "nontopological edge states present",
            (DiagramKind::Bilateral, Region::RegionI) => "one nontopological, two topological",
            (DiagramKind::Bilateral, Region::RegionII) => "two nontopological, two topological",
            (DiagramKind::Bilateral, Region::RegionIII) => "two nontopological only",
        }
    }

    pub fn region(&self, report: &EdgeReport) -> Region {
        let top = report.counts.topological_edge;
        let nontop = report.counts.nontopological_edge;
        match self {
            DiagramKind::Unilateral => {
                if nontop > 0 {
                    Region::RegionIII
                } else if top > 0 {
                    Region::RegionI
                } else {
                    Region::RegionII
                }
            }
            DiagramKind::Bilateral => {
                if nontop <= 1 {
                    Region::RegionI
                } else if top > 0 {
                    Region::RegionII
                } else {
                    Region::RegionIII
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub kind: DiagramKind,
    pub n_sites: usize,
    pub x_axis: Axis,
    pub y_axis: Axis,
    /// `cells[ix][iy]`.
    pub cells: Vec<Vec<Region>>,
}

impl PhaseDiagram {
    pub fn at(&self, ix: usize, iy: usize) -> Region {
        self.cells[ix][iy]
    }

    /// Region of the grid cell nearest to `(x, y)`.
    pub fn nearest(&self, x: f64, y: f64) -> Region {
        let pick = |axis: &Axis, v: f64| {
            axis.values
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - v).abs().total_cmp(&(b.1 - v).abs()))
                .map(|(i, _)| i)
                .unwrap()
        };
        self.at(pick(&self.x_axis, x), pick(&self.y_axis, y))
    }

    pub fn count(&self, region: Region) -> usize {
        self.cells.iter().flatten().filter(|&&r| r == region).count()
    }
}

fn diagram<F>(
    kind: DiagramKind,
    n_sites: usize,
    x_axis: Axis,
    y_axis: Axis,
    params: &ClassifyParams,
    build: F,
) -> Result<PhaseDiagram>
where
    F: Fn(f64, f64) -> Result<EffectiveChain> + Sync + Send,
{
    let ny = y_axis.len();
    let jobs: Vec<(usize, usize)> = (0..x_axis.len())
        .flat_map(|ix| (0..ny).map(move |iy| (ix, iy)))
        .collect();
    let flat = engine::try_par_map(&jobs, |&(ix, iy)| {
        let (x, y) = (x_axis.values[ix], y_axis.values[iy]);
        let chain = build(x, y).map_err(|e| e.at("theta", y))?;
        let report = classify_chain(&chain, params).map_err(|e| e.at("theta", y))?;
        Ok(kind.region(&report))
    })?;
    let cells = flat.chunks(ny.max(1)).map(<[Region]>::to_vec).collect();
    Ok(PhaseDiagram {
        kind,
        n_sites,
        x_axis,
        y_axis,
        cells,
    })
}

/// Region map over the end potential `V1` (x) and θ (y).
pub fn phase_diagram_unilateral(
    v_grid: &[f64],
    theta_grid: &[f64],
    n_sites: usize,
    params: &ClassifyParams,
) -> Result<PhaseDiagram> {
    if v_grid.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("V grid must be nonnegative".into()));
    }
    let x = Axis::new("v1", v_grid.to_vec())?;
    let y = Axis::angle("theta", theta_grid.to_vec())?;
    diagram(DiagramKind::Unilateral, n_sites, x, y, params, |v, theta| {
        EffectiveChain::unilateral(n_sites, theta, v)
    })
}

/// Region map over φ (x) and θ (y) at fixed potential budget `v`.
pub fn phase_diagram_bilateral(
    phi_grid: &[f64],
    theta_grid: &[f64],
    v: f64,
    n_sites: usize,
    params: &ClassifyParams,
) -> Result<PhaseDiagram> {
    let x = Axis::angle("phi", phi_grid.to_vec())?;
    let y = Axis::angle("theta", theta_grid.to_vec())?;
    diagram(DiagramKind::Bilateral, n_sites, x, y, params, |phi, theta| {
        EffectiveChain::bilateral(n_sites, theta, v, phi)
    })
}

/// Smallest `V1` on the grid whose spectrum holds a nontopological edge state.
pub fn nontopological_onset(
    theta: f64,
    v_grid: &[f64],
    n_sites: usize,
    params: &ClassifyParams,
) -> Result<Option<f64>> {
    let present = engine::try_par_map(v_grid, |&v| {
        let chain = EffectiveChain::unilateral(n_sites, theta, v)?;
        let report = classify_chain(&chain, params).map_err(|e| e.at("v1", v))?;
        Ok(report.has(Label::NontopologicalEdge))
    })?;
    Ok(v_grid
        .iter()
        .zip(present)
        .find(|(_, p)| *p)
        .map(|(&v, _)| v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    InGap,
    OutsideBand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// The four distinguished levels, named by the usual figure colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRole {
    Green,
    Red,
    Blue,
    Purple,
}

impl LevelRole {
    pub const ALL: [LevelRole; 4] = [
        LevelRole::Green,
        LevelRole::Red,
        LevelRole::Purple,
        LevelRole::Blue,
    ];

    pub fn of(kind: LevelKind, side: Side) -> Self {
        match (kind, side) {
            (LevelKind::InGap, Side::Left) => LevelRole::Green,
            (LevelKind::InGap, Side::Right) => LevelRole::Red,
            (LevelKind::OutsideBand, Side::Left) => LevelRole::Blue,
            (LevelKind::OutsideBand, Side::Right) => LevelRole::Purple,
        }
    }

    pub fn kind(&self) -> LevelKind {
        match self {
            LevelRole::Green | LevelRole::Red => LevelKind::InGap,
            LevelRole::Blue | LevelRole::Purple => LevelKind::OutsideBand,
        }
    }

    pub fn side(&self) -> Side {
        match self {
            LevelRole::Green | LevelRole::Blue => Side::Left,
            LevelRole::Red | LevelRole::Purple => Side::Right,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LevelRole::Green => "green",
            LevelRole::Red => "red",
            LevelRole::Blue => "blue",
            LevelRole::Purple => "purple",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSample {
    pub index: usize,
    pub energy: f64,
    pub center: usize,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipEvent {
    pub phi: f64,
    pub from: usize,
    pub to: usize,
    /// Change across the seam of a periodic φ grid.
    pub wrap: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackedLevel {
    pub role: LevelRole,
    /// One entry per φ point; `None` where the level is absent or bulk-like.
    pub samples: Vec<Option<LevelSample>>,
    /// Consecutive distinct indices, closed cyclically on a full-turn grid.
    pub sequence: Vec<usize>,
    pub events: Vec<FlipEvent>,
}

impl TrackedLevel {
    pub fn indices(&self) -> Vec<Option<usize>> {
        self.samples.iter().map(|s| s.map(|s| s.index)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionTrace {
    pub n_sites: usize,
    pub v: f64,
    pub theta_probe: f64,
    pub phi_grid: Vec<f64>,
    pub levels: Vec<TrackedLevel>,
}

impl InversionTrace {
    pub fn level(&self, role: LevelRole) -> &TrackedLevel {
        self.levels.iter().find(|l| l.role == role).unwrap()
    }
}

fn median_spacing(energies: &[f64]) -> f64 {
    let mut gaps: Vec<f64> = energies.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.is_empty() {
        return 0.0;
    }
    gaps.sort_by(f64::total_cmp);
    gaps[gaps.len() / 2]
}

fn role_samples(report: &EdgeReport, n_sites: usize) -> Result<[Option<LevelSample>; 4], LevelRole> {
    let (inner, _) = report.gap;
    let mut out: [Option<LevelSample>; 4] = [None; 4];
    for s in report.states.iter().filter(|s| s.label != Label::Bulk) {
        let kind = if s.energy.abs() < inner {
            LevelKind::InGap
        } else {
            LevelKind::OutsideBand
        };
        let side = if 2 * s.center <= n_sites + 1 { Side::Left } else { Side::Right };
        let role = LevelRole::of(kind, side);
        let slot = LevelRole::ALL.iter().position(|&r| r == role).unwrap();
        if out[slot].is_some() {
            return Err(role);
        }
        out[slot] = Some(LevelSample {
            index: s.index,
            energy: s.energy,
            center: s.center,
            label: s.label,
        });
    }
    Ok(out)
}

/// Follows the two in-gap and two outside-band end levels across φ.
///
/// Each level is identified by its energy family (in-gap or beyond the band)
/// and by the half of the chain it lives in. Between neighboring φ points a
/// level may move by at most three median level spacings; a larger jump or
/// two candidates for the same role abort with [`Error::TrackingLost`].
pub fn trace_band_inversion(
    phi_grid: &[f64],
    v: f64,
    n_sites: usize,
    theta_probe: f64,
    params: &ClassifyParams,
) -> Result<InversionTrace> {
    let sweep = sweep_phi(n_sites, theta_probe, v, phi_grid, params)?;
    let phis = &sweep.axis.values;
    let periodic = phis.len() > 2
        && phis[0].abs() < ANGLE_SLACK
        && (phis[phis.len() - 1] - TAU).abs() < ANGLE_SLACK;

    let mut per_role: Vec<Vec<Option<LevelSample>>> = vec![Vec::with_capacity(phis.len()); 4];
    let mut spacing = Vec::with_capacity(phis.len());
    for (k, point) in sweep.points.iter().enumerate() {
        let samples = role_samples(&point.report, n_sites).map_err(|role| {
            let from = if k > 0 { phis[k - 1] } else { phis[k] };
            Error::TrackingLost {
                level: role.name().to_string(),
                from,
                to: phis[k],
            }
        })?;
        for (slot, s) in samples.into_iter().enumerate() {
            per_role[slot].push(s);
        }
        spacing.push(median_spacing(&point.energies()));
    }

    let mut levels = Vec::with_capacity(4);
    for (slot, samples) in per_role.into_iter().enumerate() {
        let role = LevelRole::ALL[slot];
        for k in 1..samples.len() {
            if let (Some(a), Some(b)) = (samples[k - 1], samples[k]) {
                let limit = 3.0 * spacing[k - 1].max(spacing[k]);
                if (b.energy - a.energy).abs() > limit {
                    return Err(Error::TrackingLost {
                        level: role.name().to_string(),
                        from: phis[k - 1],
                        to: phis[k],
                    });
                }
            }
        }

        // the endpoint 2π duplicates 0 on a full turn
        let usable = if periodic { samples.len() - 1 } else { samples.len() };
        let observed: Vec<(usize, usize)> = samples[..usable]
            .iter()
            .enumerate()
            .filter_map(|(k, s)| s.map(|s| (k, s.index)))
            .collect();

        let mut sequence = Vec::new();
        let mut events = Vec::new();
        let mut prev: Option<(usize, usize)> = None;
        for &(k, index) in &observed {
            match prev {
                None => sequence.push(index),
                Some((pk, pi)) if pi != index => {
                    sequence.push(index);
                    events.push(FlipEvent {
                        phi: 0.5 * (phis[pk] + phis[k]),
                        from: pi,
                        to: index,
                        wrap: false,
                    });
                }
                _ => {}
            }
            prev = Some((k, index));
        }
        if periodic && sequence.len() > 1 {
            let (first, last) = (sequence[0], *sequence.last().unwrap());
            if first != last {
                sequence.push(first);
                events.push(FlipEvent {
                    phi: TAU,
                    from: last,
                    to: first,
                    wrap: true,
                });
            }
        }

        levels.push(TrackedLevel {
            role,
            samples,
            sequence,
            events,
        });
    }

    Ok(InversionTrace {
        n_sites,
        v,
        theta_probe,
        phi_grid: phis.clone(),
        levels,
    })
}

/// Probe angle deep in the trivial sector where end levels are well separated.
pub const DEFAULT_THETA_PROBE: f64 = 0.01 * PI;
