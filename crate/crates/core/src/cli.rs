//! Command-line front end.
//!
//! [`parse_args`] turns argv into an [`Invocation`], [`execute`] runs one
//! [`RunSpec`] and writes its datasets, [`reproduce`] expands a
//! [`FigureRecipe`] and writes a manifest. [`run`] ties it together and maps
//! failures to exit codes: 0 success, 2 usage, 1 compute failure.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{classify_chain, ClassifyParams, EdgeReport, Label};
use crate::error::{Error, Result};
use crate::model::{
    bilateral_potentials, chain_from_theta, check_cancellation, effective_from_physical, Boundary,
    ChainSpec, EffectiveChain, MappingOptions, PhysicalParams, Potentials, SitePotential, ThetaSpec,
};
use crate::output;
use crate::response::{self, DriveSpec};
use crate::spectra::{build_hamiltonian, chain_spectrum, eigendecompose};
use crate::svg::{self, Series};
use crate::sweep::{self, full_turn, linspace, DiagramKind, LevelRole};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// Parses an angle: plain radians, or a multiple of π written `0.25pi`, `pi`, `1.5π`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let (head, scale) = if let Some(h) = t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        (h.trim_end_matches('*'), PI)
    } else {
        (t, 1.0)
    };
    let value = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| format!("`{s}` is not an angle"))?,
    };
    let v = value * scale;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_finite(s: &str) -> std::result::Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

fn parse_site_value(s: &str) -> std::result::Result<SitePotential, String> {
    let (site, value) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}` is not of the form site=value"))?;
    let site = site
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad site in `{s}`"))?;
    Ok(SitePotential {
        site,
        value: parse_finite(value)?,
    })
}

/// Drive frequency: a number, or the energy of a classified edge level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaSpec {
    Value(f64),
    /// Outermost nontopological edge level.
    Nontopological,
    /// In-gap topological level closest to zero.
    Topological,
}

impl FromStr for OmegaSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "nontopological" | "nontop" => Ok(OmegaSpec::Nontopological),
            "topological" | "top" => Ok(OmegaSpec::Topological),
            other => parse_finite(other).map(OmegaSpec::Value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Sweep,
    PhaseDiagram,
    Inversion,
    Response,
    MapPhysical,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Sweep => "sweep",
            Command::PhaseDiagram => "phase-diagram",
            Command::Inversion => "inversion",
            Command::Response => "response",
            Command::MapPhysical => "map-physical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            csv: true,
            json: true,
            svg: true,
        }
    }
}

impl FromStr for Formats {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut f = Formats {
            csv: false,
            json: false,
            svg: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(format!("unknown format `{other}` (expected csv, json, svg)")),
            }
        }
        if !(f.csv || f.json || f.svg) {
            return Err("no output format selected".into());
        }
        Ok(f)
    }
}

/// Validated parameters of one run. Unset options fall back to per-command defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub v: Option<f64>,
    pub v1: Option<f64>,
    pub v2: Option<f64>,
    pub potentials: Vec<SitePotential>,
    pub boundary: Boundary,
    pub theta_grid: Option<usize>,
    pub phi_grid: Option<usize>,
    pub v_grid: Option<usize>,
    pub v_max: f64,
    pub diagram: DiagramKind,
    pub kappa: f64,
    pub drive_site: usize,
    pub omega: Option<OmegaSpec>,
    pub omega_grid: Option<usize>,
    pub params_file: Option<PathBuf>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n: 100,
            theta: None,
            phi: None,
            v: None,
            v1: None,
            v2: None,
            potentials: Vec::new(),
            boundary: Boundary::Open,
            theta_grid: None,
            phi_grid: None,
            v_grid: None,
            v_max: 4.0,
            diagram: DiagramKind::Unilateral,
            kappa: response::DEFAULT_KAPPA,
            drive_site: 1,
            omega: None,
            omega_grid: None,
            params_file: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub formats: Formats,
    /// File name stem; each format appends its extension.
    pub stem: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub command: Command,
    pub params: Params,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FigureRecipe {
    Fig2a,
    Fig2c,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Invocation {
    Run(RunSpec),
    Reproduce {
        figure: FigureRecipe,
        dir: PathBuf,
        formats: Formats,
    },
}

impl Invocation {
    pub fn run_specs(&self) -> Vec<RunSpec> {
        match self {
            Invocation::Run(spec) => vec![spec.clone()],
            Invocation::Reproduce {
                figure,
                dir,
                formats,
            } => figure.expand(dir, *formats),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sshqed", version, about = "Edge states of dimerized resonator chains with onsite potentials")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Spectrum and state labels at one θ, or over a θ grid with --theta-grid.
    Spectrum(RunArgs),
    /// Bilateral spectrum over φ at fixed θ and V.
    Sweep(RunArgs),
    /// Region map: unilateral (V1 vs θ) or bilateral (φ vs θ) with --kind.
    PhaseDiagram(RunArgs),
    /// Index bookkeeping of the four end levels over φ.
    Inversion(RunArgs),
    /// Photon numbers under a coherent drive.
    Response(RunArgs),
    /// Effective chain from circuit parameters (--params FILE).
    MapPhysical(RunArgs),
    /// Regenerate the datasets behind one figure.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
struct OutArgs {
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value = "csv,json,svg")]
    format: Formats,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(value_enum)]
    figure: FigureRecipe,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    v: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    v1: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    v2: Option<f64>,
    /// Onsite potential `site=value`; repeatable.
    #[arg(long = "potential", value_parser = parse_site_value, allow_hyphen_values = true)]
    potentials: Vec<SitePotential>,
    #[arg(long, default_value = "open")]
    boundary: String,
    #[arg(long)]
    theta_grid: Option<usize>,
    #[arg(long)]
    phi_grid: Option<usize>,
    #[arg(long)]
    v_grid: Option<usize>,
    #[arg(long, value_parser = parse_finite, default_value_t = 4.0)]
    v_max: f64,
    /// Phase diagram kind: unilateral or bilateral.
    #[arg(long, default_value = "unilateral")]
    kind: String,
    #[arg(long, value_parser = parse_finite, default_value_t = response::DEFAULT_KAPPA)]
    kappa: f64,
    #[arg(long, default_value_t = 1)]
    drive_site: usize,
    /// Drive frequency, or `nontopological` / `topological`.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<OmegaSpec>,
    #[arg(long)]
    omega_grid: Option<usize>,
    /// JSON file with circuit parameters (map-physical).
    #[arg(long = "params")]
    params_file: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

impl RunArgs {
    fn into_spec(self, command: Command) -> std::result::Result<RunSpec, UsageError> {
        let boundary = Boundary::from_str(&self.boundary).or_else(|e| usage(format!("--boundary: {e}")))?;
        let diagram = match self.kind.as_str() {
            "unilateral" => DiagramKind::Unilateral,
            "bilateral" => DiagramKind::Bilateral,
            other => return usage(format!("--kind: expected unilateral or bilateral, got `{other}`")),
        };
        let params = Params {
            n: self.n,
            theta: self.theta,
            phi: self.phi,
            v: self.v,
            v1: self.v1,
            v2: self.v2,
            potentials: self.potentials,
            boundary,
            theta_grid: self.theta_grid,
            phi_grid: self.phi_grid,
            v_grid: self.v_grid,
            v_max: self.v_max,
            diagram,
            kappa: self.kappa,
            drive_site: self.drive_site,
            omega: self.omega,
            omega_grid: self.omega_grid,
            params_file: self.params_file,
        };
        let spec = RunSpec {
            command,
            params,
            output: OutputSpec {
                dir: self.out.out,
                formats: self.out.format,
                stem: command.name().replace('-', "_"),
            },
        };
        validate(&spec)?;
        Ok(spec)
    }
}

/// Range checks that clap cannot express; the message names the flag.
pub fn validate(spec: &RunSpec) -> std::result::Result<(), UsageError> {
    let p = &spec.params;
    if p.n < 2 {
        return usage(format!("--n: chain needs at least 2 sites, got {}", p.n));
    }
    for (flag, g) in [
        ("--theta-grid", p.theta_grid),
        ("--phi-grid", p.phi_grid),
        ("--v-grid", p.v_grid),
        ("--omega-grid", p.omega_grid),
    ] {
        if g.is_some_and(|g| g < 2) {
            return usage(format!("{flag}: need at least 2 points"));
        }
    }
    if !(p.kappa > 0.0) {
        return usage(format!("--kappa: must be positive, got {}", p.kappa));
    }
    if !(p.v_max > 0.0) {
        return usage(format!("--v-max: must be positive, got {}", p.v_max));
    }
    if p.drive_site == 0 || p.drive_site > p.n {
        return usage(format!("--drive-site: {} is outside 1..={}", p.drive_site, p.n));
    }
    if let Some(bad) = p.potentials.iter().find(|s| s.site == 0 || s.site > p.n) {
        return usage(format!("--potential: site {} is outside 1..={}", bad.site, p.n));
    }
    if p.v.is_some() != p.phi.is_some()
        && matches!(spec.command, Command::Spectrum | Command::Response)
    {
        return usage("--v and --phi must be given together for a bilateral chain");
    }
    if spec.command == Command::MapPhysical && p.params_file.is_none() {
        return usage("map-physical requires --params FILE");
    }
    if spec.command == Command::Response && p.omega.is_none() && p.omega_grid.is_none() {
        return usage("response requires --omega or --omega-grid");
    }
    Ok(())
}

/// Parses a full argv (program name first).
pub fn parse_args<I, T>(argv: I) -> std::result::Result<Invocation, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let spec = |args: RunArgs, c| {
        args.into_spec(c)
            .map_err(|e| Cli::command_error(clap::error::ErrorKind::ValueValidation, e.0))
    };
    Ok(match cli.command {
        Sub::Spectrum(a) => Invocation::Run(spec(a, Command::Spectrum)?),
        Sub::Sweep(a) => Invocation::Run(spec(a, Command::Sweep)?),
        Sub::PhaseDiagram(a) => Invocation::Run(spec(a, Command::PhaseDiagram)?),
        Sub::Inversion(a) => Invocation::Run(spec(a, Command::Inversion)?),
        Sub::Response(a) => Invocation::Run(spec(a, Command::Response)?),
        Sub::MapPhysical(a) => Invocation::Run(spec(a, Command::MapPhysical)?),
        Sub::Reproduce(a) => Invocation::Reproduce {
            figure: a.figure,
            dir: a.out.out,
            formats: a.out.format,
        },
    })
}

impl Cli {
    fn command_error(kind: clap::error::ErrorKind, msg: String) -> clap::Error {
        use clap::CommandFactory;
        Cli::command().error(kind, msg)
    }
}

/// One written file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

fn chain_for(p: &Params, theta: f64) -> Result<EffectiveChain> {
    chain_from_theta(p.n, ThetaSpec::new(theta), potentials_for(p), p.boundary)
}

fn potentials_for(p: &Params) -> Potentials {
    let mut pots = Potentials::new();
    let mut add = |site: usize, value: f64| {
        if value != 0.0 {
            *pots.entry(site).or_insert(0.0) += value;
        }
    };
    if let (Some(v), Some(phi)) = (p.v, p.phi) {
        let (a, b) = bilateral_potentials(v, phi);
        add(1, a);
        add(p.n, b);
    }
    if let Some(v1) = p.v1 {
        add(1, v1);
    }
    if let Some(v2) = p.v2 {
        add(p.n, v2);
    }
    for s in &p.potentials {
        add(s.site, s.value);
    }
    pots
}

struct Writer<'a> {
    spec: &'a RunSpec,
    artifacts: Vec<Artifact>,
}

impl Writer<'_> {
    fn put(&mut self, ext: &str, contents: &str) -> Result<()> {
        let name = format!("{}.{ext}", self.spec.output.stem);
        output::write_text(&self.spec.output.dir, &name, contents)?;
        self.artifacts.push(Artifact {
            sha256: hex(&Sha256::digest(contents.as_bytes())),
            bytes: contents.len(),
            file: name,
        });
        Ok(())
    }

    fn emit(
        &mut self,
        csv: impl FnOnce() -> Result<String>,
        json: impl FnOnce() -> Result<String>,
        svg: impl FnOnce() -> Result<String>,
    ) -> Result<()> {
        let f = self.spec.output.formats;
        if f.csv {
            self.put("csv", &csv()?)?;
        }
        if f.json {
            self.put("json", &json()?)?;
        }
        if f.svg {
            self.put("svg", &svg()?)?;
        }
        Ok(())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn distribution_chart(title: &str, report: &EdgeReport, chain: &EffectiveChain) -> Result<String> {
    let spectrum = chain_spectrum(chain)?;
    let mut series: Vec<Series> = report
        .states
        .iter()
        .filter(|s| s.label != Label::Bulk)
        .map(|s| Series {
            name: format!("{} #{} E={:.4}", s.label.as_str(), s.index, s.energy),
            color: svg::label_color(s.label).into(),
            points: spectrum.vectors[s.index - 1]
                .iter()
                .enumerate()
                .map(|(j, x)| ((j + 1) as f64, x * x))
                .collect(),
        })
        .collect();
    if series.is_empty() {
        let mid = report.states.len() / 2;
        series.push(Series {
            name: format!("bulk #{}", mid + 1),
            color: svg::label_color(Label::Bulk).into(),
            points: spectrum.vectors[mid]
                .iter()
                .enumerate()
                .map(|(j, x)| ((j + 1) as f64, x * x))
                .collect(),
        });
    }
    svg::lines(title, "site", "|psi|^2", &series)
}

fn pick_omega(spec: OmegaSpec, report: &EdgeReport) -> Result<f64> {
    let missing = |what: &str| Error::InvalidParameter(format!("chain has no {what} edge level"));
    match spec {
        OmegaSpec::Value(w) => Ok(w),
        OmegaSpec::Nontopological => report
            .with_label(Label::NontopologicalEdge)
            .max_by(|a, b| a.energy.abs().total_cmp(&b.energy.abs()))
            .map(|s| s.energy)
            .ok_or_else(|| missing("nontopological")),
        OmegaSpec::Topological => report
            .with_label(Label::TopologicalEdge)
            .min_by(|a, b| a.energy.abs().total_cmp(&b.energy.abs()))
            .map(|s| s.energy)
            .ok_or_else(|| missing("topological")),
    }
}

/// Runs one spec and writes its files; returns what was written.
pub fn execute(spec: &RunSpec) -> Result<Vec<Artifact>> {
    let p = &spec.params;
    let cp = ClassifyParams::default();
    let mut w = Writer {
        spec,
        artifacts: Vec::new(),
    };
    let title = spec.output.stem.replace('_', " ");
    match spec.command {
        Command::Spectrum => {
            if let Some(points) = p.theta_grid {
                let s = sweep::sweep_theta(p.n, &potentials_for(p), p.boundary, &full_turn(points), &cp)?;
                w.emit(
                    || output::sweep_csv(&s),
                    || output::to_json("spectrum_sweep", &s),
                    || svg::sweep_chart(&title, &s),
                )?;
            } else {
                let chain = chain_for(p, p.theta.unwrap_or(PI))?;
                let r = classify_chain(&chain, &cp)?;
                w.emit(
                    || output::report_csv(&r),
                    || output::to_json("edge_report", &r),
                    || distribution_chart(&title, &r, &chain),
                )?;
            }
        }
        Command::Sweep => {
            let grid = full_turn(p.phi_grid.unwrap_or(201));
            let s = sweep::sweep_phi(p.n, p.theta.unwrap_or(PI), p.v.unwrap_or(2.5), &grid, &cp)?;
            w.emit(
                || output::sweep_csv(&s),
                || output::to_json("spectrum_sweep", &s),
                || svg::sweep_chart(&title, &s),
            )?;
        }
        Command::PhaseDiagram => {
            let thetas = full_turn(p.theta_grid.unwrap_or(201));
            let d = match p.diagram {
                DiagramKind::Unilateral => {
                    let vs = linspace(0.0, p.v_max, p.v_grid.unwrap_or(201));
                    sweep::phase_diagram_unilateral(&vs, &thetas, p.n, &cp)?
                }
                DiagramKind::Bilateral => {
                    let phis = linspace(0.0, PI, p.phi_grid.unwrap_or(201));
                    sweep::phase_diagram_bilateral(&phis, &thetas, p.v.unwrap_or(2.5), p.n, &cp)?
                }
            };
            w.emit(
                || output::diagram_csv(&d),
                || output::to_json("phase_diagram", &d),
                || svg::diagram_chart(&title, &d),
            )?;
        }
        Command::Inversion => {
            let grid = full_turn(p.phi_grid.unwrap_or(401));
            let theta = p.theta.unwrap_or(sweep::DEFAULT_THETA_PROBE);
            let t = sweep::trace_band_inversion(&grid, p.v.unwrap_or(2.5), p.n, theta, &cp)?;
            w.emit(
                || inversion_csv(&t),
                || output::to_json("inversion_trace", &t),
                || inversion_chart(&title, &t),
            )?;
        }
        Command::Response => {
            let chain = chain_for(p, p.theta.unwrap_or(0.25 * PI))?;
            let report = classify_chain(&chain, &cp)?;
            let h = build_hamiltonian(&chain);
            let spectrum = eigendecompose(&h)?;
            if let Some(points) = p.omega_grid {
                let lo = spectrum.energies[0] - 1.0;
                let hi = spectrum.energies[spectrum.len() - 1] + 1.0;
                let scan = response::frequency_scan(
                    &spectrum,
                    p.drive_site,
                    &linspace(lo, hi, points),
                    1.0,
                    p.kappa,
                )?;
                let totals: Vec<Series> = vec![Series {
                    name: "total photon number".into(),
                    color: "#1f77b4".into(),
                    points: scan.iter().map(|s| (s.omega, s.profile.total())).collect(),
                }];
                w.emit(
                    || output::scan_csv(&scan),
                    || output::to_json("frequency_scan", &scan),
                    || svg::lines(&title, "omega", "total photon number", &totals),
                )?;
            } else {
                let omega = pick_omega(p.omega.expect("validated"), &report)?;
                let drive = DriveSpec {
                    site: p.drive_site,
                    omega_d: omega,
                    amplitude: 1.0,
                    kappa: p.kappa,
                };
                let profile = response::steady_state_response(&spectrum, &drive)?;
                #[derive(Serialize)]
                struct Dataset<'a> {
                    drive: DriveSpec,
                    profile: &'a response::ResponseProfile,
                }
                w.emit(
                    || output::response_csv(&profile),
                    || {
                        output::to_json(
                            "response_profile",
                            &Dataset {
                                drive,
                                profile: &profile,
                            },
                        )
                    },
                    || {
                        svg::bars(
                            &format!("{title} omega={omega:.4}"),
                            "site",
                            "photon number",
                            &profile.photon_numbers,
                            "#1f77b4",
                        )
                    },
                )?;
            }
        }
        Command::MapPhysical => {
            let path = p.params_file.as_deref().expect("validated");
            let phys: PhysicalParams = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            let chain = effective_from_physical(&phys, p.boundary, MappingOptions::default())?;
            let uncancelled = check_cancellation(&phys, 1e-9)?;
            #[derive(Serialize)]
            struct Mapped {
                chain: ChainSpec,
                uncancelled_sites: Vec<usize>,
            }
            let mapped = Mapped {
                chain: ChainSpec::from_chain(&chain),
                uncancelled_sites: uncancelled,
            };
            let onsite: Vec<f64> = (1..=chain.n_sites()).map(|s| chain.potential(s)).collect();
            w.emit(
                || mapped_csv(&chain),
                || output::to_json("effective_chain", &mapped),
                || svg::bars(&title, "site", "onsite potential", &onsite, "#457b9d"),
            )?;
        }
    }
    Ok(w.artifacts)
}

fn mapped_csv(chain: &EffectiveChain) -> Result<String> {
    let mut s = String::from("kind,index,value\n");
    for (j, t) in chain.hoppings().iter().enumerate() {
        s.push_str(&format!("hopping,{},{t}\n", j + 1));
    }
    if let Some(c) = chain.closing_hopping() {
        s.push_str(&format!("hopping,{},{c}\n", chain.n_sites()));
    }
    for site in 1..=chain.n_sites() {
        s.push_str(&format!("onsite,{site},{}\n", chain.potential(site)));
    }
    Ok(s)
}

fn inversion_csv(t: &sweep::InversionTrace) -> Result<String> {
    let mut s = String::from("phi,role,index,energy,center,label\n");
    for l in &t.levels {
        for (phi, sample) in t.phi_grid.iter().zip(&l.samples) {
            if let Some(x) = sample {
                s.push_str(&format!(
                    "{phi},{},{},{},{},{}\n",
                    l.role.name(),
                    x.index,
                    x.energy,
                    x.center,
                    x.label.as_str()
                ));
            }
        }
    }
    Ok(s)
}

fn inversion_chart(title: &str, t: &sweep::InversionTrace) -> Result<String> {
    let color = |r: LevelRole| match r {
        LevelRole::Green => "#2ca02c",
        LevelRole::Red => "#d62728",
        LevelRole::Blue => "#1f77b4",
        LevelRole::Purple => "#9467bd",
    };
    let series: Vec<Series> = t
        .levels
        .iter()
        .map(|l| Series {
            name: l.role.name().into(),
            color: color(l.role).into(),
            points: t
                .phi_grid
                .iter()
                .zip(&l.samples)
                .filter_map(|(&phi, s)| s.map(|s| (phi, s.index as f64)))
                .collect(),
        })
        .collect();
    svg::lines(title, "phi", "level index", &series)
}

impl FigureRecipe {
    pub fn name(&self) -> &'static str {
        match self {
            FigureRecipe::Fig2a => "fig2a",
            FigureRecipe::Fig2c => "fig2c",
            FigureRecipe::Fig3 => "fig3",
            FigureRecipe::Fig4 => "fig4",
            FigureRecipe::Fig5 => "fig5",
            FigureRecipe::Fig6 => "fig6",
            FigureRecipe::Fig7 => "fig7",
            FigureRecipe::Fig8 => "fig8",
            FigureRecipe::Fig9 => "fig9",
        }
    }

    /// The runs behind the figure, all writing into `dir`.
    pub fn expand(&self, dir: &Path, formats: Formats) -> Vec<RunSpec> {
        let run = |command: Command, stem: String, params: Params| RunSpec {
            command,
            params,
            output: OutputSpec {
                dir: dir.to_path_buf(),
                formats,
                stem,
            },
        };
        let theta_sweep = |n: usize, pots: Vec<SitePotential>| Params {
            n,
            theta_grid: Some(201),
            potentials: pots,
            ..Params::default()
        };
        let sp = |site, value| SitePotential { site, value };
        let name = self.name();
        match self {
            FigureRecipe::Fig2a => [0.25, 1.0, 2.0]
                .iter()
                .map(|&v1| {
                    run(
                        Command::Spectrum,
                        format!("{name}_v1_{v1}"),
                        theta_sweep(100, vec![sp(1, v1)]),
                    )
                })
                .collect(),
            FigureRecipe::Fig2c => vec![run(
                Command::PhaseDiagram,
                name.into(),
                Params {
                    theta_grid: Some(201),
                    v_grid: Some(201),
                    v_max: 4.0,
                    ..Params::default()
                },
            )],
            FigureRecipe::Fig3 => [100, 99]
                .iter()
                .map(|&n| {
                    run(
                        Command::Spectrum,
                        format!("{name}_n{n}"),
                        theta_sweep(n, vec![sp(1, 4.0)]),
                    )
                })
                .collect(),
            FigureRecipe::Fig4 | FigureRecipe::Fig5 => {
                let (v, phis): (f64, &[f64]) = if *self == FigureRecipe::Fig4 {
                    (0.5, &[0.125, 0.25, 0.375])
                } else {
                    (2.5, &[0.125, 0.25, 0.5, 0.75, 1.0])
                };
                let mut runs: Vec<RunSpec> = phis
                    .iter()
                    .map(|&f| {
                        run(
                            Command::Spectrum,
                            format!("{name}_phi_{f}pi"),
                            Params {
                                v: Some(v),
                                phi: Some(f * PI),
                                theta_grid: Some(201),
                                ..Params::default()
                            },
                        )
                    })
                    .collect();
                if *self == FigureRecipe::Fig5 {
                    runs.push(run(
                        Command::Inversion,
                        format!("{name}_inversion"),
                        Params {
                            v: Some(v),
                            phi_grid: Some(401),
                            theta: Some(sweep::DEFAULT_THETA_PROBE),
                            ..Params::default()
                        },
                    ));
                }
                runs
            }
            FigureRecipe::Fig6 => vec![run(
                Command::PhaseDiagram,
                name.into(),
                Params {
                    diagram: DiagramKind::Bilateral,
                    v: Some(2.5),
                    phi_grid: Some(201),
                    theta_grid: Some(201),
                    ..Params::default()
                },
            )],
            FigureRecipe::Fig7 => {
                let mut runs = Vec::new();
                for n in [100, 101] {
                    let pots = vec![sp(50, 2.5)];
                    runs.push(run(
                        Command::Spectrum,
                        format!("{name}_n{n}_spectrum"),
                        theta_sweep(n, pots.clone()),
                    ));
                    runs.push(run(
                        Command::Spectrum,
                        format!("{name}_n{n}_states"),
                        Params {
                            n,
                            theta: Some(PI),
                            potentials: pots,
                            ..Params::default()
                        },
                    ));
                }
                runs
            }
            FigureRecipe::Fig8 => {
                let (c, s) = bilateral_potentials(2.5, 0.25 * PI);
                let (c3, s3) = bilateral_potentials(2.5, 0.75 * PI);
                let cases = [
                    (100, vec![sp(50, c), sp(51, s)], "n100_phi_0.25pi"),
                    (101, vec![sp(50, c), sp(52, s)], "n101_phi_0.25pi"),
                    (101, vec![sp(50, c3), sp(52, s3)], "n101_phi_0.75pi"),
                ];
                let mut runs = Vec::new();
                for (n, pots, tag) in cases {
                    runs.push(run(
                        Command::Spectrum,
                        format!("{name}_{tag}_spectrum"),
                        theta_sweep(n, pots.clone()),
                    ));
                    runs.push(run(
                        Command::Spectrum,
                        format!("{name}_{tag}_states"),
                        Params {
                            n,
                            theta: Some(PI),
                            potentials: pots,
                            ..Params::default()
                        },
                    ));
                }
                runs
            }
            FigureRecipe::Fig9 => [
                ("nontopological", OmegaSpec::Nontopological),
                ("topological", OmegaSpec::Topological),
            ]
            .iter()
            .map(|&(tag, omega)| {
                run(
                    Command::Response,
                    format!("{name}_{tag}"),
                    Params {
                        theta: Some(0.25 * PI),
                        potentials: vec![sp(1, 4.0)],
                        omega: Some(omega),
                        ..Params::default()
                    },
                )
            })
            .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub spec: RunSpec,
    pub artifacts: Vec<Artifact>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub figure: FigureRecipe,
    pub runs: Vec<ManifestEntry>,
    pub runtime_seconds: f64,
}

/// Runs every spec of the recipe and writes `<figure>_manifest.json` next to the data.
pub fn reproduce(figure: FigureRecipe, dir: &Path, formats: Formats) -> Result<Manifest> {
    let start = Instant::now();
    let mut runs = Vec::new();
    for spec in figure.expand(dir, formats) {
        let artifacts = execute(&spec).map_err(|e| {
            Error::InvalidParameter(format!("{} ({}): {e}", figure.name(), spec.output.stem))
        })?;
        runs.push(ManifestEntry { spec, artifacts });
    }
    let manifest = Manifest {
        figure,
        runs,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    output::write_text(
        dir,
        &format!("{}_manifest.json", figure.name()),
        &output::to_json("manifest", &manifest)?,
    )?;
    Ok(manifest)
}

/// Full program: parse, run, report. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match parse_args(argv) {
        Ok(inv) => inv,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &inv {
        Invocation::Run(spec) => execute(spec).map(|a| a.into_iter().map(|a| a.file).collect::<Vec<_>>()),
        Invocation::Reproduce {
            figure,
            dir,
            formats,
        } => reproduce(*figure, dir, *formats).map(|m| {
            m.runs
                .into_iter()
                .flat_map(|r| r.artifacts.into_iter().map(|a| a.file))
                .chain(std::iter::once(format!("{}_manifest.json", figure.name())))
                .collect()
        }),
    };
    match result {
        Ok(files) => {
            for f in files {
                println!("{f}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_COMPUTE
        }
    }
}
