//! Acceptance criteria. Each test prints one `criterion N ...: PASS|FAIL` line
//! with the measured quantities and wall time, then asserts the verdict.
//!
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1`
//! for an ordered report.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sshqed::classify::{classify_chain, ingap_level_exists_over_theta, ClassifyParams, EdgeReport, Label};
use sshqed::model::{bilateral_potentials, chain_from_theta, Boundary, EffectiveChain, Potentials, ThetaSpec};
use sshqed::response::{amplitudes, amplitudes_direct, steady_state_response, DriveSpec};
use sshqed::spectra::{build_hamiltonian, eigendecompose, HamiltonianMatrix};
use sshqed::sweep::{
    boundary_unilateral, full_turn, nontopological_onset, sweep_theta, trace_band_inversion,
    LevelRole,
};

const ZERO_MODE_TOL: f64 = 1e-6;
const ONSET_STEP: f64 = 0.01;
const ONSET_TOL: f64 = 0.02;
const ONSET_N: usize = 200;
const DECOUPLING_TOL: f64 = 5e-3;
const SYMMETRY_TOL: f64 = 1e-8;
const RECONSTRUCTION_TOL: f64 = 1e-9;
const ORTHONORMALITY_TOL: f64 = 1e-10;
const COVARIANCE_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-8;
const RESOLVENT_TOL: f64 = 1e-9;
const RANDOM_CASES: usize = 1000;
const SEED: u64 = 0x55_48_51_45_44;

fn verdict(id: u32, name: &str, pass: bool, detail: String, elapsed: Duration, budget_s: f64) {
    let in_time = elapsed.as_secs_f64() < budget_s;
    let ok = pass && in_time;
    println!(
        "criterion {id} [{name}]: {} ({detail}; {:.2} s of {budget_s} s budget)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(pass, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} over budget");
}

fn in_gap(report: &EdgeReport) -> impl Iterator<Item = &sshqed::classify::StateClassification> {
    let inner = report.gap.0;
    let margin = ClassifyParams::default().gap_margin * report.gap.1;
    report
        .states
        .iter()
        .filter(move |s| s.label != Label::Bulk && s.energy.abs() < inner - margin)
}

fn outside_band(report: &EdgeReport) -> impl Iterator<Item = &sshqed::classify::StateClassification> {
    let outer = report.gap.1;
    report
        .states
        .iter()
        .filter(move |s| s.label != Label::Bulk && s.energy.abs() > outer)
}

#[test]
fn criterion_1_bare_ssh_phases() {
    let start = Instant::now();
    let grid = full_turn(201);
    let sweep = sweep_theta(100, &Potentials::new(), Boundary::Open, &grid, &ClassifyParams::default()).unwrap();
    let mut bad = Vec::new();
    let mut checked = 0;
    for (theta, report) in sweep.iter() {
        let t = theta / PI;
        let edges: Vec<f64> = report.with_label(Label::TopologicalEdge).map(|s| s.energy).collect();
        let ok = if t > 0.55 + 1e-12 && t < 1.45 - 1e-12 {
            edges.len() == 2 && edges.iter().all(|e| e.abs() < ZERO_MODE_TOL)
        } else if t <= 0.45 + 1e-12 || t >= 1.55 - 1e-12 {
            edges.is_empty()
        } else {
            continue;
        };
        checked += 1;
        if !ok {
            let split = edges.iter().map(|e| e.abs()).fold(0.0, f64::max);
            bad.push(format!("{t:.2}pi(|E|={split:.1e})"));
        }
    }
    verdict(
        1,
        "bare SSH phases",
        bad.is_empty(),
        format!("{}/{checked} grid angles as required; failing {}", checked - bad.len(), bad.join(" ")),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_2_phase_boundary() {
    let start = Instant::now();
    let grid: Vec<f64> = (0..=200).map(|k| ONSET_STEP * k as f64).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for theta in [0.25 * PI, 0.5 * PI, PI] {
        let onset = nontopological_onset(theta, &grid, ONSET_N, &ClassifyParams::default()).unwrap();
        let want = boundary_unilateral(theta);
        let ok = onset.is_some_and(|v| (v - want).abs() <= ONSET_TOL);
        pass &= ok;
        parts.push(format!("theta={:.2}pi onset={onset:?} analytic={want:.4}", theta / PI));
    }
    verdict(2, "phase boundary", pass, format!("N={ONSET_N}, {}", parts.join(", ")), start.elapsed(), 30.0);
}

#[test]
fn criterion_3_odd_even_inversion() {
    let start = Instant::now();
    let grid = full_turn(201);
    let p = ClassifyParams::default();
    let even = ingap_level_exists_over_theta(100, 4.0, &grid, &p).unwrap();
    let odd = ingap_level_exists_over_theta(99, 4.0, &grid, &p).unwrap();
    let covered: BTreeSet<String> = even.witnesses.iter().map(|w| format!("{:.3}", w.theta)).collect();
    let missing: Vec<String> = grid
        .iter()
        .filter(|t| !covered.contains(&format!("{t:.3}")))
        .map(|t| format!("{:.2}pi", t / PI))
        .collect();
    verdict(
        3,
        "odd-even inversion",
        even.exists && odd.witnesses.is_empty(),
        format!(
            "N=100 in-gap level at {}/201 angles (missing {}); N=99 in-gap level at {}/201 angles",
            even.witnesses.len(),
            missing.join(" "),
            odd.witnesses.len()
        ),
        start.elapsed(),
        10.0,
    );
}

#[test]
fn criterion_4_strong_v_decoupling() {
    let start = Instant::now();
    let (n, v1) = (100, 1e3);
    let chain = EffectiveChain::unilateral(n, PI, v1).unwrap();
    let report = classify_chain(&chain, &ClassifyParams::default()).unwrap();
    // the level bound to the potential sits near v1; everything else should be the 99-site chain
    let kept: Vec<f64> = report
        .states
        .iter()
        .filter(|s| !(s.center == 1 && s.energy > 0.5 * v1))
        .map(|s| s.energy)
        .collect();
    let (diag, off) = common::theta_chain(n, PI, &[]);
    let reference = common::bisection_eigenvalues(&diag[1..], &off[1..]);
    let deviation = if kept.len() == reference.len() {
        kept.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let left_edges: Vec<usize> = report
        .with_label(Label::TopologicalEdge)
        .filter(|s| 2 * s.center <= n + 1)
        .map(|s| s.center)
        .collect();
    let all_ingap: Vec<usize> = in_gap(&report).map(|s| s.center).collect();
    verdict(
        4,
        "strong-V decoupling",
        deviation < DECOUPLING_TOL && left_edges == [2],
        format!(
            "max deviation from 99-site chain {deviation:.2e}; left edge centers {left_edges:?}; all in-gap centers {all_ingap:?}"
        ),
        start.elapsed(),
        2.0,
    );
}

#[test]
fn criterion_5_bilateral_symmetry_point() {
    let start = Instant::now();
    let p = ClassifyParams::default();
    let at = |theta| classify_chain(&EffectiveChain::bilateral(100, theta, 2.5, 0.75 * PI).unwrap(), &p).unwrap();
    let asym = |r: &EdgeReport| {
        let e = r.energies();
        let n = e.len();
        (0..n).map(|m| (e[m] + e[n - 1 - m]).abs()).fold(0.0, f64::max)
    };
    let (r_pi, r_q) = (at(PI), at(0.25 * PI));
    let sym = asym(&r_pi).max(asym(&r_q));
    let ingap_pi = in_gap(&r_pi).count();
    let pass = sym < SYMMETRY_TOL
        && r_pi.counts.nontopological_edge == 2
        && ingap_pi == 0
        && r_q.counts.nontopological_edge == 2
        && r_q.counts.topological_edge == 2;
    verdict(
        5,
        "bilateral symmetry point",
        pass,
        format!(
            "asymmetry {sym:.1e}; theta=pi: {} nontopological, {ingap_pi} in-gap; theta=0.25pi: {} nontopological, {} topological",
            r_pi.counts.nontopological_edge,
            r_q.counts.nontopological_edge,
            r_q.counts.topological_edge
        ),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_6_inversion_bookkeeping() {
    let start = Instant::now();
    let n = 100;
    let grid = full_turn(401);
    let step = grid[1] - grid[0];
    let trace = trace_band_inversion(&grid, 2.5, n, 0.01 * PI, &ClassifyParams::default()).unwrap();
    let h = n / 2;
    let expected = [
        (LevelRole::Green, vec![h, h - 1, h + 1, h + 2, h]),
        (LevelRole::Red, vec![h - 1, h, h + 2, h + 1, h - 1]),
        (LevelRole::Purple, vec![n - 1, n, 2, 1, n - 1]),
        (LevelRole::Blue, vec![n, n - 1, 1, 2, n]),
    ];
    // the seam at 2π closes the cycle back to the φ = 0 index
    let critical = [0.25, 0.5, 1.0, 1.25, 1.5, 2.0].map(|x| x * PI);
    let mut pass = true;
    let mut parts = Vec::new();
    for (role, want) in expected {
        let level = trace.level(role);
        let seq_ok = level.sequence == want;
        let events_ok = level
            .events
            .iter()
            .all(|e| critical.iter().any(|c| (e.phi - c).abs() <= step + 1e-12));
        pass &= seq_ok && events_ok;
        let events: Vec<String> = level.events.iter().map(|e| format!("{:.4}", e.phi / PI)).collect();
        parts.push(format!("{} {:?} at [{}]pi", role.name(), level.sequence, events.join(",")));
    }
    verdict(6, "inversion bookkeeping", pass, parts.join("; "), start.elapsed(), 60.0);
}

fn centers_report(n: usize, theta: f64, pots: &Potentials) -> EdgeReport {
    let chain = chain_from_theta(n, ThetaSpec::new(theta), pots.clone(), Boundary::Open).unwrap();
    classify_chain(&chain, &ClassifyParams::default()).unwrap()
}

#[test]
fn criterion_7_bulk_site_decoupling() {
    let start = Instant::now();
    let single = Potentials::from([(50, 2.5)]);
    let r100 = centers_report(100, PI, &single);
    let top100: BTreeSet<usize> = r100.with_label(Label::TopologicalEdge).map(|s| s.center).collect();
    let out100: Vec<usize> = outside_band(&r100).map(|s| s.center).collect();
    let ok100 = top100 == BTreeSet::from([1, 49, 51, 100]) && out100 == [50];

    let (a, b) = bilateral_potentials(2.5, 0.25 * PI);
    let pair = Potentials::from([(50, a), (52, b)]);
    let r101 = centers_report(101, PI, &pair);
    let top101: BTreeSet<usize> = r101.with_label(Label::TopologicalEdge).map(|s| s.center).collect();
    let out101: BTreeSet<usize> = outside_band(&r101).map(|s| s.center).collect();
    let isolated = in_gap(&r101).chain(outside_band(&r101)).any(|s| s.center == 51);
    let ok101 = top101 == BTreeSet::from([1, 49, 53, 101]) && out101 == BTreeSet::from([50, 52]) && isolated;

    // companion: the same chains at θ = 0 host the complementary subchain ends
    let union = |n, pots: &Potentials| -> BTreeSet<usize> {
        [0.0, PI]
            .iter()
            .flat_map(|&t| in_gap(&centers_report(n, t, pots)).map(|s| s.center).collect::<Vec<_>>())
            .collect()
    };
    println!(
        "info criterion 7 companion: in-gap centers over theta in {{0, pi}}: N=100 {:?}, N=101 {:?}",
        union(100, &single),
        union(101, &pair)
    );

    verdict(
        7,
        "bulk-site decoupling",
        ok100 && ok101,
        format!(
            "N=100: topological {top100:?}, outside-band {out100:?}; N=101: topological {top101:?}, outside-band {out101:?}, in-gap {:?}",
            in_gap(&r101).map(|s| (s.center, s.label.as_str())).collect::<Vec<_>>()
        ),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_8_detection() {
    let start = Instant::now();
    let chain = EffectiveChain::unilateral(100, 0.25 * PI, 4.0).unwrap();
    let report = classify_chain(&chain, &ClassifyParams::default()).unwrap();
    let h = build_hamiltonian(&chain);
    let s = eigendecompose(&h).unwrap();
    let nontop = report.with_label(Label::NontopologicalEdge).map(|s| s.energy).next();
    let top = report
        .with_label(Label::TopologicalEdge)
        .min_by(|a, b| a.energy.abs().total_cmp(&b.energy.abs()))
        .map(|s| s.energy);
    let peak = |omega: Option<f64>| {
        omega.map(|w| {
            let d = DriveSpec { site: 1, omega_d: w, amplitude: 1.0, kappa: 0.05 };
            steady_state_response(&s, &d).unwrap().peak_site
        })
    };
    let (p_n, p_t) = (peak(nontop), peak(top));
    verdict(
        8,
        "detection",
        p_n == Some(1) && p_t == Some(2),
        format!("nontopological E={nontop:?} -> peak {p_n:?}; topological E={top:?} -> peak {p_t:?}"),
        start.elapsed(),
        2.0,
    );
}

fn random_matrix(rng: &mut StdRng, n: usize) -> HamiltonianMatrix {
    let ring = n >= 3 && rng.gen_bool(0.3);
    HamiltonianMatrix {
        diag: (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect(),
        offdiag: (1..n).map(|_| rng.gen_range(0.05..2.5)).collect(),
        corner: ring.then(|| rng.gen_range(-2.5..2.5)),
    }
}

fn dense(h: &HamiltonianMatrix) -> Vec<f64> {
    let n = h.diag.len();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = h.diag[i];
    }
    for (i, t) in h.offdiag.iter().enumerate() {
        a[i * n + i + 1] += t;
        a[(i + 1) * n + i] += t;
    }
    if let Some(t) = h.corner {
        a[n - 1] += t;
        a[(n - 1) * n] += t;
    }
    a
}

#[test]
fn criterion_9_numerics_suite() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut worst = [0.0f64; 7];
    for case in 0..RANDOM_CASES {
        let n = rng.gen_range(2..=50);
        let h = random_matrix(&mut rng, n);
        let a = dense(&h);
        let s = eigendecompose(&h).unwrap();
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut rec = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n).map(|m| s.energies[m] * s.vectors[m][i] * s.vectors[m][j]).sum();
                rec = rec.max((r - a[i * n + j]).abs() / scale);
            }
        }
        worst[0] = worst[0].max(rec);
        worst[1] = worst[1].max(s.orthonormality_error());

        let c = rng.gen_range(-5.0..5.0);
        let shifted = eigendecompose(&h.shifted(c)).unwrap();
        let k = rng.gen_range(0.2..5.0);
        let scaled = eigendecompose(&h.scaled(k)).unwrap();
        for m in 0..n {
            worst[2] = worst[2].max((shifted.energies[m] - s.energies[m] - c).abs());
            worst[2] = worst[2].max((scaled.energies[m] - k * s.energies[m]).abs() / k.max(1.0));
        }

        let bare = HamiltonianMatrix { diag: vec![0.0; n], corner: None, ..h.clone() };
        worst[3] = worst[3].max(eigendecompose(&bare).unwrap().chiral_asymmetry());

        let small_n = rng.gen_range(2..=6);
        let small = random_matrix(&mut rng, small_n);
        let oracle = common::oracle_eigenvalues(&dense(&small), small_n);
        let got = eigendecompose(&small).unwrap();
        for (x, y) in got.energies.iter().zip(&oracle) {
            worst[4] = worst[4].max((x - y).abs());
        }

        let drive = DriveSpec {
            site: 1 + case % n,
            omega_d: rng.gen_range(-6.0..6.0),
            amplitude: 1.0,
            kappa: rng.gen_range(0.01..1.0),
        };
        let x = amplitudes(&s, &drive).unwrap();
        let y = amplitudes_direct(&h, &drive).unwrap();
        let norm = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (p, q) in x.iter().zip(&y) {
            worst[5] = worst[5].max((p - q).norm() / norm);
        }
        worst[6] = worst[6].max(s.max_residual(&h) / scale);
    }
    let pass = worst[0] < RECONSTRUCTION_TOL
        && worst[1] < ORTHONORMALITY_TOL
        && worst[2] < COVARIANCE_TOL
        && worst[3] < 1e-9
        && worst[4] < ORACLE_TOL
        && worst[5] < RESOLVENT_TOL
        && worst[6] < RECONSTRUCTION_TOL;
    verdict(
        9,
        "numerics suite",
        pass,
        format!(
            "{RANDOM_CASES} cases: reconstruction {:.1e}, orthonormality {:.1e}, shift/scale {:.1e}, chiral {:.1e}, char-poly oracle {:.1e}, resolvent {:.1e}, residual {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5], worst[6]
        ),
        start.elapsed(),
        30.0,
    );
}
