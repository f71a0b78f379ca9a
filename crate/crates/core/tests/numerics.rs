mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use sshqed::classify::{classify_chain, ClassifyParams, Label};
use sshqed::model::{EffectiveChain, Potentials};
use sshqed::response::{amplitudes, amplitudes_direct, steady_state_response, DriveSpec};
use sshqed::spectra::{build_hamiltonian, eigendecompose, HamiltonianMatrix, Spectrum};

fn dense(h: &HamiltonianMatrix) -> Vec<f64> {
    // built by hand, not via to_dense
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

fn chain_strategy(max_n: usize) -> impl Strategy<Value = HamiltonianMatrix> {
    (2..=max_n, any::<bool>()).prop_flat_map(|(n, ring)| {
        let ring = ring && n >= 3;
        (
            prop::collection::vec(-3.0..3.0f64, n),
            prop::collection::vec(0.05..2.5f64, n - 1),
            -2.5..2.5f64,
        )
            .prop_map(move |(diag, offdiag, c)| HamiltonianMatrix {
                diag,
                offdiag,
                corner: ring.then_some(c),
            })
    })
}

fn reconstruction_error(h: &HamiltonianMatrix, s: &Spectrum) -> f64 {
    let n = h.diag.len();
    let a = dense(h);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let r: f64 = (0..n).map(|m| s.energies[m] * s.vectors[m][i] * s.vectors[m][j]).sum();
            worst = worst.max((r - a[i * n + j]).abs());
        }
    }
    worst
}

fn overlap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn oracle_self_checks() {
    let e = common::oracle_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2);
    assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
    let n = 7;
    let e = common::bisection_eigenvalues(&vec![0.0; n], &vec![1.0; n - 1]);
    for (k, x) in e.iter().enumerate() {
        let want = 2.0 * (PI * (n - k) as f64 / (n + 1) as f64).cos();
        assert!((x - want).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn reconstruction_and_orthonormality(h in chain_strategy(40)) {
        let s = eigendecompose(&h).unwrap();
        let scale = dense(&h).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        prop_assert!(reconstruction_error(&h, &s) <= 1e-9 * scale);
        prop_assert!(s.orthonormality_error() < 1e-10);
        prop_assert!(s.energies.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn characteristic_polynomial_oracle(h in chain_strategy(6)) {
        let n = h.diag.len();
        let s = eigendecompose(&h).unwrap();
        let want = common::oracle_eigenvalues(&dense(&h), n);
        for (got, want) in s.energies.iter().zip(&want) {
            prop_assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn sturm_oracle_open_chains(h in chain_strategy(80)) {
        let h = HamiltonianMatrix { corner: None, ..h };
        let s = eigendecompose(&h).unwrap();
        let want = common::bisection_eigenvalues(&h.diag, &h.offdiag);
        for (got, want) in s.energies.iter().zip(&want) {
            prop_assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn chiral_symmetry(h in chain_strategy(60)) {
        let h = HamiltonianMatrix { diag: vec![0.0; h.diag.len()], corner: None, ..h };
        let s = eigendecompose(&h).unwrap();
        prop_assert!(s.chiral_asymmetry() < 1e-9);
    }

    #[test]
    fn shift_covariance(h in chain_strategy(30), c in -5.0..5.0f64) {
        let h = HamiltonianMatrix { corner: None, ..h };
        let a = eigendecompose(&h).unwrap();
        let b = eigendecompose(&h.shifted(c)).unwrap();
        for m in 0..a.len() {
            prop_assert!((b.energies[m] - a.energies[m] - c).abs() < 1e-10);
            prop_assert!((overlap(&a.vectors[m], &b.vectors[m]).abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn scale_covariance(h in chain_strategy(30), c in 0.1..10.0f64) {
        let h = HamiltonianMatrix { corner: None, ..h };
        let a = eigendecompose(&h).unwrap();
        let b = eigendecompose(&h.scaled(c)).unwrap();
        for m in 0..a.len() {
            prop_assert!((b.energies[m] - c * a.energies[m]).abs() < 1e-10 * c.max(1.0) * 10.0);
            prop_assert!((overlap(&a.vectors[m], &b.vectors[m]).abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn resolvent_routes_agree(h in chain_strategy(50), omega in -6.0..6.0f64, kappa in 0.01..1.0f64, pick in 0.0..1.0f64) {
        let n = h.diag.len();
        let site = 1 + ((pick * n as f64) as usize).min(n - 1);
        let s = eigendecompose(&h).unwrap();
        let d = DriveSpec { site, omega_d: omega, amplitude: 1.3, kappa };
        let a = amplitudes(&s, &d).unwrap();
        let b = amplitudes_direct(&h, &d).unwrap();
        let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() <= 1e-9 * scale);
        }
    }

    #[test]
    fn response_reciprocity(h in chain_strategy(30), omega in -4.0..4.0f64, i in 0usize..30, j in 0usize..30) {
        let n = h.diag.len();
        let (i, j) = (1 + i % n, 1 + j % n);
        let s = eigendecompose(&h).unwrap();
        let drive = |site| DriveSpec { site, omega_d: omega, amplitude: 1.0, kappa: 0.1 };
        let aij = amplitudes(&s, &drive(i)).unwrap()[j - 1];
        let aji = amplitudes(&s, &drive(j)).unwrap()[i - 1];
        prop_assert!((aij - aji).norm() < 1e-10);
    }

    #[test]
    fn response_linearity(h in chain_strategy(30), omega in -4.0..4.0f64, amp in 0.1..3.0f64) {
        let s = eigendecompose(&h).unwrap();
        let mut d = DriveSpec { site: 1, omega_d: omega, amplitude: amp, kappa: 0.07 };
        let one = steady_state_response(&s, &d).unwrap();
        d.amplitude *= 2.0;
        let two = steady_state_response(&s, &d).unwrap();
        for (a, b) in one.photon_numbers.iter().zip(&two.photon_numbers) {
            prop_assert_eq!(4.0 * a, *b);
        }
    }

    #[test]
    fn ipr_bounds_and_label_totals(n in 4usize..60, theta in 0.0..(2.0 * PI), v1 in -4.0..4.0f64) {
        let chain = EffectiveChain::unilateral(n, theta, v1).unwrap();
        let p = ClassifyParams::default();
        let r = classify_chain(&chain, &p).unwrap();
        prop_assert_eq!(r.counts.total(), n);
        for s in &r.states {
            prop_assert!(s.ipr >= 1.0 / n as f64 - 1e-12 && s.ipr <= 1.0 + 1e-12);
            if s.label != Label::Bulk {
                prop_assert!(s.ipr >= p.loc_threshold);
            }
        }
    }

    #[test]
    fn mirror_symmetry(n in 6usize..60, theta in 0.0..(2.0 * PI), v1 in -4.0..4.0f64) {
        let chain = EffectiveChain::unilateral(n, theta, v1).unwrap();
        let p = ClassifyParams::default();
        let a = classify_chain(&chain, &p).unwrap();
        let b = classify_chain(&chain.reversed(), &p).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            prop_assert!((x.energy - y.energy).abs() < 1e-10);
        }
        let key = |r: &sshqed::classify::EdgeReport, flip: bool| {
            let mut v: Vec<(Label, usize)> = r
                .states
                .iter()
                .filter(|s| s.label != Label::Bulk && s.ipr > 0.05)
                .map(|s| (s.label, if flip { n + 1 - s.center } else { s.center }))
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(key(&a, false), key(&b, true));
    }

    #[test]
    fn negative_potential_mirror(n in 6usize..60, theta in 0.0..(2.0 * PI), v1 in 0.0..4.0f64) {
        let p = ClassifyParams::default();
        let a = classify_chain(&EffectiveChain::unilateral(n, theta, v1).unwrap(), &p).unwrap();
        let b = classify_chain(&EffectiveChain::unilateral(n, theta, -v1).unwrap(), &p).unwrap();
        for m in 0..n {
            prop_assert!((a.states[m].energy + b.states[n - 1 - m].energy).abs() < 1e-10);
        }
        prop_assert_eq!(a.counts, b.counts);
    }

    #[test]
    fn decoupling_limit(n in 10usize..80, theta in 0.0..(2.0 * PI)) {
        let chain = EffectiveChain::unilateral(n, theta, 1e3).unwrap();
        let s = eigendecompose(&build_hamiltonian(&chain)).unwrap();
        let (diag, off) = common::theta_chain(n, theta, &[]);
        let rest = common::bisection_eigenvalues(&diag[1..], &off[1..]);
        // the top level is the one bound to the first site
        for (got, want) in s.energies[..n - 1].iter().zip(&rest) {
            prop_assert!((got - want).abs() < 5e-3);
        }
    }
}

#[test]
fn lorentzian_peak_of_isolated_mode() {
    let chain = EffectiveChain::unilateral(30, 0.3 * PI, 4.0).unwrap();
    let s = eigendecompose(&build_hamiltonian(&chain)).unwrap();
    let m = s.len() - 1;
    let kappa = 0.02;
    assert!(s.energies[m] - s.energies[m - 1] > 10.0 * kappa);
    let d = DriveSpec { site: 1, omega_d: s.energies[m], amplitude: 1.0, kappa };
    let r = steady_state_response(&s, &d).unwrap();
    let v = &s.vectors[m];
    for j in [1usize, 2, 3] {
        let want = 4.0 * (v[0] * v[j - 1]).powi(2) / (kappa * kappa);
        assert!((r.photon_numbers[j - 1] - want).abs() <= 0.05 * want, "site {j}");
    }
}

#[test]
fn off_resonant_bound() {
    let chain = EffectiveChain::unilateral(40, 0.7, 2.0).unwrap();
    let s = eigendecompose(&build_hamiltonian(&chain)).unwrap();
    let outer = 2.0;
    let omega = 1e3 * outer;
    let r = steady_state_response(&s, &DriveSpec::new(1, omega)).unwrap();
    assert!(r.max() < 4.0 / (omega * omega));
}

#[test]
fn parallel_sweep_matches_serial() {
    use sshqed::model::Boundary;
    use sshqed::sweep::{full_turn, sweep_theta};
    let grid = full_turn(37);
    let pots = Potentials::from([(1, 1.3)]);
    let p = ClassifyParams::default();
    let sweep = sweep_theta(30, &pots, Boundary::Open, &grid, &p).unwrap();
    for (theta, report) in sweep.iter() {
        let chain = EffectiveChain::unilateral(30, theta, 1.3).unwrap();
        assert_eq!(*report, classify_chain(&chain, &p).unwrap());
    }
}

#[test]
fn ring_matches_analytic_dispersion() {
    // two-site unit cell: E(k) = ±|t1 + t2 e^{ik}|
    let (t1, t2) = (1.3, 0.7);
    let cells = 12;
    let n = 2 * cells;
    let hoppings = (1..n).map(|j| if j % 2 == 1 { t1 } else { t2 }).collect();
    let chain = EffectiveChain::periodic(hoppings, t2, Potentials::new()).unwrap();
    let s = eigendecompose(&build_hamiltonian(&chain)).unwrap();
    let mut want: Vec<f64> = (0..cells)
        .flat_map(|q| {
            let k = 2.0 * PI * q as f64 / cells as f64;
            let e = (t1 * t1 + t2 * t2 + 2.0 * t1 * t2 * k.cos()).sqrt();
            [e, -e]
        })
        .collect();
    want.sort_by(f64::total_cmp);
    for (got, want) in s.energies.iter().zip(&want) {
        assert!((got - want).abs() < 1e-10);
    }
}
