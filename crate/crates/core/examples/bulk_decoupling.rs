// Strong potentials on interior sites cut the chain into pieces, each with
// its own edge states.

use std::f64::consts::PI;

use sshqed::classify::{classify_chain, ClassifyParams, Label};
use sshqed::model::{bilateral_potentials, chain_from_theta, Boundary, Potentials, ThetaSpec};

fn show(n: usize, pots: Potentials, theta: f64) -> Result<(), Box<dyn std::error::Error>> {
    let chain = chain_from_theta(n, ThetaSpec::new(theta), pots.clone(), Boundary::Open)?;
    let report = classify_chain(&chain, &ClassifyParams::default())?;
    println!("N = {n}, theta = {:.2}pi, potentials {pots:?}", theta / PI);
    for s in report.states.iter().filter(|s| s.label != Label::Bulk) {
        println!(
            "  #{:3} E = {:+.4} {:20} center {:3} ipr {:.3}",
            s.index,
            s.energy,
            s.label.as_str(),
            s.center,
            s.ipr
        );
    }
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    show(100, Potentials::from([(50, 2.5)]), PI)?;
    let (a, b) = bilateral_potentials(2.5, 0.25 * PI);
    for theta in [0.0, PI] {
        show(101, Potentials::from([(50, a), (52, b)]), theta)?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
