// Driving the first resonator at an edge-level energy lights up where that
// level lives.

use std::f64::consts::PI;

use sshqed::classify::{classify_chain, ClassifyParams, Label};
use sshqed::model::EffectiveChain;
use sshqed::response::{frequency_scan, steady_state_response, total_response_peaks, DriveSpec};
use sshqed::spectra::chain_spectrum;
use sshqed::sweep::linspace;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let chain = EffectiveChain::unilateral(100, 0.25 * PI, 4.0)?;
    let report = classify_chain(&chain, &ClassifyParams::default())?;
    let spectrum = chain_spectrum(&chain)?;

    for label in [Label::NontopologicalEdge, Label::TopologicalEdge] {
        let level = report.with_label(label).next().ok_or("missing edge level")?;
        let profile = steady_state_response(&spectrum, &DriveSpec::new(1, level.energy))?;
        println!(
            "{:20} E = {:+.4}: peak at site {} ({:.1} photons)",
            label.as_str(),
            level.energy,
            profile.peak_site,
            profile.max()
        );
    }

    let scan = frequency_scan(&spectrum, 1, &linspace(-3.0, 5.0, 801), 1.0, 0.05)?;
    println!("total-response peaks seen from site 1: {}", total_response_peaks(&scan).len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
