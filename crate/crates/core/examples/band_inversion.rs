// Tracks the four end levels while φ moves a fixed potential budget
// between the two ends of the chain.

use std::f64::consts::PI;

use sshqed::classify::ClassifyParams;
use sshqed::sweep::{full_turn, trace_band_inversion, DEFAULT_THETA_PROBE};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let trace = trace_band_inversion(
        &full_turn(201),
        2.5,
        100,
        DEFAULT_THETA_PROBE,
        &ClassifyParams::default(),
    )?;
    for level in &trace.levels {
        let events: Vec<String> = level
            .events
            .iter()
            .map(|e| format!("{:.3}pi", e.phi / PI))
            .collect();
        println!(
            "{:>6}: {:?} flips at {}",
            level.role.name(),
            level.sequence,
            events.join(", ")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
