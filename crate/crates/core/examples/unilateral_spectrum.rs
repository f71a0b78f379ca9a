// Spectrum over θ with a potential on the first site.
//
// A weak potential only splits the left edge level off zero; a strong one
// pushes a nontopological level above the band at every θ.

use std::f64::consts::PI;

use sshqed::classify::{ClassifyParams, Label};
use sshqed::model::{Boundary, Potentials};
use sshqed::sweep::{full_turn, sweep_theta};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = full_turn(41);
    let params = ClassifyParams::default();
    for v1 in [0.0, 0.25, 2.0] {
        let pots = Potentials::from([(1, v1)]);
        let sweep = sweep_theta(100, &pots, Boundary::Open, &grid, &params)?;
        let with_nontop = sweep
            .iter()
            .filter(|(_, r)| r.has(Label::NontopologicalEdge))
            .count();
        let split = sweep
            .iter()
            .filter(|(t, _)| *t > 0.5 * PI && *t < 1.5 * PI)
            .map(|(_, r)| {
                let e = r.energies();
                (e[50] - e[49]).abs()
            })
            .fold(0.0, f64::max);
        println!(
            "V1 = {v1:4}: nontopological level at {with_nontop}/{} angles, max mid-gap split {split:.3e}, chiral asymmetry {:.1e}",
            grid.len(),
            sweep.max_chiral_asymmetry()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
