// A strong end potential removes the first site, so an even chain picks up
// the in-gap level of an odd one.

use sshqed::classify::{ingap_level_exists_over_theta, ClassifyParams};
use sshqed::sweep::full_turn;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = full_turn(41);
    let params = ClassifyParams::default();
    for n in [100, 99] {
        let scan = ingap_level_exists_over_theta(n, 4.0, &grid, &params)?;
        println!(
            "N = {n}: in-gap topological level at {}/{} angles (every angle: {})",
            scan.witnesses.len(),
            grid.len(),
            scan.exists
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
