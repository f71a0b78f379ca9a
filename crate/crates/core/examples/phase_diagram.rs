// Coarse unilateral and bilateral phase diagrams printed as text.

use std::f64::consts::PI;

use sshqed::classify::ClassifyParams;
use sshqed::sweep::{
    boundary_unilateral, full_turn, linspace, nontopological_onset, phase_diagram_bilateral,
    phase_diagram_unilateral, PhaseDiagram,
};

fn print(d: &PhaseDiagram) {
    for iy in (0..d.y_axis.len()).rev() {
        let row: String = (0..d.x_axis.len())
            .map(|ix| match d.at(ix, iy).roman() {
                "I" => '1',
                "II" => '2',
                _ => '3',
            })
            .collect();
        println!("  theta={:5.2}pi {row}", d.y_axis.values[iy] / PI);
    }
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = ClassifyParams::default();
    let thetas = full_turn(13);

    let uni = phase_diagram_unilateral(&linspace(0.0, 3.0, 25), &thetas, 60, &params)?;
    println!("unilateral, V1 in [0, 3] ->");
    print(&uni);

    let bi = phase_diagram_bilateral(&linspace(0.0, PI, 25), &thetas, 2.5, 60, &params)?;
    println!("bilateral, V = 2.5, phi in [0, pi] ->");
    print(&bi);

    let v_grid = linspace(0.0, 2.0, 201);
    for theta in [0.25 * PI, 0.5 * PI, PI] {
        let onset = nontopological_onset(theta, &v_grid, 200, &params)?;
        println!(
            "theta = {:.2}pi: onset {onset:?}, analytic {:.4}",
            theta / PI,
            boundary_unilateral(theta)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
