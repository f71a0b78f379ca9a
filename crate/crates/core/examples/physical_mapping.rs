// From circuit parameters to the effective tight-binding chain.
//
// Qubit couplings chosen so the interior onsite shifts cancel leave a bare
// dimerized chain with a potential on the end sites only.

use sshqed::model::{
    check_cancellation, effective_from_physical, Boundary, MappingOptions, PhysicalParams,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 8;
    let (dq, dcoupler) = (-10.0, 10.0);
    let coupler: Vec<f64> = (0..n).map(|j| [4.0, 3.0, 2.0][j % 3]).collect();
    // g^2/Δq + 2G^2/ΔQ = 0 in the interior
    let site: Vec<f64> = coupler.iter().map(|g| (2.0f64).sqrt() * g).collect();
    let p = PhysicalParams::from_detunings(n, 0.0, dq, dcoupler, site, coupler);

    let uncancelled = check_cancellation(&p, 1e-9)?;
    println!("interior sites with residual shifts: {uncancelled:?}");

    for boundary in [Boundary::Open, Boundary::Periodic] {
        let chain = effective_from_physical(&p, boundary, MappingOptions::default())?;
        println!("{boundary}: hoppings {:?}", chain.hoppings());
        println!("{boundary}: closing {:?}", chain.closing_hopping());
        println!("{boundary}: potentials {:?}", chain.potentials());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
