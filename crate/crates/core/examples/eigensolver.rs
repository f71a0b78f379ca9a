// Direct use of the Hamiltonian builder and eigensolvers, open and ring.

use sshqed::model::{chain_from_theta, Boundary, Potentials, ThetaSpec};
use sshqed::spectra::{band_edges, build_hamiltonian, eigendecompose};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ThetaSpec::new(std::f64::consts::PI);
    for boundary in [Boundary::Open, Boundary::Periodic] {
        let chain = chain_from_theta(40, spec, Potentials::new(), boundary)?;
        let h = build_hamiltonian(&chain);
        let s = eigendecompose(&h)?;
        println!(
            "{boundary:8}: E in [{:+.4}, {:+.4}], residual {:.1e}, orthonormality {:.1e}",
            s.energies[0],
            s.energies[s.len() - 1],
            s.max_residual(&h),
            s.orthonormality_error()
        );
    }
    let (inner, outer) = band_edges(spec.t1(), spec.t2());
    println!("bulk bands: {inner} <= |E| <= {outer}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
