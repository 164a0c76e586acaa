//! A damped oscillator truncated at 30 levels thermalizes to the truncated
//! Gibbs state of its bath.
//!
//! ```bash
//! cargo run --example oscillator_thermalization
//! ```

use qsc::linalg;
use qsc::open_system::{self, DensityMatrix};

fn main() -> qsc::Result<()> {
    let (cutoff, n, rate) = (30, 0.5, 1.0);
    let g = open_system::oscillator_generator(cutoff, rate, n, 1.0, true)?;
    let gibbs = open_system::truncated_gibbs(cutoff, n)?;
    let rho0 = DensityMatrix::basis_state(cutoff, 3);
    let traj = open_system::evolve_master(&g, &rho0, 40.0, 4000)?;
    let number = linalg::number(cutoff);
    for p in traj.points.iter().step_by(500) {
        println!(
            "gamma tau = {:>5.1}  <N> = {:.8}  F(rho, gibbs) = {:.12}",
            p.tau,
            linalg::trace(&(&number * &p.rho)).re,
            linalg::fidelity(&p.rho, gibbs.matrix())
        );
    }
    Ok(())
}
