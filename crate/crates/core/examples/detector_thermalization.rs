//! A two-level detector with uniform proper acceleration relaxes to the
//! Gibbs state at the Unruh temperature a / 2 pi.
//!
//! ```bash
//! cargo run --example detector_thermalization
//! ```

use qsc::linalg::{self, c};
use qsc::open_system::{self, DensityMatrix};

fn main() -> qsc::Result<()> {
    let omega = 1.0;
    let a = 2.0 * std::f64::consts::PI / 2f64.ln();
    let n = open_system::bose_occupation(omega, a)?;
    println!("a = {a:.4}, Omega = {omega}: n = {n:.6}");

    let rho0 = DensityMatrix::qubit(0.8, c(0.3, 0.0))?;
    let g = open_system::detector_generator(n, omega)?;
    let tau = 200.0;
    let traj = open_system::evolve_master(&g, &rho0, tau, 20_000)?;
    for p in traj.points.iter().step_by(4000) {
        let exact = open_system::detector_exact(&rho0, p.tau, n, omega)?;
        println!(
            "tau = {:>6.1}  rho_ee = {:.8}  |rho_eg| = {:.3e}  error = {:.1e}",
            p.tau,
            p.rho[(1, 1)].re,
            p.rho[(1, 0)].norm(),
            linalg::trace_distance(&p.rho, exact.matrix())
        );
    }
    let last = traj.last().expect("non-empty trajectory");
    println!(
        "final rho_ee = {:.8}, Gibbs value 1/(exp(2 pi Omega/a) + 1) = {:.8}",
        last.rho[(1, 1)].re,
        1.0 / ((2.0 * std::f64::consts::PI * omega / a).exp() + 1.0)
    );
    Ok(())
}
