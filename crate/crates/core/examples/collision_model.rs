//! Thermal white noise represented on doubled Fock slices, and the
//! collision model it defines for the detector.
//!
//! ```bash
//! cargo run --example collision_model
//! ```

use std::f64::consts::PI;

use qsc::linalg;
use qsc::noise_repr::{self, SimConfig};
use qsc::open_system::{self, DensityMatrix};

fn main() -> qsc::Result<()> {
    let inc = noise_repr::thermal_increment(1.0, 1e-3, 2)?;
    println!(
        "slice moments at n = 1, dtau = 1e-3: {:?}",
        inc.vacuum_moments()
    );
    println!(
        "[dA_R, dA_L] on the Rindler pair: {:e}",
        noise_repr::rindler_pair_commutation(1.0, 3)?
    );

    let omega = 4.0 * PI;
    let rho0 = DensityMatrix::basis_state(2, 0);
    let exact = open_system::detector_exact(&rho0, 1.0, 1.0, omega)?;
    let mut previous = None;
    for dtau in [4e-3f64, 2e-3, 1e-3, 5e-4] {
        let steps = (1.0 / dtau).round() as usize;
        let traj = noise_repr::simulate_qsde(
            &SimConfig::detector(1.0, omega, dtau, steps),
            &linalg::sigma_minus(),
            &rho0,
        )?;
        let err = linalg::trace_distance(&traj.last().expect("non-empty").rho, exact.matrix());
        let ratio = previous.map_or(String::new(), |p: f64| format!("  ratio {:.3}", p / err));
        println!("dtau = {dtau:e}  error = {err:.3e}{ratio}");
        previous = Some(err);
    }
    Ok(())
}
