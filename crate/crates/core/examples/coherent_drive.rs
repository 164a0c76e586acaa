//! A coherent input field driving a decaying qubit, in the rest frame and
//! seen from a moving frame.
//!
//! ```bash
//! cargo run --example coherent_drive
//! ```

use qsc::linalg::{self, c};
use qsc::open_system::{self, CoherentAmplitude, DensityMatrix, HPTriple};

fn main() -> qsc::Result<()> {
    let t = HPTriple::with_coupling(linalg::sigma_minus(), linalg::zeros(2))?;
    let shifted = open_system::coherent_shift(&t, c(0.5, 0.0))?;
    println!("shifted L = {}", shifted.l());
    println!("shifted H = {}", shifted.h());

    let alpha = CoherentAmplitude::constant(c(0.5, 0.0), 40.0)?;
    let traj =
        open_system::evolve_coherent(&t, &alpha, &DensityMatrix::basis_state(2, 0), 40.0, 4000)?;
    let ee = traj.last().expect("non-empty").rho[(1, 1)].re;
    println!(
        "steady rho_ee = {ee:.8}  (4|alpha|^2 / (1 + 8|alpha|^2) = {:.8})",
        1.0 / 3.0
    );

    let pulse = CoherentAmplitude::new(|s| c((-s * s).exp(), 0.0), 8.0)?;
    let moving = pulse.in_frame(1.25)?;
    println!(
        "pulse photon number: rest {:.10}, moving frame {:.10}",
        pulse.norm_squared(),
        moving.norm_squared()
    );
    Ok(())
}
