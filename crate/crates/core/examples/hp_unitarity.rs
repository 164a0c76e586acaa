//! Hudson-Parthasarathy generators of random (S, L, H) triples satisfy the
//! unitarity identity of the Ito calculus.
//!
//! ```bash
//! cargo run --example hp_unitarity
//! ```

use qsc::ito_algebra;
use qsc::linalg;
use qsc::open_system::HPTriple;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsc::Result<()> {
    let t = HPTriple::with_coupling(linalg::sigma_minus(), linalg::sigma_z() * linalg::real(0.5))?;
    let g = ito_algebra::hp_generator(&t)?;
    println!("dU U* for a decaying qubit:\n  {g}");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let d = 2 + k % 2;
        let t = HPTriple::new(
            linalg::random_unitary(d, &mut rng),
            linalg::random_ginibre(d, &mut rng),
            linalg::random_hermitian(d, &mut rng),
        )?;
        let defect = ito_algebra::unitarity_defect(&ito_algebra::hp_generator(&t)?)?;
        worst = worst.max(defect.max_abs());
    }
    println!("largest unitarity defect over 50 random triples: {worst:e}");
    Ok(())
}
