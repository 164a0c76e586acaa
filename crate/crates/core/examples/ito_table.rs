//! Multiplication tables of vacuum and thermal noise, and their behaviour
//! when every increment is rescaled to another inertial frame.
//!
//! ```bash
//! cargo run --example ito_table
//! ```

use qsc::ito_algebra::{self, Basis, FrameScaling, ItoExpression, ItoTable};

fn print_table(basis: Basis) {
    println!("{basis}:");
    for ((l, r), (out, coef)) in ItoTable::for_basis(basis).entries() {
        println!(
            "  {} * {} = {coef} {}",
            l.symbol(),
            r.symbol(),
            out.symbol()
        );
    }
}

fn main() -> qsc::Result<()> {
    print_table(Basis::Fock);
    let thermal = Basis::thermal(0.5)?;
    print_table(thermal);

    let scaling = FrameScaling::bose(0.8)?;
    for basis in [Basis::Fock, thermal] {
        for &l in basis.symbols() {
            for &r in basis.symbols() {
                let x = ItoExpression::unit(basis, l)?;
                let y = ItoExpression::unit(basis, r)?;
                let before =
                    ito_algebra::frame_scale(&ito_algebra::ito_product(&x, &y)?, &scaling)?;
                let after = ito_algebra::ito_product(
                    &ito_algebra::frame_scale(&x, &scaling)?,
                    &ito_algebra::frame_scale(&y, &scaling)?,
                )?;
                assert_eq!(before.to_string(), after.to_string());
            }
        }
    }
    println!("zeta = 0.8: scaling commutes with every product");

    let gauge = ItoExpression::unit(thermal, qsc::ito_algebra::Noise::Gauge);
    println!(
        "gauge increment in the thermal basis: {}",
        gauge.unwrap_err()
    );
    Ok(())
}
