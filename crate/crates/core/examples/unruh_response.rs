//! Response of a uniformly accelerated detector to the Minkowski vacuum:
//! detailed balance at the Unruh temperature.
//!
//! ```bash
//! cargo run --example unruh_response
//! ```

use std::f64::consts::PI;

use qsc::unruh_limit::{self, WightmanParams};

fn main() -> qsc::Result<()> {
    let a = 1.0;
    println!("{}", unruh_limit::RESPONSE_CSV_HEADER);
    for x in [0.5, 2.0 * 2f64.ln(), 1.0, 2.0, 5.0] {
        let db = unruh_limit::detailed_balance(a, x * a / (2.0 * PI))?;
        println!("{}", db.csv_row());
    }
    let db = unruh_limit::detailed_balance(a, 0.3)?;
    println!(
        "F(Omega) / (Omega n(Omega)) = {:.8}  (1/2pi = {:.8})",
        db.prefactor()?,
        1.0 / (2.0 * PI)
    );

    let p = WightmanParams::standard(a)?;
    let report =
        unruh_limit::rescaled_twopoint_convergence(0.3, &p, &[0.4, 0.2, 0.1], |t| (-t * t).exp())?;
    println!("rescaled two-point function smeared against exp(-tau^2):");
    for (l, v) in report.lambdas.iter().zip(&report.values) {
        println!("  lambda = {l:<4}  {v:.10}");
    }
    println!(
        "  lambda -> 0  {:.10}  (response {:.10})",
        report.limit, db.response_pos
    );
    Ok(())
}
