//! Radar coordinates of the right Rindler wedge: the accelerated worldline
//! and the curves of constant eta and xi.
//!
//! ```bash
//! cargo run --example rindler_wedge
//! ```

use qsc::cli::wedge_samples;
use qsc::kinematics::{self, Event, RadarCoord};

fn main() -> qsc::Result<()> {
    let a = 1.0;
    let r = RadarCoord::new(0.4, -0.2, a)?;
    let e = kinematics::radar_to_minkowski(r)?;
    println!(
        "{r:?} -> {e:?} -> {:?}",
        kinematics::minkowski_to_radar(e, a)?
    );
    println!(
        "outside the wedge: {}",
        kinematics::minkowski_to_radar(Event::new(1.0, 0.5), a).unwrap_err()
    );

    let samples = wedge_samples(a, 3, 3, 5, 1.0, 0.5)?;
    println!("family,param,s,t,x");
    for p in samples.iter().filter(|p| p.family == "xi") {
        println!("{},{},{},{:.6},{:.6}", p.family, p.param, p.s, p.t, p.x);
    }
    Ok(())
}
