//! Boosts, velocity composition and the time-dilation factor zeta.
//!
//! ```bash
//! cargo run --example frame_transform
//! ```

use qsc::kinematics::{self, Event, Velocity};

fn main() -> qsc::Result<()> {
    let u = Velocity::new(0.6)?;
    let e = Event::new(2.0, 1.0);
    let boosted = kinematics::lorentz_boost(e, u)?;
    println!("event {e:?} seen from u = 0.6: {boosted:?}");
    println!("interval {} -> {}", e.interval(), boosted.interval());

    println!(
        "{:>6} {:>6} {:>10} {:>14}",
        "u", "v", "zeta", "gamma(v')/gamma(v)"
    );
    for (u, v) in [(0.6, 0.6), (0.6, 0.0), (-0.3, 0.5), (0.9, -0.9)] {
        let (u, v) = (Velocity::new(u)?, Velocity::new(v)?);
        let vp = kinematics::velocity_add(v, u)?;
        let ratio = kinematics::gamma(vp)? / kinematics::gamma(v)?;
        println!(
            "{:>6} {:>6} {:>10.6} {:>14.6}",
            u.value(),
            v.value(),
            kinematics::zeta(u, v)?,
            ratio
        );
    }
    Ok(())
}
