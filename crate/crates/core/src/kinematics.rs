//! Special-relativistic kinematics in 1+1 dimensions with `c = 1`.
//!
//! Covers inertial boosts along the x-axis, relativistic velocity addition,
//! the time-dilation factors `gamma(v)` and `zeta(u, v)`, and the radar
//! (Rindler) chart adapted to a uniformly accelerated observer.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance for classifying events near the Rindler horizon.
pub const WEDGE_TOLERANCE: f64 = 1e-12;

/// A spacetime event `(t, x)`; transverse coordinates are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub x: f64,
}

impl Event {
    pub fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }

    /// Minkowski interval `t^2 - x^2`.
    pub fn interval(&self) -> f64 {
        self.t * self.t - self.x * self.x
    }
}

/// Velocity as a fraction of the speed of light.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Velocity(f64);

impl Velocity {
    /// Subluminal velocity, `|v| < 1`.
    pub fn new(v: f64) -> Result<Self> {
        if v.is_finite() && v.abs() < 1.0 {
            Ok(Self(v))
        } else {
            Err(Error::InvalidVelocity(v))
        }
    }

    /// Velocity allowed to reach the light cone, `|v| <= 1`.
    pub fn luminal(v: f64) -> Result<Self> {
        if v.is_finite() && v.abs() <= 1.0 {
            Ok(Self(v))
        } else {
            Err(Error::InvalidVelocity(v))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn subluminal(self) -> Result<f64> {
        if self.0.abs() < 1.0 {
            Ok(self.0)
        } else {
            Err(Error::InvalidVelocity(self.0))
        }
    }
}

/// Radar coordinates `(eta, xi)` of the right Rindler wedge for an observer
/// of proper acceleration `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadarCoord {
    pub eta: f64,
    pub xi: f64,
    pub a: f64,
}

impl RadarCoord {
    pub fn new(eta: f64, xi: f64, a: f64) -> Result<Self> {
        Ok(Self {
            eta,
            xi,
            a: acceleration(a)?,
        })
    }
}

/// Time-dilation factors for a worldline moving at `v` in frame `K`, as
/// seen from a frame `K'` moving at `u` relative to `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProperTimeFactor {
    pub gamma_v: f64,
    pub zeta_uv: f64,
}

impl ProperTimeFactor {
    pub fn new(u: Velocity, v: Velocity) -> Result<Self> {
        Ok(Self {
            gamma_v: gamma(v)?,
            zeta_uv: zeta(u, v)?,
        })
    }
}

fn acceleration(a: f64) -> Result<f64> {
    if a.is_finite() && a > 0.0 {
        Ok(a)
    } else {
        Err(Error::InvalidAcceleration(a))
    }
}

/// Lorentz factor `1 / sqrt(1 - v^2)`.
pub fn gamma(v: Velocity) -> Result<f64> {
    let v = v.subluminal()?;
    Ok(1.0 / (1.0 - v * v).sqrt())
}

/// Coordinates of `e` in a frame moving with velocity `u` along the x-axis.
pub fn lorentz_boost(e: Event, u: Velocity) -> Result<Event> {
    let g = gamma(u)?;
    let u = u.value();
    Ok(Event {
        t: g * (e.t - u * e.x),
        x: g * (e.x - u * e.t),
    })
}

/// Velocity `v'` seen in a frame moving at `u`, for a body moving at `v`.
pub fn velocity_add(v: Velocity, u: Velocity) -> Result<Velocity> {
    let (v, u) = (v.value(), u.value());
    let den = 1.0 - u * v;
    if den == 0.0 {
        return Err(Error::DegenerateVelocityAddition { v, u });
    }
    if u.abs() >= 1.0 {
        return Err(Error::InvalidVelocity(u));
    }
    Velocity::luminal(((v - u) / den).clamp(-1.0, 1.0))
}

/// Ratio `dt' / dt = gamma(u) (1 - u v)` of coordinate-time increments
/// along a worldline of velocity `v`.
pub fn zeta(u: Velocity, v: Velocity) -> Result<f64> {
    let g = gamma(u)?;
    let v = v.subluminal()?;
    Ok(g * (1.0 - u.value() * v))
}

/// Proper time elapsed during coordinate time `dt` at velocity `v`.
pub fn proper_time(dt: f64, v: Velocity) -> Result<f64> {
    Ok(dt / gamma(v)?)
}

pub fn radar_to_minkowski(r: RadarCoord) -> Result<Event> {
    let a = acceleration(r.a)?;
    let scale = (a * r.xi).exp() / a;
    Ok(Event {
        t: scale * (a * r.eta).sinh(),
        x: scale * (a * r.eta).cosh(),
    })
}

/// Membership in the right Rindler wedge `|t| < x`, with the horizon
/// classified using `tol`.
pub fn in_rindler_wedge(e: Event, tol: f64) -> bool {
    e.x > 0.0 && e.x - e.t.abs() > tol * e.x.max(1.0)
}

pub fn minkowski_to_radar(e: Event, a: f64) -> Result<RadarCoord> {
    minkowski_to_radar_with_tolerance(e, a, WEDGE_TOLERANCE)
}

pub fn minkowski_to_radar_with_tolerance(e: Event, a: f64, tol: f64) -> Result<RadarCoord> {
    let a = acceleration(a)?;
    if !e.t.is_finite() || !e.x.is_finite() || !in_rindler_wedge(e, tol) {
        return Err(Error::OutsideWedge { t: e.t, x: e.x });
    }
    // x^2 - t^2 factored to avoid cancellation near the horizon
    let interval = (e.x - e.t) * (e.x + e.t);
    Ok(RadarCoord {
        eta: (e.t / e.x).atanh() / a,
        xi: (a * a * interval).ln() / (2.0 * a),
        a,
    })
}

/// Event at proper time `tau` on the hyperbola of constant proper
/// acceleration `a` through `(0, 1/a)`.
pub fn accelerated_worldline(tau: f64, a: f64) -> Result<Event> {
    let a = acceleration(a)?;
    Ok(Event {
        t: (a * tau).sinh() / a,
        x: (a * tau).cosh() / a,
    })
}

/// Inverse Unruh temperature `2 pi / a` (units `c = hbar = 1`).
pub fn unruh_beta(a: f64) -> Result<f64> {
    Ok(2.0 * PI / acceleration(a)?)
}
