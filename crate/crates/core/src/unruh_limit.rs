//! Vacuum two-point functions seen by a uniformly accelerated detector and
//! the weak-coupling (van Hove) limit that turns them into thermal white
//! noise.
//!
//! The Minkowski two-point function of a massless scalar is
//! `W(x1, x2) = 1 / (4 pi^2 (x1 - x2 - i eps t)^2)` with the interval
//! `(x)^2 = -t^2 + |x|^2`. Along the hyperbolic worldline of proper
//! acceleration `a` it pulls back to
//! `W(s) = -(a^2 / 4 pi^2) / (4 sinh^2(a (s - i eps) / 2))`, and the
//! detector response `F(omega) = int exp(-i omega s) W(s) ds` obeys
//! detailed balance `F(omega) / F(-omega) = exp(-2 pi omega / a)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{self, Error, Result};
use crate::kinematics;
use crate::open_system::bose_occupation;
use crate::quadrature;

/// Regulators used for the `eps -> 0+` extrapolation, in units of `1/a`.
pub const EPSILON_SCHEDULE: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
/// Half-width of the integration window in units of `1/a`.
pub const WINDOW_DECAY_LENGTHS: f64 = 40.0;

/// Event in 1+3 dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event4 {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Event4 {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }
}

impl From<kinematics::Event> for Event4 {
    fn from(e: kinematics::Event) -> Self {
        Self::new(e.t, e.x, 0.0, 0.0)
    }
}

/// Closed form used for the accelerated two-point function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WightmanForm {
    /// `1 / (4 sinh^2(...))`, the pullback of the Minkowski function.
    SinhSquared,
    /// `1 / (4 sinh(...))`, first power; kept for comparison only.
    SinhPaper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WightmanParams {
    pub a: f64,
    pub epsilon: f64,
    pub form: WightmanForm,
}

impl WightmanParams {
    pub fn new(a: f64, epsilon: f64, form: WightmanForm) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidAcceleration(a));
        }
        error::positive("epsilon", epsilon)?;
        Ok(Self { a, epsilon, form })
    }

    /// `SinhSquared` form with the smallest scheduled regulator.
    pub fn standard(a: f64) -> Result<Self> {
        Self::new(a, EPSILON_SCHEDULE[2] / a, WightmanForm::SinhSquared)
    }

    fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..*self }
    }
}

/// Quadrature settings for the detector response.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseConfig {
    pub omega: f64,
    /// Half-width `T` of the window `[-T, T]`.
    pub window: f64,
    /// Largest Gauss-Legendre panel width.
    pub panel_width: f64,
    /// Regulators `eps`, each halving the previous one.
    pub epsilons: Vec<f64>,
}

impl ResponseConfig {
    /// Window `40/a`, panels no wider than `pi/(4|omega|)` or `1/a`, and
    /// the default regulator schedule.
    pub fn new(omega: f64, a: f64) -> Result<Self> {
        check_omega(omega)?;
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidAcceleration(a));
        }
        Ok(Self {
            omega,
            window: WINDOW_DECAY_LENGTHS / a,
            panel_width: (PI / (4.0 * omega.abs())).min(1.0 / a),
            epsilons: EPSILON_SCHEDULE.iter().map(|e| e / a).collect(),
        })
    }

    pub fn with_omega(&self, omega: f64) -> Self {
        Self {
            omega,
            panel_width: self.panel_width.min(PI / (4.0 * omega.abs())),
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        check_omega(self.omega)?;
        error::positive("window", self.window)?;
        error::positive("panel_width", self.panel_width)?;
        let spacing = self.panel_width / quadrature::ORDER as f64;
        if spacing >= 0.1 / self.omega.abs() {
            return Err(Error::InvalidParameter {
                name: "panel_width",
                value: self.panel_width,
                reason: "quadrature nodes must resolve the oscillation (spacing < 0.1/omega)",
            });
        }
        if self.epsilons.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "epsilons",
                value: self.epsilons.len() as f64,
                reason: "need at least two regulators",
            });
        }
        for e in &self.epsilons {
            error::positive("epsilon", *e)?;
        }
        Ok(())
    }
}

fn check_omega(omega: f64) -> Result<f64> {
    if omega.is_finite() && omega != 0.0 {
        Ok(omega)
    } else {
        Err(Error::InvalidParameter {
            name: "omega",
            value: omega,
            reason: "must be finite and nonzero",
        })
    }
}

/// Regulated Minkowski vacuum two-point function.
pub fn minkowski_wightman(x1: Event4, x2: Event4, epsilon: f64) -> Complex64 {
    let dt = Complex64::new(x1.t - x2.t, -epsilon);
    let (dx, dy, dz) = (x1.x - x2.x, x1.y - x2.y, x1.z - x2.z);
    let interval = -dt * dt + (dx * dx + dy * dy + dz * dz);
    1.0 / (4.0 * PI * PI * interval)
}

/// Two-point function along the accelerated worldline at proper-time
/// separation `dtau`.
pub fn accelerated_wightman(dtau: f64, p: &WightmanParams) -> Complex64 {
    let arg = Complex64::new(dtau, -p.epsilon) * (p.a / 2.0);
    let s = arg.sinh();
    let den = match p.form {
        WightmanForm::SinhSquared => 4.0 * s * s,
        WightmanForm::SinhPaper => 4.0 * s,
    };
    -(p.a * p.a / (4.0 * PI * PI)) / den
}

/// Minkowski two-point function evaluated between the points of the
/// accelerated worldline at proper times `tau1` and `tau2`.
pub fn worldline_pullback(tau1: f64, tau2: f64, a: f64, epsilon: f64) -> Result<Complex64> {
    let x1 = kinematics::accelerated_worldline(tau1, a)?;
    let x2 = kinematics::accelerated_worldline(tau2, a)?;
    Ok(minkowski_wightman(x1.into(), x2.into(), epsilon))
}

/// `int f(tau) g(tau / lambda^2) / lambda^2 dtau`, computed as
/// `int f(lambda^2 t) g(t) dt` over `g`'s support window `[-window, window]`.
pub fn vanhove_delta_check<G, F>(g: G, f: F, lambda: f64, window: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
    F: Fn(f64) -> f64,
{
    error::positive("lambda", lambda)?;
    error::positive("window", window)?;
    let scale = lambda * lambda;
    let panels = (2.0 * window / 0.25).ceil() as usize;
    let value = quadrature::integrate(|t| f(scale * t) * g(t), -window, window, panels);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonConvergent {
            residuals: vec![value],
        })
    }
}

/// Result of an `eps -> 0+` extrapolated integral.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolated {
    /// Extrapolated real part.
    pub value: f64,
    /// Extrapolated imaginary part; vanishes for a real response.
    pub imag: f64,
    pub epsilons: Vec<f64>,
    pub raw: Vec<f64>,
    /// Difference between the two highest extrapolation levels.
    pub residual: f64,
}

fn symmetric_breakpoints(first: f64, max_width: f64, end: f64) -> Vec<f64> {
    let half = quadrature::graded_breakpoints(first, max_width, end);
    let mut breaks: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    breaks.extend_from_slice(&half[1..]);
    breaks
}

/// Repeated Richardson extrapolation for a sequence at halving step sizes
/// with error expansion in integer powers of the step.
fn richardson(values: &[Complex64]) -> (Complex64, f64) {
    let mut table = values.to_vec();
    let mut residual = f64::INFINITY;
    let mut factor = 2.0;
    while table.len() > 1 {
        let next: Vec<Complex64> = table
            .windows(2)
            .map(|w| (w[1] * factor - w[0]) / (factor - 1.0))
            .collect();
        residual = (next[next.len() - 1] - table[table.len() - 1]).norm();
        table = next;
        factor *= 2.0;
    }
    (table[0], residual)
}

fn extrapolate<F>(
    cfg: &ResponseConfig,
    p: &WightmanParams,
    breaks_for: impl Fn(f64) -> Vec<f64>,
    integrand: F,
) -> Result<Extrapolated>
where
    F: Fn(f64, &WightmanParams) -> Complex64,
{
    let values: Vec<Complex64> = cfg
        .epsilons
        .iter()
        .map(|&eps| {
            let q = p.with_epsilon(eps);
            quadrature::integrate_complex_breakpoints(|s| integrand(s, &q), &breaks_for(eps))
        })
        .collect();
    if values
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonConvergent {
            residuals: values.iter().map(|z| z.re).collect(),
        });
    }
    let (limit, residual) = richardson(&values);
    let scale = cfg.omega.abs() / (2.0 * PI);
    if residual > 1e-4 * limit.norm() + 1e-10 * scale {
        return Err(Error::NonConvergent {
            residuals: values.iter().map(|z| (z - limit).norm()).collect(),
        });
    }
    Ok(Extrapolated {
        value: limit.re,
        imag: limit.im,
        epsilons: cfg.epsilons.clone(),
        raw: values.iter().map(|z| z.re).collect(),
        residual,
    })
}

/// Detector response `int exp(-i omega s) W(s) ds`, extrapolated to
/// `eps -> 0+`. Positive `omega` is the excitation rate, negative `omega`
/// the de-excitation rate.
pub fn response_rate(cfg: &ResponseConfig, p: &WightmanParams) -> Result<Extrapolated> {
    cfg.validate()?;
    let omega = cfg.omega;
    let breaks = |eps: f64| symmetric_breakpoints(eps, cfg.panel_width, cfg.window);
    extrapolate(cfg, p, breaks, |s, q| {
        Complex64::from_polar(1.0, -omega * s) * accelerated_wightman(s, q)
    })
}

/// Excitation and de-excitation responses at `±omega` and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetailedBalance {
    pub a: f64,
    pub omega: f64,
    pub response_pos: f64,
    pub response_neg: f64,
    pub ratio: f64,
    pub expected_ratio: f64,
}

pub const RESPONSE_CSV_HEADER: &str = "a,Omega,response_pos,response_neg,ratio,expected_ratio";

impl DetailedBalance {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.a,
            self.omega,
            self.response_pos,
            self.response_neg,
            self.ratio,
            self.expected_ratio
        )
    }

    /// `response_pos / (omega n(omega))`; the closed form gives `1/(2 pi)`.
    pub fn prefactor(&self) -> Result<f64> {
        Ok(self.response_pos / (self.omega * bose_occupation(self.omega, self.a)?))
    }
}

pub fn detailed_balance(a: f64, omega: f64) -> Result<DetailedBalance> {
    let omega = check_omega(omega)?.abs();
    let p = WightmanParams::standard(a)?;
    let cfg = ResponseConfig::new(omega, a)?;
    let pos = response_rate(&cfg, &p)?;
    let neg = response_rate(&cfg.with_omega(-omega), &p)?;
    Ok(DetailedBalance {
        a,
        omega,
        response_pos: pos.value,
        response_neg: neg.value,
        ratio: pos.value / neg.value,
        expected_ratio: (-kinematics::unruh_beta(a)? * omega).exp(),
    })
}

/// Exponent `k` in `F(omega) ∝ omega^k n(omega)` from two frequencies.
pub fn response_power(a: f64, omega1: f64, omega2: f64) -> Result<f64> {
    let p = WightmanParams::standard(a)?;
    let r1 = response_rate(&ResponseConfig::new(omega1, a)?, &p)?.value;
    let r2 = response_rate(&ResponseConfig::new(omega2, a)?, &p)?.value;
    let n1 = bose_occupation(omega1, a)?;
    let n2 = bose_occupation(omega2, a)?;
    Ok(((r1 / n1) / (r2 / n2)).ln() / (omega1 / omega2).ln())
}

/// Smeared rescaled two-point functions and their `lambda -> 0` limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub omega: f64,
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    /// Polynomial extrapolation of `values` to `lambda^2 = 0`.
    pub limit: f64,
}

/// For each `lambda`, smears the rescaled kernel
/// `exp(-i omega tau / lambda^2) W(tau / lambda^2) / lambda^2` against
/// `test_fn` (with `test_fn(0) = 1` the limit is the response rate).
pub fn rescaled_twopoint_convergence<F>(
    omega: f64,
    p: &WightmanParams,
    lambdas: &[f64],
    test_fn: F,
) -> Result<ConvergenceReport>
where
    F: Fn(f64) -> f64,
{
    if lambdas.is_empty() || lambdas.windows(2).any(|w| w[1].is_nan() || w[1] >= w[0]) {
        return Err(Error::InvalidParameter {
            name: "lambdas",
            value: lambdas.len() as f64,
            reason: "must be a non-empty strictly decreasing list",
        });
    }
    let cfg = ResponseConfig::new(omega, p.a)?;
    cfg.validate()?;
    let mut values = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        error::positive("lambda", lambda)?;
        let l2 = lambda * lambda;
        // proper time tau, kernel variable tau / lambda^2
        let breaks = |eps: f64| {
            symmetric_breakpoints(eps, cfg.panel_width, cfg.window)
                .into_iter()
                .map(|s| s * l2)
                .collect::<Vec<_>>()
        };
        let smeared = extrapolate(&cfg, p, breaks, |tau, q| {
            let s = tau / l2;
            Complex64::from_polar(test_fn(tau) / l2, -omega * s) * accelerated_wightman(s, q)
        })?;
        values.push(smeared.value);
    }
    let limit = neville_at_zero(&lambdas.iter().map(|l| l * l).collect::<Vec<_>>(), &values);
    Ok(ConvergenceReport {
        omega,
        lambdas: lambdas.to_vec(),
        values,
        limit,
    })
}

/// Value at `x = 0` of the interpolating polynomial through `(xs, ys)`.
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}
