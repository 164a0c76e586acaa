//! Open-system dynamics driven by quantum noise.
//!
//! Superoperators act on column-stacked density matrices: `vec(X)[i + d*j]
//! = X[i, j]`, so the map `X -> A X B` has matrix `B^T ⊗ A`. Heisenberg
//! generators act on observables, Schrödinger generators (Liouvillians) on
//! states, and the two are related by the trace pairing
//! `tr(L*(rho) X) = tr(rho L(X))`.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{self, Error, Result};
use crate::linalg::{self, real, Matrix, Vector};

/// Tolerance on `S*S = I` and `H = H*` for triples.
pub const TRIPLE_TOLERANCE: f64 = 1e-10;
/// Input density matrices whose trace deviates further than this are
/// rejected rather than renormalized.
pub const TRACE_TOLERANCE: f64 = 1e-6;
const HERMITICITY_TOLERANCE: f64 = 1e-10;
const POSITIVITY_TOLERANCE: f64 = 1e-10;

/// Scattering, coupling and Hamiltonian operators `(S, L, H)` of a unitary
/// quantum stochastic evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct HPTriple {
    s: Matrix,
    l: Matrix,
    h: Matrix,
}

impl HPTriple {
    pub fn new(s: Matrix, l: Matrix, h: Matrix) -> Result<Self> {
        let t = Self { s, l, h };
        t.validate()?;
        Ok(t)
    }

    /// Triple with `S = I`.
    pub fn with_coupling(l: Matrix, h: Matrix) -> Result<Self> {
        let d = linalg::ensure_square(&l)?;
        Self::new(linalg::identity(d), l, h)
    }

    pub fn validate(&self) -> Result<()> {
        let d = linalg::ensure_square(&self.s)?;
        for m in [&self.l, &self.h] {
            let k = linalg::ensure_square(m)?;
            if k != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: k,
                });
            }
        }
        let u = linalg::unitarity_defect(&self.s);
        if u.is_nan() || u > TRIPLE_TOLERANCE {
            return Err(Error::NotUnitary(u));
        }
        let h = linalg::hermiticity_defect(&self.h);
        if h.is_nan() || h > TRIPLE_TOLERANCE {
            return Err(Error::NotSelfAdjoint(h));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn l(&self) -> &Matrix {
        &self.l
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Picture {
    Heisenberg,
    Schroedinger,
}

impl Picture {
    fn name(self) -> &'static str {
        match self {
            Picture::Heisenberg => "HEISENBERG",
            Picture::Schroedinger => "SCHROEDINGER",
        }
    }

    fn flipped(self) -> Self {
        match self {
            Picture::Heisenberg => Picture::Schroedinger,
            Picture::Schroedinger => Picture::Heisenberg,
        }
    }
}

/// Linear map on `d x d` matrices in column-stacked matrix form.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: Matrix,
    picture: Picture,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: Matrix, picture: Picture) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.nrows(),
            });
        }
        Ok(Self {
            dim,
            matrix,
            picture,
        })
    }

    pub fn zero(dim: usize, picture: Picture) -> Self {
        Self {
            dim,
            matrix: Matrix::zeros(dim * dim, dim * dim),
            picture,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn apply(&self, x: &Matrix) -> Matrix {
        linalg::unvectorize(&(&self.matrix * linalg::vectorize(x)), self.dim)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            matrix: &self.matrix * real(factor),
            picture: self.picture,
        }
    }

    /// Entrywise max-abs distance between two superoperators.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        linalg::max_abs(&(&self.matrix - &other.matrix))
    }

    fn add_sandwich(&mut self, left: &Matrix, right: &Matrix, weight: Complex64) {
        self.matrix += right.transpose().kronecker(left) * weight;
    }

    fn require(&self, picture: Picture) -> Result<()> {
        if self.picture == picture {
            Ok(())
        } else {
            Err(Error::WrongPicture {
                expected: picture.name(),
                found: self.picture.name(),
            })
        }
    }
}

/// Positive semidefinite, unit-trace state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Matrix);

impl DensityMatrix {
    pub fn new(rho: Matrix) -> Result<Self> {
        let d = linalg::ensure_square(&rho)?;
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entries".into()));
        }
        let herm = linalg::hermiticity_defect(&rho);
        if herm > HERMITICITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = linalg::trace(&rho);
        if (tr - linalg::ONE).norm() > TRACE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} differs from 1",
                tr.re
            )));
        }
        if d > 0 {
            let min = linalg::hermitian_eigenvalues(&rho)[0];
            if min < -POSITIVITY_TOLERANCE {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(Self(rho))
    }

    /// Pure state `|k><k|`.
    pub fn basis_state(d: usize, k: usize) -> Self {
        let mut m = linalg::zeros(d);
        m[(k, k)] = linalg::ONE;
        Self(m)
    }

    /// Two-level state from excited population and coherence `<e|rho|g>`.
    pub fn qubit(rho_ee: f64, rho_eg: Complex64) -> Result<Self> {
        Self::new(Matrix::from_row_slice(
            2,
            2,
            &[real(1.0 - rho_ee), rho_eg.conj(), rho_eg, real(rho_ee)],
        ))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
}

/// Complex amplitude of a coherent input field as a function of time.
#[derive(Clone)]
pub struct CoherentAmplitude {
    profile: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    horizon: f64,
    norm_squared: f64,
}

impl fmt::Debug for CoherentAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoherentAmplitude")
            .field("horizon", &self.horizon)
            .field("norm_squared", &self.norm_squared)
            .finish()
    }
}

impl CoherentAmplitude {
    /// Amplitude on `[0, horizon]`; fails if `int |alpha|^2` is not finite.
    pub fn new<F>(profile: F, horizon: f64) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        error::non_negative("horizon", horizon)?;
        let norm_squared =
            crate::quadrature::integrate(|t| profile(t).norm_sqr(), 0.0, horizon, 64);
        if !norm_squared.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: norm_squared,
                reason: "squared norm must be finite",
            });
        }
        Ok(Self {
            profile: Arc::new(profile),
            horizon,
            norm_squared,
        })
    }

    pub fn constant(alpha: Complex64, horizon: f64) -> Result<Self> {
        Self::new(move |_| alpha, horizon)
    }

    pub fn at(&self, tau: f64) -> Complex64 {
        (self.profile)(tau)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn norm_squared(&self) -> f64 {
        self.norm_squared
    }

    /// The same field seen from a frame where the rest-frame proper time
    /// runs slow by `gamma_v`: `alpha(t) = alpha_rest(t / gamma_v) / sqrt(gamma_v)`.
    pub fn in_frame(&self, gamma_v: f64) -> Result<Self> {
        let g = lorentz_factor(gamma_v)?;
        let rest = self.profile.clone();
        Self::new(move |t| rest(t / g) / g.sqrt(), self.horizon * g)
    }
}

/// Thermal damping channel of rate `rate`, occupation `n` and frequency
/// `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalChannel {
    pub rate: f64,
    pub n: f64,
    pub omega: f64,
}

impl ThermalChannel {
    pub fn new(rate: f64, n: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            rate: error::positive("rate", rate)?,
            n: error::non_negative("n", n)?,
            omega: error::positive("omega", omega)?,
        })
    }

    /// Two-level detector channel with rate `omega / 4 pi`.
    pub fn detector(n: f64, omega: f64) -> Result<Self> {
        Self::new(omega / (4.0 * PI), n, omega)
    }
}

fn lorentz_factor(gamma_v: f64) -> Result<f64> {
    if gamma_v.is_finite() && gamma_v >= 1.0 {
        Ok(gamma_v)
    } else {
        Err(Error::InvalidParameter {
            name: "gamma_v",
            value: gamma_v,
            reason: "must be >= 1",
        })
    }
}

/// Coefficients of a triple given in the rest frame, as seen from a frame
/// in which the system moves with Lorentz factor `gamma_v`.
pub fn transform_triple(t: &HPTriple, gamma_v: f64) -> Result<HPTriple> {
    let g = lorentz_factor(gamma_v)?;
    HPTriple::new(
        t.s.clone(),
        &t.l * real(1.0 / g.sqrt()),
        &t.h * real(1.0 / g),
    )
}

/// Heisenberg generator `L(X) = -i[X, H] + (1/2)[L*, X]L + (1/2)L*[X, L]`.
pub fn lindblad(t: &HPTriple) -> Result<Superoperator> {
    t.validate()?;
    let d = t.dim();
    let id = linalg::identity(d);
    let l_dag = t.l.adjoint();
    let ldl = &l_dag * &t.l;
    let mut g = Superoperator::zero(d, Picture::Heisenberg);
    g.add_sandwich(&id, &t.h, -linalg::I);
    g.add_sandwich(&t.h, &id, linalg::I);
    g.add_sandwich(&l_dag, &t.l, linalg::ONE);
    g.add_sandwich(&ldl, &id, real(-0.5));
    g.add_sandwich(&id, &ldl, real(-0.5));
    Ok(g)
}

/// Generators in the rest frame, in frame `K` and in frame `K'`, related
/// by `L_rest dtau = L dt = L' dt'`.
pub fn scale_lindblad(
    t_rest: &HPTriple,
    gamma_v: f64,
    zeta_uv: f64,
) -> Result<(Superoperator, Superoperator, Superoperator)> {
    let g = lorentz_factor(gamma_v)?;
    let zeta = error::positive("zeta_uv", zeta_uv)?;
    let rest = lindblad(t_rest)?;
    let lab = rest.scaled(1.0 / g);
    let moving = lab.scaled(1.0 / zeta);
    Ok((rest, lab, moving))
}

/// Triple modelling a coherent input of instantaneous amplitude `alpha`:
/// `L -> L + S alpha`, `H -> H + (L* alpha - L alpha*) / 2i`.
pub fn coherent_shift(t: &HPTriple, alpha: Complex64) -> Result<HPTriple> {
    let shift = (t.l.adjoint() * alpha - &t.l * alpha.conj()) * Complex64::new(0.0, -0.5);
    HPTriple::new(t.s.clone(), &t.l + &t.s * alpha, &t.h + shift)
}

/// Heisenberg generator with a coherent input of amplitude `alpha`:
/// `|alpha|^2 (S*XS - X) + alpha* S*[X, L] + alpha [L*, X] S + L(X)`.
pub fn coherent_lindblad(t: &HPTriple, alpha: Complex64) -> Result<Superoperator> {
    let mut g = lindblad(t)?;
    let d = t.dim();
    let id = linalg::identity(d);
    let s_dag = t.s.adjoint();
    let l_dag = t.l.adjoint();
    let a2 = real(alpha.norm_sqr());
    g.add_sandwich(&s_dag, &t.s, a2);
    g.add_sandwich(&id, &id, -a2);
    // alpha* (S* X L - S* L X)
    g.add_sandwich(&s_dag, &t.l, alpha.conj());
    g.add_sandwich(&(&s_dag * &t.l), &id, -alpha.conj());
    // alpha (L* X S - X L* S)
    g.add_sandwich(&l_dag, &t.s, alpha);
    g.add_sandwich(&id, &(&l_dag * &t.s), -alpha);
    Ok(g)
}

/// Schrödinger generator `rho -> rate (n+1) D[down] rho + rate n D[up] rho`
/// with `D[L] rho = L rho L* - {L*L, rho}/2`.
pub fn thermal_lindblad(
    ch: &ThermalChannel,
    collapse_down: &Matrix,
    collapse_up: &Matrix,
) -> Result<Superoperator> {
    let d = linalg::ensure_square(collapse_down)?;
    thermal_lindblad_with_hamiltonian(ch, collapse_down, collapse_up, &linalg::zeros(d))
}

/// As [`thermal_lindblad`] with an added coherent term `-i[h0, rho]`.
pub fn thermal_lindblad_with_hamiltonian(
    ch: &ThermalChannel,
    collapse_down: &Matrix,
    collapse_up: &Matrix,
    h0: &Matrix,
) -> Result<Superoperator> {
    let ch = ThermalChannel::new(ch.rate, ch.n, ch.omega)?;
    let d = linalg::ensure_square(collapse_down)?;
    for m in [collapse_up, h0] {
        let k = linalg::ensure_square(m)?;
        if k != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k,
            });
        }
    }
    let herm = linalg::hermiticity_defect(h0);
    if herm > TRIPLE_TOLERANCE {
        return Err(Error::NotSelfAdjoint(herm));
    }
    let id = linalg::identity(d);
    let mut g = Superoperator::zero(d, Picture::Schroedinger);
    g.add_sandwich(h0, &id, -linalg::I);
    g.add_sandwich(&id, h0, linalg::I);
    for (l, weight) in [
        (collapse_down, ch.rate * (ch.n + 1.0)),
        (collapse_up, ch.rate * ch.n),
    ] {
        if weight == 0.0 {
            continue;
        }
        let l_dag = l.adjoint();
        let ldl = &l_dag * l;
        g.add_sandwich(l, &l_dag, real(weight));
        g.add_sandwich(&ldl, &id, real(-0.5 * weight));
        g.add_sandwich(&id, &ldl, real(-0.5 * weight));
    }
    Ok(g)
}

/// Liouvillian of the two-level detector: decay `sigma_-` at rate
/// `(n+1) omega / 4 pi` and excitation `sigma_+` at rate `n omega / 4 pi`.
pub fn detector_generator(n: f64, omega: f64) -> Result<Superoperator> {
    let ch = ThermalChannel::detector(n, omega)?;
    thermal_lindblad(&ch, &linalg::sigma_minus(), &linalg::sigma_plus())
}

/// Liouvillian of an oscillator mode truncated at `cutoff` levels, damped
/// at rate `rate` towards occupation `n`. With `free_evolution`, the term
/// `-i[omega c*c, rho]` is included.
pub fn oscillator_generator(
    cutoff: usize,
    rate: f64,
    n: f64,
    omega: f64,
    free_evolution: bool,
) -> Result<Superoperator> {
    if cutoff < 2 {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            value: cutoff as f64,
            reason: "must be at least 2",
        });
    }
    let ch = ThermalChannel::new(rate, n, omega)?;
    let a = linalg::annihilation(cutoff);
    let h0 = if free_evolution {
        linalg::number(cutoff) * real(omega)
    } else {
        linalg::zeros(cutoff)
    };
    thermal_lindblad_with_hamiltonian(&ch, &a, &a.adjoint(), &h0)
}

/// Adjoint with respect to the pairing `tr(A B)`; flips the picture.
///
/// With `P vec(X) = vec(X^T)`, the adjoint of `M` is `P M^T P`.
pub fn liouvillian_adjoint(g: &Superoperator) -> Superoperator {
    let d = g.dim;
    let perm = |k: usize| (k % d) * d + k / d;
    let m = &g.matrix;
    let matrix = Matrix::from_fn(d * d, d * d, |r, c| m[(perm(c), perm(r))]);
    Superoperator {
        dim: d,
        matrix,
        picture: g.picture.flipped(),
    }
}

/// One sample of a state trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub rho: Matrix,
    /// `Re tr(rho) - 1`.
    pub trace_drift: f64,
}

/// Sequence of states at uniformly spaced times, starting with the
/// initial state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

pub const TRAJECTORY_CSV_HEADER: &str = "tau,rho_ee,rho_gg,re_rho_eg,im_rho_eg,trace_drift";

impl Trajectory {
    fn push(&mut self, tau: f64, rho: Matrix) {
        let trace_drift = linalg::trace(&rho).re - 1.0;
        self.points.push(TrajectoryPoint {
            tau,
            rho,
            trace_drift,
        });
    }

    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.trace_drift.abs())
            .fold(0.0, f64::max)
    }

    /// Writes a two-level trajectory in the CSV schema
    /// `tau,rho_ee,rho_gg,re_rho_eg,im_rho_eg,trace_drift`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{TRAJECTORY_CSV_HEADER}")?;
        for p in &self.points {
            if p.rho.nrows() != 2 {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidInput,
                    "trajectory CSV requires a two-level state",
                ));
            }
            let eg = p.rho[(1, 0)];
            writeln!(
                w,
                "{},{},{},{},{},{}",
                p.tau,
                p.rho[(1, 1)].re,
                p.rho[(0, 0)].re,
                eg.re,
                eg.im,
                p.trace_drift
            )?;
        }
        Ok(())
    }
}

/// Nonzero entries of a generator, for fast repeated application.
struct SparseGenerator {
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseGenerator {
    fn new(m: &Matrix) -> Self {
        let rows = (0..m.nrows())
            .map(|r| {
                (0..m.ncols())
                    .filter_map(|c| {
                        let z = m[(r, c)];
                        (z != linalg::ZERO).then_some((c, z))
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    fn apply(&self, v: &Vector) -> Vector {
        Vector::from_iterator(
            self.rows.len(),
            self.rows
                .iter()
                .map(|row| row.iter().map(|(c, z)| z * v[*c]).sum::<Complex64>()),
        )
    }
}

fn rk4_step(g: &SparseGenerator, v: &Vector, h: f64) -> Vector {
    let hc = real(h);
    let k1 = g.apply(v);
    let k2 = g.apply(&(v + &k1 * (hc * 0.5)));
    let k3 = g.apply(&(v + &k2 * (hc * 0.5)));
    let k4 = g.apply(&(v + &k3 * hc));
    v + (k1 + k2 * real(2.0) + k3 * real(2.0) + k4) * (hc / 6.0)
}

fn check_steps(tau: f64, steps: usize) -> Result<f64> {
    error::non_negative("tau", tau)?;
    if steps == 0 {
        return Err(Error::InvalidParameter {
            name: "steps",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    Ok(tau / steps as f64)
}

/// Integrates `d rho / d tau = g(rho)` with fixed-step fourth-order
/// Runge-Kutta, returning `steps + 1` states including `rho0`.
///
/// The trace is not renormalized; its drift is recorded per point.
pub fn evolve_master(
    g: &Superoperator,
    rho0: &DensityMatrix,
    tau: f64,
    steps: usize,
) -> Result<Trajectory> {
    g.require(Picture::Schroedinger)?;
    if rho0.dim() != g.dim {
        return Err(Error::DimensionMismatch {
            expected: g.dim,
            found: rho0.dim(),
        });
    }
    let h = check_steps(tau, steps)?;
    let sparse = SparseGenerator::new(&g.matrix);
    let mut traj = Trajectory::default();
    let mut v = linalg::vectorize(rho0.matrix());
    traj.push(0.0, rho0.matrix().clone());
    for step in 1..=steps {
        v = rk4_step(&sparse, &v, h);
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        traj.push(step as f64 * h, linalg::unvectorize(&v, g.dim));
    }
    Ok(traj)
}

/// Integrates the master equation for a coherently driven triple, holding
/// the amplitude fixed at its value at the start of each step.
pub fn evolve_coherent(
    t: &HPTriple,
    alpha: &CoherentAmplitude,
    rho0: &DensityMatrix,
    tau: f64,
    steps: usize,
) -> Result<Trajectory> {
    let h = check_steps(tau, steps)?;
    let d = t.dim();
    let mut traj = Trajectory::default();
    let mut v = linalg::vectorize(rho0.matrix());
    traj.push(0.0, rho0.matrix().clone());
    for step in 1..=steps {
        let now = (step - 1) as f64 * h;
        let g = liouvillian_adjoint(&coherent_lindblad(t, alpha.at(now))?);
        v = rk4_step(&SparseGenerator::new(&g.matrix), &v, h);
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        traj.push(step as f64 * h, linalg::unvectorize(&v, d));
    }
    Ok(traj)
}

/// Closed-form detector state at proper time `tau` for occupation `n` and
/// detector frequency `omega`.
pub fn detector_exact(rho0: &DensityMatrix, tau: f64, n: f64, omega: f64) -> Result<DensityMatrix> {
    if rho0.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho0.dim(),
        });
    }
    error::non_negative("tau", tau)?;
    error::non_negative("n", n)?;
    error::positive("omega", omega)?;
    let r = rho0.matrix();
    let excited_eq = n / (2.0 * n + 1.0);
    let population_decay = (-(2.0 * n + 1.0) * omega * tau / (4.0 * PI)).exp();
    let coherence_decay = (-(2.0 * n + 1.0) * omega * tau / (8.0 * PI)).exp();
    let ee = excited_eq + (r[(1, 1)].re - excited_eq) * population_decay;
    let eg = r[(1, 0)] * coherence_decay;
    Ok(DensityMatrix(Matrix::from_row_slice(
        2,
        2,
        &[real(1.0 - ee), eg.conj(), eg, real(ee)],
    )))
}

/// Bose occupation `1 / (exp(2 pi omega / a) - 1)` at the Unruh temperature.
pub fn bose_occupation(omega: f64, a: f64) -> Result<f64> {
    error::positive("omega", omega)?;
    let beta = crate::kinematics::unruh_beta(a)?;
    Ok(1.0 / (beta * omega).exp_m1())
}

/// Fixed point of the detector generator: `diag(rho_gg, rho_ee) =
/// ((n+1)/(2n+1), n/(2n+1))`.
pub fn thermal_steady_state(n: f64) -> Result<DensityMatrix> {
    error::non_negative("n", n)?;
    let ee = n / (2.0 * n + 1.0);
    Ok(DensityMatrix(Matrix::from_diagonal(&Vector::from_vec(
        vec![real(1.0 - ee), real(ee)],
    ))))
}

/// Gibbs state of an oscillator truncated at `cutoff` levels with
/// populations proportional to `(n/(n+1))^k`.
pub fn truncated_gibbs(cutoff: usize, n: f64) -> Result<DensityMatrix> {
    error::non_negative("n", n)?;
    let ratio = n / (n + 1.0);
    let weights: Vec<f64> = (0..cutoff).map(|k| ratio.powi(k as i32)).collect();
    let z: f64 = weights.iter().sum();
    Ok(DensityMatrix(Matrix::from_diagonal(
        &Vector::from_iterator(cutoff, weights.iter().map(|w| real(w / z))),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs, sigma_minus, sigma_plus, sigma_z, zeros};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_triple(d: usize, rng: &mut ChaCha8Rng) -> HPTriple {
        HPTriple::new(
            linalg::random_unitary(d, rng),
            linalg::random_ginibre(d, rng),
            linalg::random_hermitian(d, rng),
        )
        .unwrap()
    }

    #[test]
    fn triple_validation() {
        assert!(matches!(
            HPTriple::new(identity(2) * real(2.0), zeros(2), zeros(2)),
            Err(Error::NotUnitary(_))
        ));
        assert!(matches!(
            HPTriple::new(identity(2), zeros(2), sigma_minus()),
            Err(Error::NotSelfAdjoint(_))
        ));
        assert!(matches!(
            HPTriple::new(identity(2), zeros(3), zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transform_triple_examples() {
        let t = HPTriple::new(sigma_z(), sigma_minus() * real(2.0), sigma_z()).unwrap();
        assert_eq!(transform_triple(&t, 1.0).unwrap(), t);
        let moved = transform_triple(&t, 4.0).unwrap();
        assert_eq!(moved.l(), &sigma_minus());
        assert_eq!(moved.s(), t.s());
        let moved = transform_triple(&t, 1.25).unwrap();
        assert!(max_abs(&(moved.h() - sigma_z() * real(0.8))) < 1e-15);
        assert!(transform_triple(&t, 0.9).is_err());
    }

    #[test]
    fn lindblad_examples() {
        let rotate = HPTriple::with_coupling(zeros(2), sigma_z() * real(0.5)).unwrap();
        let out = lindblad(&rotate).unwrap().apply(&sigma_plus());
        assert!(max_abs(&(out - sigma_plus() * linalg::I)) < 1e-15);

        let decay = HPTriple::with_coupling(sigma_minus(), zeros(2)).unwrap();
        let pe = sigma_plus() * sigma_minus();
        let out = lindblad(&decay).unwrap().apply(&pe);
        assert!(max_abs(&(out + &pe)) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2, 3, 4] {
            let g = lindblad(&random_triple(d, &mut rng)).unwrap();
            assert_eq!(g.picture(), Picture::Heisenberg);
            assert!(max_abs(&g.apply(&identity(d))) < 1e-12);
        }
    }

    #[test]
    fn lindblad_matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = random_triple(3, &mut rng);
        let x = linalg::random_ginibre(3, &mut rng);
        let (l, h) = (t.l(), t.h());
        let l_dag = l.adjoint();
        let direct = -(&x * h - h * &x) * linalg::I
            + (&l_dag * &x - &x * &l_dag) * l * real(0.5)
            + &l_dag * (&x * l - l * &x) * real(0.5);
        assert!(max_abs(&(lindblad(&t).unwrap().apply(&x) - direct)) < 1e-12);
    }

    #[test]
    fn scale_lindblad_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_triple(2, &mut rng);
        let (rest, lab, moving) = scale_lindblad(&t, 1.25, 1.0).unwrap();
        assert!(lab.max_abs_diff(&rest.scaled(0.8)) < 1e-15);
        assert_eq!(lab, moving);
        for gamma in [1.0, 1.25, 2.0] {
            let via_triple = lindblad(&transform_triple(&t, gamma).unwrap()).unwrap();
            let (_, lab, _) = scale_lindblad(&t, gamma, 0.7).unwrap();
            assert!(via_triple.max_abs_diff(&lab) < 1e-12);
        }
        assert!(scale_lindblad(&t, 0.5, 1.0).is_err());
        assert!(scale_lindblad(&t, 1.5, 0.0).is_err());
    }

    #[test]
    fn coherent_shift_examples() {
        let t = HPTriple::with_coupling(sigma_minus(), zeros(2)).unwrap();
        assert_eq!(coherent_shift(&t, linalg::ZERO).unwrap(), t);
        let shifted = coherent_shift(&t, linalg::ONE).unwrap();
        assert_eq!(shifted.l(), &(sigma_minus() + identity(2)));
        let expected = (sigma_plus() - sigma_minus()) * Complex64::new(0.0, -0.5);
        assert!(max_abs(&(shifted.h() - expected)) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let t = random_triple(3, &mut rng);
            let alpha = linalg::c(0.7, -1.3);
            let h = coherent_shift(&t, alpha).unwrap();
            assert!(linalg::hermiticity_defect(h.h()) < 1e-12);
        }
    }

    #[test]
    fn coherent_lindblad_reduces_to_vacuum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = random_triple(2, &mut rng);
        let g = coherent_lindblad(&t, linalg::ZERO).unwrap();
        assert!(g.max_abs_diff(&lindblad(&t).unwrap()) < 1e-15);
    }

    #[test]
    fn coherent_lindblad_scattering_term_vanishes_for_identity() {
        // with S = I the |alpha|^2 term cancels; the rest is the shifted triple
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let t = HPTriple::with_coupling(
            linalg::random_ginibre(2, &mut rng),
            linalg::random_hermitian(2, &mut rng),
        )
        .unwrap();
        for alpha in [linalg::c(0.5, 0.1), linalg::c(-2.0, 3.0)] {
            let g = coherent_lindblad(&t, alpha).unwrap();
            let shifted = lindblad(&coherent_shift(&t, alpha).unwrap()).unwrap();
            assert!(g.max_abs_diff(&shifted) < 1e-12);
        }
    }

    #[test]
    fn detector_decay_at_zero_temperature() {
        let omega = 2.0;
        let g = detector_generator(0.0, omega).unwrap();
        let rho0 = DensityMatrix::basis_state(2, 1);
        let traj = evolve_master(&g, &rho0, 3.0, 3000).unwrap();
        let ee = traj.last().unwrap().rho[(1, 1)].re;
        assert!((ee - (-omega * 3.0 / (4.0 * PI)).exp()).abs() < 1e-12);
    }

    #[test]
    fn oscillator_fixed_point_is_geometric() {
        let g = oscillator_generator(20, 1.0, 0.5, 1.0, true).unwrap();
        let gibbs = truncated_gibbs(20, 0.5).unwrap();
        assert!(max_abs(&g.apply(gibbs.matrix())) < 1e-14);
        let p = gibbs.matrix();
        for k in 1..20 {
            assert!((p[(k, k)].re / p[(k - 1, k - 1)].re - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn schroedinger_generators_annihilate_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = detector_generator(0.7, 3.0).unwrap();
        for _ in 0..10 {
            let rho = linalg::random_density(2, &mut rng);
            assert!(linalg::trace(&g.apply(&rho)).norm() < 1e-14);
        }
        let g = oscillator_generator(6, 0.3, 1.2, 2.0, true).unwrap();
        let vec_id = linalg::vectorize(&identity(6));
        let trace_form = vec_id.transpose() * g.matrix();
        assert!(trace_form.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn adjoint_is_involutive_and_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = random_triple(3, &mut rng);
        let heis = lindblad(&t).unwrap();
        let schr = liouvillian_adjoint(&heis);
        assert_eq!(schr.picture(), Picture::Schroedinger);
        assert!(liouvillian_adjoint(&schr).max_abs_diff(&heis) < 1e-14);
        for _ in 0..10 {
            let rho = linalg::random_density(3, &mut rng);
            let x = linalg::random_ginibre(3, &mut rng);
            let lhs = linalg::trace(&(schr.apply(&rho) * &x));
            let rhs = linalg::trace(&(&rho * heis.apply(&x)));
            assert!((lhs - rhs).norm() < 1e-12);
            assert!(linalg::trace(&schr.apply(&rho)).norm() < 1e-12);
        }
    }

    #[test]
    fn evolve_master_examples() {
        let g = Superoperator::zero(2, Picture::Schroedinger);
        let rho0 = DensityMatrix::qubit(0.3, linalg::c(0.1, 0.2)).unwrap();
        let traj = evolve_master(&g, &rho0, 1.0, 10).unwrap();
        assert_eq!(traj.points.len(), 11);
        assert!(traj.points.iter().all(|p| p.rho == *rho0.matrix()));

        let g = detector_generator(1.0, 4.0 * PI).unwrap();
        let traj = evolve_master(&g, &DensityMatrix::basis_state(2, 0), 1.0, 1000).unwrap();
        let ee = traj.last().unwrap().rho[(1, 1)].re;
        assert!((ee - (1.0 - (-3.0f64).exp()) / 3.0).abs() < 1e-12);
        assert!((ee - 0.316_738).abs() < 1e-6);
    }

    #[test]
    fn evolve_master_is_fourth_order() {
        let (n, omega, tau) = (1.0, 4.0 * PI, 1.0);
        let g = detector_generator(n, omega).unwrap();
        let rho0 = DensityMatrix::qubit(0.2, linalg::c(0.3, -0.1)).unwrap();
        let exact = detector_exact(&rho0, tau, n, omega).unwrap();
        let err = |steps| {
            let traj = evolve_master(&g, &rho0, tau, steps).unwrap();
            linalg::trace_distance(&traj.last().unwrap().rho, exact.matrix())
        };
        let ratio = err(20) / err(40);
        assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
    }

    #[test]
    fn evolve_master_rejects_bad_input() {
        let heis = lindblad(&HPTriple::with_coupling(sigma_minus(), zeros(2)).unwrap()).unwrap();
        let rho0 = DensityMatrix::basis_state(2, 0);
        assert!(matches!(
            evolve_master(&heis, &rho0, 1.0, 10),
            Err(Error::WrongPicture { .. })
        ));
        let g = liouvillian_adjoint(&heis);
        assert!(evolve_master(&g, &rho0, 1.0, 0).is_err());
        assert!(evolve_master(&g, &rho0, -1.0, 10).is_err());
        assert!(evolve_master(&g, &DensityMatrix::basis_state(3, 0), 1.0, 10).is_err());
        // explosive generator
        let boom = Superoperator::from_matrix(2, identity(4) * real(1e300), Picture::Schroedinger)
            .unwrap();
        assert!(matches!(
            evolve_master(&boom, &rho0, 1.0, 10),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(identity(2)).is_err());
        assert!(DensityMatrix::new(sigma_minus() + identity(2) * real(0.5)).is_err());
        let negative = Matrix::from_diagonal(&Vector::from_vec(vec![real(1.5), real(-0.5)]));
        assert!(DensityMatrix::new(negative).is_err());
        assert!(DensityMatrix::new(identity(2) * real(0.5)).is_ok());
        // slightly off trace is rejected, not renormalized
        assert!(DensityMatrix::new(identity(2) * real(0.5 + 1e-5)).is_err());
    }

    #[test]
    fn detector_exact_examples() {
        let rho0 = DensityMatrix::qubit(0.8, linalg::c(0.2, 0.1)).unwrap();
        assert_eq!(detector_exact(&rho0, 0.0, 1.0, 3.0).unwrap(), rho0);
        let omega = 2.5;
        let late = detector_exact(&rho0, 1e3 / omega * 4.0 * PI, 1.0, omega).unwrap();
        assert!((late.matrix()[(1, 1)].re - 1.0 / 3.0).abs() < 1e-12);
        let rho0 = DensityMatrix::qubit(0.5, real(0.5)).unwrap();
        let r = detector_exact(&rho0, 1.0, 1.0, 4.0 * PI).unwrap();
        assert!((r.matrix()[(1, 0)].re - 0.5 * (-1.5f64).exp()).abs() < 1e-15);
        assert!((r.matrix()[(1, 0)].re - 0.111_565).abs() < 1e-6);
        assert!(detector_exact(&DensityMatrix::basis_state(3, 0), 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn bose_occupation_examples() {
        let a = 2.0 * PI;
        let omega = 2.0f64.ln();
        assert!((bose_occupation(omega, a).unwrap() - 1.0).abs() < 1e-14);
        let omega = 0.3;
        let n = bose_occupation(omega, 1e6 * omega).unwrap();
        let high_temperature = 1e6 / (2.0 * PI);
        assert!((n / high_temperature - 1.0).abs() < 0.01);
        let n = bose_occupation(21.0 / (2.0 * PI), 1.0).unwrap();
        assert!(n < 1e-8);
        assert!(bose_occupation(0.0, 1.0).is_err());
        assert!(bose_occupation(1.0, 0.0).is_err());
    }

    #[test]
    fn thermal_steady_state_examples() {
        let ground = thermal_steady_state(0.0).unwrap();
        assert_eq!(ground, DensityMatrix::basis_state(2, 0));
        let s = thermal_steady_state(1.0).unwrap();
        assert!((s.matrix()[(0, 0)].re - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.matrix()[(1, 1)].re - 1.0 / 3.0).abs() < 1e-15);
        for n in [0.1, 1.0, 10.0] {
            let g = detector_generator(n, 1.7).unwrap();
            let s = thermal_steady_state(n).unwrap();
            assert!(max_abs(&g.apply(s.matrix())) < 1e-12);
        }
    }

    #[test]
    fn coherent_amplitude_frames() {
        let alpha = CoherentAmplitude::new(|t| linalg::c((-t).exp(), 0.0), 20.0).unwrap();
        assert!((alpha.norm_squared() - 0.5).abs() < 1e-9);
        // the photon number is frame independent
        let lab = alpha.in_frame(1.25).unwrap();
        assert!((lab.norm_squared() - alpha.norm_squared()).abs() < 1e-9);
        assert!((lab.at(1.25) - alpha.at(1.0) / 1.25f64.sqrt()).norm() < 1e-15);
        assert!(CoherentAmplitude::new(|_| linalg::c(f64::INFINITY, 0.0), 1.0).is_err());
    }

    #[test]
    fn driven_two_level_reaches_resonance_fluorescence_steady_state() {
        // unit decay rate, coherent input alpha drives at Rabi frequency
        // 2|alpha|: rho_ee -> 4 alpha^2 / (1 + 8 alpha^2)
        let t = HPTriple::with_coupling(sigma_minus(), zeros(2)).unwrap();
        let alpha = CoherentAmplitude::constant(linalg::c(0.5, 0.0), 40.0).unwrap();
        let traj =
            evolve_coherent(&t, &alpha, &DensityMatrix::basis_state(2, 0), 40.0, 4000).unwrap();
        assert!(traj.max_trace_drift() < 1e-12);
        let ee = traj.last().unwrap().rho[(1, 1)].re;
        assert!((ee - 1.0 / 3.0).abs() < 1e-6, "{ee}");
    }
}
