//! Finite-dimensional representation of quantum noise.
//!
//! Each time slice of length `dtau` carries its own truncated Fock space.
//! Thermal increments live on a doubled slice `F1 ⊗ F2` through
//! `dA = sqrt(n+1) dB1 ⊗ I + sqrt(n) I ⊗ dB2*`, whose joint vacuum
//! reproduces the thermal Itō table. A quantum stochastic evolution is
//! realised as a collision model: the system meets a fresh slice in its
//! vacuum, interacts for one step, and the slice is traced out.

use serde::Serialize;

use crate::error::{self, Error, Result};
use crate::linalg::{self, real, Matrix};
use crate::open_system::{DensityMatrix, Trajectory};

/// Largest total dimension a single-slice construction may allocate.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// Annihilator of one truncated Fock mode.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedFock {
    cutoff: usize,
    a: Matrix,
}

impl TruncatedFock {
    pub fn new(cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff)?;
        Ok(Self {
            cutoff,
            a: linalg::annihilation(cutoff),
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn annihilator(&self) -> &Matrix {
        &self.a
    }

    pub fn creator(&self) -> Matrix {
        self.a.adjoint()
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "cutoff",
            value: cutoff as f64,
            reason: "slice cutoff must be at least 2",
        })
    }
}

/// Thermal increment `dA` on one doubled slice, together with its adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalIncrement {
    pub n: f64,
    pub dtau: f64,
    cutoff: usize,
    annihilation: Matrix,
    creation: Matrix,
}

/// Vacuum expectations of the four quadratic products of an increment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncrementMoments {
    /// `<dA dA*>`
    pub annihilation_creation: f64,
    /// `<dA* dA>`
    pub creation_annihilation: f64,
    /// `|<dA dA>|`
    pub annihilation_annihilation: f64,
    /// `|<dA* dA*>|`
    pub creation_creation: f64,
}

impl ThermalIncrement {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Dimension of the doubled slice space.
    pub fn slice_dim(&self) -> usize {
        self.cutoff * self.cutoff
    }

    pub fn annihilation(&self) -> &Matrix {
        &self.annihilation
    }

    pub fn creation(&self) -> &Matrix {
        &self.creation
    }

    /// Vacuum expectations; the joint vacuum `|0>⊗|0>` is basis index 0.
    pub fn vacuum_moments(&self) -> IncrementMoments {
        let (a, ad) = (&self.annihilation, &self.creation);
        let vac = |m: Matrix| m[(0, 0)];
        IncrementMoments {
            annihilation_creation: vac(a * ad).re,
            creation_annihilation: vac(ad * a).re,
            annihilation_annihilation: vac(a * a).norm(),
            creation_creation: vac(ad * ad).norm(),
        }
    }
}

/// Builds `dA = sqrt(n+1) sqrt(dtau) a1 ⊗ I + sqrt(n) sqrt(dtau) I ⊗ a2*`.
pub fn thermal_increment(n: f64, dtau: f64, cutoff: usize) -> Result<ThermalIncrement> {
    error::non_negative("n", n)?;
    error::positive("dtau", dtau)?;
    let mode = TruncatedFock::new(cutoff)?;
    let id = linalg::identity(cutoff);
    let db = mode.annihilator() * real(dtau.sqrt());
    let annihilation = linalg::kron(&db, &id) * real((n + 1.0).sqrt())
        + linalg::kron(&id, &db.adjoint()) * real(n.sqrt());
    let creation = annihilation.adjoint();
    Ok(ThermalIncrement {
        n,
        dtau,
        cutoff,
        annihilation,
        creation,
    })
}

/// Moments of the candidate counting increment `dA* dA` in the thermal
/// vacuum: `(mean, second moment)`.
///
/// A gauge process would need `<dΛ dΛ> = <dΛ>` at first order in `dtau`;
/// here the mean is `n dtau` while the second moment is `n(2n+1) dtau^2`,
/// so the variance is `n(n+1) dtau^2` and no such table entry exists.
pub fn counting_moments(n: f64, dtau: f64, cutoff: usize) -> Result<(f64, f64)> {
    let inc = thermal_increment(n, dtau, cutoff)?;
    let count = &inc.creation * &inc.annihilation;
    let mean = count[(0, 0)].re;
    let second = (&count * &count)[(0, 0)].re;
    Ok((mean, second))
}

/// Largest commutator entry between the right and left Rindler noises on a
/// single doubled two-mode slice.
///
/// With modes ordered `(b-, b+) ⊗ (b-, b+)`,
/// `dA_R = sqrt(n+1) b-^(1) + sqrt(n) b+^(2)*` and
/// `dA_L = sqrt(n+1) b+^(1) + sqrt(n) b-^(2)*`. Returns the max-abs entry of
/// `[dA_R, dA_L]` and `[dA_R, dA_L*]`.
pub fn rindler_pair_commutation(n: f64, cutoff: usize) -> Result<f64> {
    rindler_pair_commutation_with_cap(n, cutoff, DEFAULT_DIMENSION_CAP)
}

pub fn rindler_pair_commutation_with_cap(n: f64, cutoff: usize, cap: usize) -> Result<f64> {
    error::non_negative("n", n)?;
    check_cutoff(cutoff)?;
    let dim = cutoff
        .checked_pow(4)
        .filter(|d| *d <= cap)
        .ok_or(Error::DimensionCap {
            dim: cutoff.saturating_pow(4),
            cap,
        })?;
    let b = linalg::annihilation(cutoff);
    let id = linalg::identity(cutoff);
    // mode k of four, each acting on its own tensor factor
    let mode = |k: usize, op: &Matrix| {
        (0..4).fold(linalg::identity(1), |acc, j| {
            linalg::kron(&acc, if j == k { op } else { &id })
        })
    };
    let (minus1, plus1, minus2, plus2) = (0, 1, 2, 3);
    let bd = b.adjoint();
    let (wn, wn1) = (real(n.sqrt()), real((n + 1.0).sqrt()));
    let right = mode(minus1, &b) * wn1 + mode(plus2, &bd) * wn;
    let left = mode(plus1, &b) * wn1 + mode(minus2, &bd) * wn;
    debug_assert_eq!(right.nrows(), dim);
    let c1 = linalg::max_abs(&linalg::commutator(&right, &left));
    let c2 = linalg::max_abs(&linalg::commutator(&right, &left.adjoint()));
    Ok(c1.max(c2))
}

/// Unitary `exp(L ⊗ dA* - L* ⊗ dA)` on system ⊗ slice.
pub fn step_unitary(l_sys: &Matrix, inc: &ThermalIncrement) -> Result<Matrix> {
    linalg::ensure_square(l_sys)?;
    let generator =
        linalg::kron(l_sys, &inc.creation) - linalg::kron(&l_sys.adjoint(), &inc.annihilation);
    let u = linalg::expm(&generator);
    if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { step: 0 });
    }
    Ok(u)
}

/// Kraus operators of one collision: `K_k = <k| U |vac>` over slice basis
/// states `k`.
pub fn collision_kraus(l_sys: &Matrix, inc: &ThermalIncrement) -> Result<Vec<Matrix>> {
    let d = linalg::ensure_square(l_sys)?;
    let s = inc.slice_dim();
    let u = step_unitary(l_sys, inc)?;
    Ok((0..s)
        .map(|k| Matrix::from_fn(d, d, |i, j| u[(i * s + k, j * s)]))
        .collect())
}

/// Collision-model discretization of a thermal quantum stochastic
/// evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub dtau: f64,
    pub steps: usize,
    /// Per-mode cutoff of each doubled slice.
    pub cutoff: usize,
    pub n: f64,
    /// The system couples through `sqrt(rate) * L_sys`.
    pub rate: f64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        error::positive("dtau", self.dtau)?;
        error::non_negative("n", self.n)?;
        error::non_negative("rate", self.rate)?;
        check_cutoff(self.cutoff)?;
        if self.steps == 0 {
            return Err(Error::InvalidParameter {
                name: "steps",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.dtau * self.steps as f64
    }

    /// Collision model of the accelerated detector: coupling `sigma_-` at
    /// rate `omega / 4 pi`.
    pub fn detector(n: f64, omega: f64, dtau: f64, steps: usize) -> Self {
        Self {
            dtau,
            steps,
            cutoff: 2,
            n,
            rate: omega / (4.0 * std::f64::consts::PI),
        }
    }
}

/// Reduced-state trajectory of the collision model, `steps + 1` points.
pub fn simulate_qsde(cfg: &SimConfig, l_sys: &Matrix, rho0: &DensityMatrix) -> Result<Trajectory> {
    simulate_qsde_with_cap(cfg, l_sys, rho0, DEFAULT_DIMENSION_CAP)
}

pub fn simulate_qsde_with_cap(
    cfg: &SimConfig,
    l_sys: &Matrix,
    rho0: &DensityMatrix,
    cap: usize,
) -> Result<Trajectory> {
    cfg.validate()?;
    let d = linalg::ensure_square(l_sys)?;
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho0.dim(),
        });
    }
    let total = d * cfg.cutoff * cfg.cutoff;
    if total > cap {
        return Err(Error::DimensionCap { dim: total, cap });
    }
    let inc = thermal_increment(cfg.n, cfg.dtau, cfg.cutoff)?;
    let coupling = l_sys * real(cfg.rate.sqrt());
    let kraus = collision_kraus(&coupling, &inc)?;
    let kraus_dag: Vec<Matrix> = kraus.iter().map(|k| k.adjoint()).collect();

    let mut traj = Trajectory::default();
    let mut rho = rho0.matrix().clone();
    traj.points.push(point(0.0, rho.clone()));
    for step in 1..=cfg.steps {
        rho = kraus
            .iter()
            .zip(&kraus_dag)
            .fold(linalg::zeros(d), |acc, (k, kd)| acc + k * &rho * kd);
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        traj.points.push(point(step as f64 * cfg.dtau, rho.clone()));
    }
    Ok(traj)
}

fn point(tau: f64, rho: Matrix) -> crate::open_system::TrajectoryPoint {
    let trace_drift = linalg::trace(&rho).re - 1.0;
    crate::open_system::TrajectoryPoint {
        tau,
        rho,
        trace_drift,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, sigma_minus};
    use crate::open_system::detector_exact;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_increment_is_fock_noise() {
        let inc = thermal_increment(0.0, 0.01, 3).unwrap();
        let db = linalg::annihilation(3) * real(0.1);
        let expected = linalg::kron(&db, &linalg::identity(3));
        assert!(max_abs(&(inc.annihilation() - expected)) < 1e-16);
    }

    #[test]
    fn increment_moments() {
        let m = thermal_increment(1.0, 0.01, 2).unwrap().vacuum_moments();
        assert!((m.annihilation_creation - 0.02).abs() < 1e-16);
        assert!((m.creation_annihilation - 0.01).abs() < 1e-16);
        for n in [0.0, 0.3, 2.5] {
            let m = thermal_increment(n, 0.1, 3).unwrap().vacuum_moments();
            assert_eq!(m.annihilation_annihilation, 0.0);
            assert_eq!(m.creation_creation, 0.0);
        }
    }

    #[test]
    fn invalid_increments() {
        assert!(thermal_increment(-1.0, 0.1, 2).is_err());
        assert!(thermal_increment(1.0, 0.0, 2).is_err());
        assert!(thermal_increment(1.0, 0.1, 1).is_err());
    }

    #[test]
    fn rindler_pair_commutes() {
        assert_eq!(rindler_pair_commutation(1.0, 2).unwrap(), 0.0);
        assert_eq!(rindler_pair_commutation(0.0, 2).unwrap(), 0.0);
        assert!(rindler_pair_commutation(0.7, 3).unwrap() < 1e-15);
        assert!(matches!(
            rindler_pair_commutation_with_cap(1.0, 5, 100),
            Err(Error::DimensionCap { dim: 625, cap: 100 })
        ));
    }

    #[test]
    fn step_unitary_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let zero_inc = ThermalIncrement {
            n: 0.0,
            dtau: 1.0,
            cutoff: 2,
            annihilation: linalg::zeros(4),
            creation: linalg::zeros(4),
        };
        let u = step_unitary(&sigma_minus(), &zero_inc).unwrap();
        assert!(max_abs(&(u - linalg::identity(8))) < 1e-15);
        for _ in 0..5 {
            let l = linalg::random_ginibre(2, &mut rng);
            let inc = thermal_increment(0.8, 0.05, 3).unwrap();
            let u = step_unitary(&l, &inc).unwrap();
            assert!(linalg::unitarity_defect(&u) < 1e-12);
        }
    }

    #[test]
    fn single_step_excitation_matches_expansion() {
        let (omega, n, dtau) = (4.0 * PI, 1.0, 1e-3);
        let kappa = omega / (4.0 * PI);
        let cfg = SimConfig::detector(n, omega, dtau, 1);
        let traj = simulate_qsde(&cfg, &sigma_minus(), &DensityMatrix::basis_state(2, 0)).unwrap();
        let gain = traj.last().unwrap().rho[(1, 1)].re;
        assert!((gain - kappa * n * dtau).abs() < 5.0 * (kappa * dtau).powi(2));
    }

    #[test]
    fn zero_coupling_is_static() {
        let cfg = SimConfig {
            dtau: 0.01,
            steps: 50,
            cutoff: 2,
            n: 1.0,
            rate: 0.0,
        };
        let rho0 = DensityMatrix::qubit(0.4, linalg::c(0.1, -0.2)).unwrap();
        let traj = simulate_qsde(&cfg, &sigma_minus(), &rho0).unwrap();
        assert!(traj
            .points
            .iter()
            .all(|p| max_abs(&(&p.rho - rho0.matrix())) < 1e-15));
    }

    #[test]
    fn detector_collision_model_tracks_exact_solution() {
        let omega = 4.0 * PI;
        let cfg = SimConfig::detector(1.0, omega, 1e-3, 1000);
        let rho0 = DensityMatrix::basis_state(2, 0);
        let traj = simulate_qsde(&cfg, &sigma_minus(), &rho0).unwrap();
        let ee = traj.last().unwrap().rho[(1, 1)].re;
        let exact = detector_exact(&rho0, 1.0, 1.0, omega).unwrap();
        assert!((ee - 0.3167).abs() < 5e-3);
        assert!((ee - exact.matrix()[(1, 1)].re).abs() < 5e-3);
        assert!(traj.max_trace_drift() < 1e-12);
    }

    #[test]
    fn counting_increment_has_no_gauge_table() {
        let dtau = 1e-3;
        for n in [0.3, 1.0, 4.0] {
            let (mean, second) = counting_moments(n, dtau, 2).unwrap();
            assert!((mean - n * dtau).abs() < 1e-15);
            let variance = second - mean * mean;
            assert!((variance - n * (n + 1.0) * dtau * dtau).abs() < 1e-15);
            // a gauge increment would satisfy <dL dL> = <dL>
            assert!(second < 0.1 * mean);
        }
    }

    #[test]
    fn simulation_guards() {
        let rho0 = DensityMatrix::basis_state(2, 0);
        let mut cfg = SimConfig::detector(1.0, 1.0, 0.01, 10);
        cfg.cutoff = 3;
        assert!(matches!(
            simulate_qsde_with_cap(&cfg, &sigma_minus(), &rho0, 16),
            Err(Error::DimensionCap { .. })
        ));
        cfg.cutoff = 2;
        cfg.steps = 0;
        assert!(simulate_qsde(&cfg, &sigma_minus(), &rho0).is_err());
    }
}
