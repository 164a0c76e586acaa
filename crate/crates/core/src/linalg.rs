//! Dense complex matrix helpers shared by the dynamical modules.
//!
//! Two-level conventions: basis index 0 is the ground state `|g>`, index 1
//! the excited state `|e>`. Then `sigma_minus = |g><e|`, `sigma_plus =
//! |e><g|` and `sigma_z = |e><e| - |g><g|`. With this ordering the qubit
//! lowering operator coincides with the oscillator annihilator truncated at
//! two levels.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::distr::StandardUniform;
use rand::Rng;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> Matrix {
    Matrix::identity(d, d)
}

pub fn zeros(d: usize) -> Matrix {
    Matrix::zeros(d, d)
}

/// `|g><e|`
pub fn sigma_minus() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

/// `|e><g|`
pub fn sigma_plus() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

/// `|e><e| - |g><g|`
pub fn sigma_z() -> Matrix {
    Matrix::from_row_slice(2, 2, &[real(-1.0), ZERO, ZERO, ONE])
}

/// Truncated bosonic annihilator, `a|k> = sqrt(k)|k-1>` for `k < d`.
pub fn annihilation(d: usize) -> Matrix {
    let mut a = zeros(d);
    for k in 1..d {
        a[(k - 1, k)] = real((k as f64).sqrt());
    }
    a
}

pub fn number(d: usize) -> Matrix {
    Matrix::from_diagonal(&Vector::from_fn(d, |k, _| real(k as f64)))
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

pub fn anticommutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b + b * a
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &Matrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn ensure_square(m: &Matrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

pub fn unitarity_defect(s: &Matrix) -> f64 {
    max_abs(&(s.adjoint() * s - identity(s.nrows())))
}

pub fn hermiticity_defect(h: &Matrix) -> f64 {
    max_abs(&(h - h.adjoint()))
}

/// Column-stacking vectorization: `vec(X)[i + d*j] = X[i, j]`.
pub fn vectorize(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &Vector, d: usize) -> Matrix {
    Matrix::from_column_slice(d, d, v.as_slice())
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * real(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Positive square root of a Hermitian positive semidefinite matrix.
/// Negative eigenvalues from rounding are clamped to zero.
pub fn psd_sqrt(m: &Matrix) -> Matrix {
    let h = (m + m.adjoint()) * real(0.5);
    let eig = h.symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| real(l.max(0.0).sqrt()));
    &eig.eigenvectors * Matrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// `D(rho, sigma) = (1/2) || rho - sigma ||_1`.
pub fn trace_distance(rho: &Matrix, sigma: &Matrix) -> f64 {
    0.5 * hermitian_eigenvalues(&(rho - sigma))
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}

/// Uhlmann fidelity `(tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2`.
pub fn fidelity(rho: &Matrix, sigma: &Matrix) -> f64 {
    let root = psd_sqrt(sigma);
    let inner = &root * rho * &root;
    let s: f64 = hermitian_eigenvalues(&inner)
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    s * s
}

/// Kronecker product `a ⊗ b`; `a` acts on the first (slower) index.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Partial trace over the second factor of a `d_a * d_b` dimensional space.
pub fn partial_trace_second(m: &Matrix, d_a: usize, d_b: usize) -> Matrix {
    Matrix::from_fn(d_a, d_a, |i, j| {
        (0..d_b).map(|k| m[(i * d_b + k, j * d_b + k)]).sum()
    })
}

/// Matrix exponential (Pade scaling and squaring from nalgebra).
pub fn expm(m: &Matrix) -> Matrix {
    m.clone().exp()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.sample::<f64, _>(StandardUniform);
    let u2: f64 = rng.sample(StandardUniform);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Matrix with i.i.d. complex Gaussian entries.
pub fn random_ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(d, d, |_, _| c(gaussian(rng), gaussian(rng)))
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let g = random_ginibre(d, rng);
    (&g + g.adjoint()) * real(0.5)
}

/// Unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let qr = random_ginibre(d, rng).qr();
    let q = qr.q();
    let r = qr.r();
    // fix column phases so the distribution is Haar
    let phases = Matrix::from_diagonal(&Vector::from_fn(d, |k, _| {
        let z = r[(k, k)];
        if z.norm() > 0.0 {
            z / z.norm()
        } else {
            ONE
        }
    }));
    q * phases
}

/// Full-rank random density matrix `G G* / tr(G G*)`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let g = random_ginibre(d, rng);
    let m = &g * g.adjoint();
    let tr = trace(&m);
    m / tr
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ladder_conventions() {
        let sm = sigma_minus();
        let sp = sigma_plus();
        assert_eq!(sm.adjoint(), sp);
        // sigma_+ sigma_- projects on |e>
        let pe = &sp * &sm;
        assert_eq!(pe[(1, 1)], ONE);
        assert_eq!(pe[(0, 0)], ZERO);
        assert_eq!(annihilation(2), sm);
        assert_eq!(commutator(&sp, &sm), sigma_z());
    }

    #[test]
    fn canonical_commutator_below_cutoff() {
        let d = 6;
        let a = annihilation(d);
        let comm = commutator(&a, &a.adjoint());
        for k in 0..d - 1 {
            assert!((comm[(k, k)] - ONE).norm() < 1e-14);
        }
        assert!((comm[(d - 1, d - 1)] - real(1.0 - d as f64)).norm() < 1e-14);
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let m = Matrix::from_row_slice(2, 2, &[real(1.0), real(2.0), real(3.0), real(4.0)]);
        let v = vectorize(&m);
        assert_eq!(v[1], real(3.0));
        assert_eq!(v[2], real(2.0));
        assert_eq!(unvectorize(&v, 2), m);
    }

    #[test]
    fn expm_matches_closed_form_rotation() {
        // exp(-i theta sigma_x) = cos(theta) I - i sin(theta) sigma_x
        let theta = 2.7;
        let sx = sigma_minus() + sigma_plus();
        let u = expm(&(&sx * c(0.0, -theta)));
        let expected = identity(2) * real(theta.cos()) - &sx * c(0.0, theta.sin());
        assert!(max_abs(&(u - expected)) < 1e-13);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..5 {
            assert!(unitarity_defect(&random_unitary(d, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn fidelity_and_trace_distance_of_commuting_states() {
        let p = [0.7, 0.3];
        let q = [0.4, 0.6];
        let rho = Matrix::from_diagonal(&Vector::from_vec(p.iter().map(|&x| real(x)).collect()));
        let sigma = Matrix::from_diagonal(&Vector::from_vec(q.iter().map(|&x| real(x)).collect()));
        let bc: f64 = p.iter().zip(&q).map(|(a, b)| (a * b).sqrt()).sum();
        assert!((fidelity(&rho, &sigma) - bc * bc).abs() < 1e-14);
        assert!((trace_distance(&rho, &sigma) - 0.3).abs() < 1e-14);
        assert!((fidelity(&rho, &rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_density(2, &mut rng);
        let b = random_density(3, &mut rng);
        let reduced = partial_trace_second(&kron(&a, &b), 2, 3);
        assert!(max_abs(&(reduced - a)) < 1e-14);
    }
}
