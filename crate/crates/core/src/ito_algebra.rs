//! Symbolic algebra of quantum Itō increments.
//!
//! An [`ItoExpression`] is a finite sum `sum_k X_k ⊗ dM_k` where the `dM_k`
//! are fundamental noise increments and the `X_k` are matrices on the
//! system space. Coefficients commute with the increments, so a product of
//! two terms is `(X_1 X_2) ⊗ (dM_1 dM_2)` with the increment product read off
//! an [`ItoTable`]. Products missing from a table are zero.
//!
//! # Text rendering
//!
//! `Display` renders an expression deterministically with the grammar
//!
//! ```text
//! expression  := "0" | term (" + " term)*
//! term        := coefficient "*" symbol
//! symbol      := "dL" | "dB+" | "dB" | "dA+" | "dA" | "dt"
//! coefficient := scalar | "[" row ("; " row)* "]"
//! row         := scalar (", " scalar)*
//! scalar      := "(" real sign imag "i)"
//! ```
//!
//! `real` and `imag` use Rust's shortest round-trip formatting of `f64`,
//! `sign` is `+` or `-`, and a 1x1 coefficient is printed as a bare
//! scalar. Terms appear in the fixed order `dL, dB+, dB, dA+, dA, dt`;
//! terms whose coefficient is exactly zero are omitted.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, real, Matrix};
use crate::open_system::HPTriple;

/// Coefficients below this max-abs value count as zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// Fundamental noise increments.
///
/// The variant order fixes the rendering and iteration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Noise {
    /// `dΛ`, the gauge (counting) increment.
    Gauge,
    /// `dB*`
    Creation,
    /// `dB`
    Annihilation,
    /// `dA*`, thermal creation.
    ThermalCreation,
    /// `dA`, thermal annihilation.
    ThermalAnnihilation,
    /// `dt`
    Time,
}

impl Noise {
    pub const FOCK: [Noise; 4] = [
        Noise::Gauge,
        Noise::Creation,
        Noise::Annihilation,
        Noise::Time,
    ];
    pub const THERMAL: [Noise; 3] = [
        Noise::ThermalCreation,
        Noise::ThermalAnnihilation,
        Noise::Time,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Noise::Gauge => "dL",
            Noise::Creation => "dB+",
            Noise::Annihilation => "dB",
            Noise::ThermalCreation => "dA+",
            Noise::ThermalAnnihilation => "dA",
            Noise::Time => "dt",
        }
    }

    /// The increment appearing in the adjoint: creation and annihilation
    /// swap, `dΛ` and `dt` are self-adjoint.
    pub fn adjoint(self) -> Noise {
        match self {
            Noise::Creation => Noise::Annihilation,
            Noise::Annihilation => Noise::Creation,
            Noise::ThermalCreation => Noise::ThermalAnnihilation,
            Noise::ThermalAnnihilation => Noise::ThermalCreation,
            other => other,
        }
    }

    /// Multiplier picked up under a change of inertial frame with time
    /// dilation ratio `zeta`, given `root = sqrt(zeta)`.
    ///
    /// The `dt` multiplier is `root * root` so that rescaled tables close
    /// exactly in floating point.
    fn frame_multiplier(self, root: f64) -> f64 {
        match self {
            Noise::Gauge => 1.0,
            Noise::Time => root * root,
            _ => root,
        }
    }
}

/// Noise basis: Fock vacuum noise or thermal noise with occupation `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Basis {
    Fock,
    Thermal(f64),
}

impl Basis {
    pub fn thermal(n: f64) -> Result<Self> {
        crate::error::non_negative("n", n)?;
        Ok(Basis::Thermal(n))
    }

    pub fn symbols(&self) -> &'static [Noise] {
        match self {
            Basis::Fock => &Noise::FOCK,
            Basis::Thermal(_) => &Noise::THERMAL,
        }
    }

    pub fn contains(&self, noise: Noise) -> bool {
        self.symbols().contains(&noise)
    }

    fn check(&self, noise: Noise) -> Result<()> {
        if self.contains(noise) {
            Ok(())
        } else if noise == Noise::Gauge {
            Err(Error::GaugeInThermalBasis)
        } else {
            Err(Error::WrongBasis {
                symbol: noise.symbol(),
                basis: self.to_string(),
            })
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Fock => write!(f, "FOCK"),
            Basis::Thermal(n) => write!(f, "THERMAL(n={n})"),
        }
    }
}

/// Multiplication table of the noise increments of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ItoTable {
    basis: Basis,
    entries: BTreeMap<(Noise, Noise), (Noise, f64)>,
}

impl ItoTable {
    pub fn for_basis(basis: Basis) -> Self {
        let entries = match basis {
            Basis::Fock => BTreeMap::from([
                ((Noise::Gauge, Noise::Gauge), (Noise::Gauge, 1.0)),
                (
                    (Noise::Annihilation, Noise::Gauge),
                    (Noise::Annihilation, 1.0),
                ),
                ((Noise::Gauge, Noise::Creation), (Noise::Creation, 1.0)),
                ((Noise::Annihilation, Noise::Creation), (Noise::Time, 1.0)),
            ]),
            Basis::Thermal(n) => BTreeMap::from([
                (
                    (Noise::ThermalAnnihilation, Noise::ThermalCreation),
                    (Noise::Time, n + 1.0),
                ),
                (
                    (Noise::ThermalCreation, Noise::ThermalAnnihilation),
                    (Noise::Time, n),
                ),
            ]),
        };
        Self { basis, entries }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Product `left * right`, or `None` when it vanishes.
    pub fn product(&self, left: Noise, right: Noise) -> Option<(Noise, f64)> {
        self.entries.get(&(left, right)).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((Noise, Noise), (Noise, f64))> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }
}

/// Quantum statistics of the noise; both transform identically under a
/// change of inertial frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Statistics {
    Bose,
    Fermi,
}

/// Rescaling of increments between inertial frames with time-dilation
/// ratio `zeta = dt'/dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameScaling {
    zeta: f64,
    pub statistics: Statistics,
}

impl FrameScaling {
    pub fn new(zeta: f64, statistics: Statistics) -> Result<Self> {
        crate::error::positive("zeta", zeta)?;
        Ok(Self { zeta, statistics })
    }

    pub fn bose(zeta: f64) -> Result<Self> {
        Self::new(zeta, Statistics::Bose)
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }
}

/// Formal sum of noise increments with matrix coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ItoExpression {
    basis: Basis,
    dim: usize,
    terms: BTreeMap<Noise, Matrix>,
}

impl ItoExpression {
    pub fn zero(basis: Basis, dim: usize) -> Self {
        Self {
            basis,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Single term `coefficient ⊗ noise`.
    pub fn monomial(basis: Basis, noise: Noise, coefficient: Matrix) -> Result<Self> {
        let dim = linalg::ensure_square(&coefficient)?;
        Self::zero(basis, dim).with_term(noise, coefficient)
    }

    /// Unit scalar monomial `1 ⊗ noise` on a one-dimensional system.
    pub fn unit(basis: Basis, noise: Noise) -> Result<Self> {
        Self::monomial(basis, noise, linalg::identity(1))
    }

    /// Adds `coefficient ⊗ noise` to the expression.
    ///
    /// A gauge term in a thermal basis is rejected here, so no thermal
    /// expression can ever carry one.
    pub fn with_term(mut self, noise: Noise, coefficient: Matrix) -> Result<Self> {
        self.basis.check(noise)?;
        self.check_dim(&coefficient)?;
        self.accumulate(noise, coefficient);
        Ok(self)
    }

    fn check_dim(&self, m: &Matrix) -> Result<()> {
        let d = linalg::ensure_square(m)?;
        if d == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: d,
            })
        }
    }

    fn accumulate(&mut self, noise: Noise, coefficient: Matrix) {
        let entry = self
            .terms
            .entry(noise)
            .or_insert_with(|| linalg::zeros(self.dim));
        *entry += coefficient;
        if entry.iter().all(|z| *z == linalg::ZERO) {
            self.terms.remove(&noise);
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient of `noise`; zero when the monomial is absent.
    pub fn coefficient(&self, noise: Noise) -> Matrix {
        self.terms
            .get(&noise)
            .cloned()
            .unwrap_or_else(|| linalg::zeros(self.dim))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Noise, &Matrix)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Largest absolute coefficient entry over all terms.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(linalg::max_abs).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() < tol
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                left: self.basis.to_string(),
                right: other.basis.to_string(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (noise, m) in &other.terms {
            out.accumulate(*noise, m.clone());
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.basis, self.dim);
        for (noise, m) in &self.terms {
            out.accumulate(*noise, m * factor);
        }
        out
    }

    /// Conjugate-transposes coefficients and swaps creation with
    /// annihilation.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.basis, self.dim);
        for (noise, m) in &self.terms {
            out.accumulate(noise.adjoint(), m.adjoint());
        }
        out
    }
}

impl fmt::Display for ItoExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (noise, m)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write_coefficient(f, m)?;
            write!(f, "*{}", noise.symbol())?;
        }
        Ok(())
    }
}

fn write_scalar(f: &mut fmt::Formatter<'_>, z: Complex64) -> fmt::Result {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    write!(f, "({}{}{}i)", z.re, sign, z.im.abs())
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, m: &Matrix) -> fmt::Result {
    if m.nrows() == 1 {
        return write_scalar(f, m[(0, 0)]);
    }
    write!(f, "[")?;
    for i in 0..m.nrows() {
        if i > 0 {
            write!(f, "; ")?;
        }
        for j in 0..m.ncols() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write_scalar(f, m[(i, j)])?;
        }
    }
    write!(f, "]")
}

/// Bilinear Itō product; coefficients multiply left to right.
pub fn ito_product(left: &ItoExpression, right: &ItoExpression) -> Result<ItoExpression> {
    left.check_compatible(right)?;
    let table = ItoTable::for_basis(left.basis);
    let mut out = ItoExpression::zero(left.basis, left.dim);
    for (n1, x1) in &left.terms {
        for (n2, x2) in &right.terms {
            if let Some((result, factor)) = table.product(*n1, *n2) {
                out.accumulate(result, x1 * x2 * real(factor));
            }
        }
    }
    Ok(out)
}

/// Expresses increments of one inertial frame in another:
/// `dΛ' = dΛ`, `dB' = sqrt(zeta) dB`, `dB*' = sqrt(zeta) dB*`, `dt' = zeta dt`.
pub fn frame_scale(e: &ItoExpression, scaling: &FrameScaling) -> Result<ItoExpression> {
    let zeta = crate::error::positive("zeta", scaling.zeta)?;
    let root = zeta.sqrt();
    let mut out = ItoExpression::zero(e.basis, e.dim);
    for (noise, m) in &e.terms {
        out.accumulate(*noise, m * real(noise.frame_multiplier(root)));
    }
    Ok(out)
}

/// Generator `dG = (S-I) dΛ + L dB* - L*S dB - (L*L/2 + iH) dt` of a unitary
/// quantum stochastic evolution.
pub fn hp_generator(triple: &HPTriple) -> Result<ItoExpression> {
    triple.validate()?;
    let d = triple.dim();
    let (s, l, h) = (triple.s(), triple.l(), triple.h());
    let l_dag = l.adjoint();
    ItoExpression::zero(Basis::Fock, d)
        .with_term(Noise::Gauge, s - linalg::identity(d))?
        .with_term(Noise::Creation, l.clone())?
        .with_term(Noise::Annihilation, -(&l_dag * s))?
        .with_term(Noise::Time, -(&l_dag * l * real(0.5) + h * linalg::I))
}

/// `G + G* + G* G`, the Itō differential of `U* U` for `dU = G U`.
///
/// Vanishes for every generator built by [`hp_generator`].
pub fn unitarity_defect(g: &ItoExpression) -> Result<ItoExpression> {
    if g.basis != Basis::Fock {
        return Err(Error::BasisMismatch {
            left: g.basis.to_string(),
            right: Basis::Fock.to_string(),
        });
    }
    let g_dag = g.adjoint();
    g.try_add(&g_dag)?.try_add(&ito_product(&g_dag, g)?)
}

/// Accepts any well-formed expression; thermal expressions cannot hold a
/// gauge term.
pub fn thermal_basis_guard(e: &ItoExpression) -> Result<()> {
    for noise in e.terms.keys() {
        e.basis.check(*noise)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, sigma_minus, sigma_plus, sigma_z};

    fn unit(noise: Noise) -> ItoExpression {
        ItoExpression::unit(Basis::Fock, noise).unwrap()
    }

    fn scalar_of(e: &ItoExpression, noise: Noise) -> Complex64 {
        e.coefficient(noise)[(0, 0)]
    }

    #[test]
    fn fock_table_products() {
        let p = ito_product(&unit(Noise::Annihilation), &unit(Noise::Creation)).unwrap();
        assert_eq!(p, unit(Noise::Time));
        let p = ito_product(&unit(Noise::Creation), &unit(Noise::Annihilation)).unwrap();
        assert!(p.terms().next().is_none());
        let p = ito_product(&unit(Noise::Gauge), &unit(Noise::Gauge)).unwrap();
        assert_eq!(p, unit(Noise::Gauge));
        let p = ito_product(&unit(Noise::Annihilation), &unit(Noise::Gauge)).unwrap();
        assert_eq!(p, unit(Noise::Annihilation));
        let p = ito_product(&unit(Noise::Gauge), &unit(Noise::Creation)).unwrap();
        assert_eq!(p, unit(Noise::Creation));
    }

    #[test]
    fn fock_table_has_four_entries() {
        assert_eq!(ItoTable::for_basis(Basis::Fock).entries().count(), 4);
        assert_eq!(
            ItoTable::for_basis(Basis::Thermal(0.4)).entries().count(),
            2
        );
    }

    #[test]
    fn thermal_table_products() {
        let basis = Basis::thermal(1.0).unwrap();
        let da = ItoExpression::unit(basis, Noise::ThermalAnnihilation).unwrap();
        let da_dag = ItoExpression::unit(basis, Noise::ThermalCreation).unwrap();
        let p = ito_product(&da, &da_dag).unwrap();
        assert_eq!(scalar_of(&p, Noise::Time), real(2.0));
        let p = ito_product(&da_dag, &da).unwrap();
        assert_eq!(scalar_of(&p, Noise::Time), real(1.0));
        assert!(ito_product(&da, &da).unwrap().terms().next().is_none());
        assert!(ito_product(&da_dag, &da_dag)
            .unwrap()
            .terms()
            .next()
            .is_none());
    }

    #[test]
    fn product_rejects_mismatches() {
        let thermal = ItoExpression::unit(Basis::Thermal(1.0), Noise::Time).unwrap();
        let other = ItoExpression::unit(Basis::Thermal(2.0), Noise::Time).unwrap();
        assert!(matches!(
            ito_product(&thermal, &other),
            Err(Error::BasisMismatch { .. })
        ));
        assert!(matches!(
            ito_product(&unit(Noise::Time), &thermal),
            Err(Error::BasisMismatch { .. })
        ));
        let qubit = ItoExpression::monomial(Basis::Fock, Noise::Time, identity(2)).unwrap();
        assert!(matches!(
            ito_product(&unit(Noise::Time), &qubit),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coefficients_multiply_left_to_right() {
        let a = ItoExpression::monomial(Basis::Fock, Noise::Annihilation, sigma_minus()).unwrap();
        let b = ItoExpression::monomial(Basis::Fock, Noise::Creation, sigma_plus()).unwrap();
        let p = ito_product(&a, &b).unwrap();
        assert_eq!(p.coefficient(Noise::Time), sigma_minus() * sigma_plus());
    }

    #[test]
    fn frame_scale_examples() {
        let f4 = FrameScaling::bose(4.0).unwrap();
        let scaled = frame_scale(&unit(Noise::Annihilation), &f4).unwrap();
        assert_eq!(scalar_of(&scaled, Noise::Annihilation), real(2.0));
        for zeta in [0.3, 1.7, 9.0] {
            let f = FrameScaling::new(zeta, Statistics::Fermi).unwrap();
            assert_eq!(
                frame_scale(&unit(Noise::Gauge), &f).unwrap(),
                unit(Noise::Gauge)
            );
        }
        let e = unit(Noise::Gauge)
            .with_term(Noise::Time, identity(1) * real(0.3))
            .unwrap()
            .with_term(Noise::Creation, identity(1) * linalg::c(0.1, -2.0))
            .unwrap();
        assert_eq!(
            frame_scale(&e, &FrameScaling::bose(1.0).unwrap()).unwrap(),
            e
        );
        assert!(FrameScaling::bose(0.0).is_err());
        assert!(FrameScaling::bose(-1.0).is_err());
    }

    #[test]
    fn bose_and_fermi_scale_identically() {
        let e = unit(Noise::Annihilation)
            .with_term(Noise::Time, identity(1))
            .unwrap();
        let b = frame_scale(&e, &FrameScaling::new(2.5, Statistics::Bose).unwrap()).unwrap();
        let f = frame_scale(&e, &FrameScaling::new(2.5, Statistics::Fermi).unwrap()).unwrap();
        assert_eq!(b, f);
    }

    #[test]
    fn hp_generator_examples() {
        let d = 2;
        let trivial = HPTriple::new(identity(d), linalg::zeros(d), linalg::zeros(d)).unwrap();
        assert!(hp_generator(&trivial).unwrap().terms().next().is_none());

        let decay = HPTriple::new(identity(d), sigma_minus(), linalg::zeros(d)).unwrap();
        let g = hp_generator(&decay).unwrap();
        let expected = -(sigma_plus() * sigma_minus()) * real(0.5);
        assert!(linalg::max_abs(&(g.coefficient(Noise::Time) - expected)) < 1e-15);
        assert!(g
            .coefficient(Noise::Gauge)
            .iter()
            .all(|z| *z == linalg::ZERO));

        let flip = HPTriple::new(sigma_z(), linalg::zeros(d), linalg::zeros(d)).unwrap();
        let g = hp_generator(&flip).unwrap();
        assert_eq!(g.coefficient(Noise::Gauge), sigma_z() - identity(d));
    }

    #[test]
    fn unitarity_defect_examples() {
        let l = sigma_minus() * linalg::c(0.4, 0.3);
        let g = ItoExpression::monomial(Basis::Fock, Noise::Creation, l.clone()).unwrap();
        let defect = unitarity_defect(&g).unwrap();
        assert_eq!(defect.coefficient(Noise::Creation), l);
        assert_eq!(defect.coefficient(Noise::Annihilation), l.adjoint());
        assert!(linalg::max_abs(&(defect.coefficient(Noise::Time) - l.adjoint() * &l)) < 1e-15);
        assert!(!defect.is_zero(ZERO_TOLERANCE));

        let zero = ItoExpression::zero(Basis::Fock, 2);
        assert!(unitarity_defect(&zero).unwrap().is_zero(ZERO_TOLERANCE));

        let triple = HPTriple::new(sigma_z(), sigma_minus(), sigma_z() * real(0.3)).unwrap();
        let defect = unitarity_defect(&hp_generator(&triple).unwrap()).unwrap();
        assert!(defect.is_zero(ZERO_TOLERANCE), "{defect}");
    }

    #[test]
    fn thermal_guard() {
        let basis = Basis::Thermal(0.5);
        let ok = ItoExpression::unit(basis, Noise::ThermalAnnihilation).unwrap();
        assert!(thermal_basis_guard(&ok).is_ok());
        assert_eq!(
            ItoExpression::unit(basis, Noise::Gauge),
            Err(Error::GaugeInThermalBasis)
        );
        assert!(matches!(
            ItoExpression::unit(basis, Noise::Annihilation),
            Err(Error::WrongBasis { .. })
        ));
        assert!(thermal_basis_guard(&unit(Noise::Gauge)).is_ok());
        assert!(Basis::thermal(-0.1).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(ItoExpression::zero(Basis::Fock, 1).to_string(), "0");
        let e = unit(Noise::Time)
            .with_term(Noise::Annihilation, identity(1) * linalg::c(0.5, -1.0))
            .unwrap()
            .with_term(Noise::Gauge, identity(1) * real(-2.0))
            .unwrap();
        assert_eq!(e.to_string(), "(-2+0i)*dL + (0.5-1i)*dB + (1+0i)*dt");
        let m = ItoExpression::monomial(Basis::Fock, Noise::Creation, sigma_minus()).unwrap();
        assert_eq!(m.to_string(), "[(0+0i), (1+0i); (0+0i), (0+0i)]*dB+");
        let t = ItoExpression::unit(Basis::Thermal(1.0), Noise::ThermalCreation).unwrap();
        assert_eq!(t.to_string(), "(1+0i)*dA+");
    }
}
