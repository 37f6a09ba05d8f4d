//! Intersection theory, Riemann–Roch and Mukai-vector algebra on the
//! supported surface models.
//!
//! Mukai vectors are stored as `(rank, c1, s)` with the Euler characteristic
//! always equal to `rank + s`. On K3 surfaces `s` is the degree-4 Mukai
//! component `v4 = ch2 + rank`. On a general elliptic surface `s` is the
//! integral coordinate `χ - rank`, which agrees with `v4` when `χ(O) = 2`.
//! The Chern character is always derived, never stored.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{as_integer, int, to_rat, Int, Rational};
use crate::error::{Error, Result};

/// Basis of the Néron–Severi lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NsBasis {
    /// Rank one, generated by the polarization `H`.
    H,
    /// Rank two, generated by the section `σ` and the fiber `f`.
    SigmaF,
}

impl NsBasis {
    pub fn tag(self) -> &'static str {
        match self {
            NsBasis::H => "H",
            NsBasis::SigmaF => "sigma_f",
        }
    }

    pub fn rank(self) -> usize {
        match self {
            NsBasis::H => 1,
            NsBasis::SigmaF => 2,
        }
    }
}

/// A divisor class in the Néron–Severi lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NsClass {
    H(Int),
    /// `sigma·σ + fiber·f`
    SigmaF { sigma: Int, fiber: Int },
}

impl NsClass {
    pub fn h(c: impl Into<Int>) -> Self {
        NsClass::H(c.into())
    }

    pub fn sf(sigma: impl Into<Int>, fiber: impl Into<Int>) -> Self {
        NsClass::SigmaF {
            sigma: sigma.into(),
            fiber: fiber.into(),
        }
    }

    pub fn sigma() -> Self {
        Self::sf(1, 0)
    }

    pub fn fiber() -> Self {
        Self::sf(0, 1)
    }

    pub fn zero(basis: NsBasis) -> Self {
        match basis {
            NsBasis::H => Self::h(0),
            NsBasis::SigmaF => Self::sf(0, 0),
        }
    }

    /// Builds a class from a coefficient list in the given basis.
    pub fn from_coeffs(basis: NsBasis, coeffs: &[Int]) -> Result<Self> {
        match (basis, coeffs) {
            (NsBasis::H, [c]) => Ok(NsClass::H(c.clone())),
            (NsBasis::SigmaF, [x, y]) => Ok(Self::sf(x.clone(), y.clone())),
            _ => Err(Error::InvalidArgument(format!(
                "basis {} expects {} coefficient(s), got {}",
                basis.tag(),
                basis.rank(),
                coeffs.len()
            ))),
        }
    }

    pub fn basis(&self) -> NsBasis {
        match self {
            NsClass::H(_) => NsBasis::H,
            NsClass::SigmaF { .. } => NsBasis::SigmaF,
        }
    }

    pub fn coeffs(&self) -> Vec<Int> {
        match self {
            NsClass::H(c) => vec![c.clone()],
            NsClass::SigmaF { sigma, fiber } => vec![sigma.clone(), fiber.clone()],
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NsClass::H(c) => c.is_zero(),
            NsClass::SigmaF { sigma, fiber } => sigma.is_zero() && fiber.is_zero(),
        }
    }

    /// `(σ-coefficient, f-coefficient)`; `None` in the `H` basis.
    pub fn sigma_fiber(&self) -> Option<(&Int, &Int)> {
        match self {
            NsClass::SigmaF { sigma, fiber } => Some((sigma, fiber)),
            NsClass::H(_) => None,
        }
    }

    pub fn scale(&self, k: &Int) -> Self {
        match self {
            NsClass::H(c) => NsClass::H(c * k),
            NsClass::SigmaF { sigma, fiber } => Self::sf(sigma * k, fiber * k),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (NsClass::H(a), NsClass::H(b)) => Some(NsClass::H(a + b)),
            (
                NsClass::SigmaF { sigma: a, fiber: b },
                NsClass::SigmaF { sigma: c, fiber: d },
            ) => Some(Self::sf(a + c, b + d)),
            _ => None,
        }
    }

    /// Gcd of the coefficients.
    pub fn content(&self) -> Int {
        self.coeffs().iter().fold(Int::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == int(1)
    }
}

impl fmt::Display for NsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NsClass::H(c) => write!(f, "{c}H"),
            NsClass::SigmaF { sigma, fiber } => {
                if fiber.is_negative() {
                    write!(f, "{sigma}σ{fiber}f")
                } else {
                    write!(f, "{sigma}σ+{fiber}f")
                }
            }
        }
    }
}

impl Add<&NsClass> for &NsClass {
    type Output = NsClass;
    fn add(self, rhs: &NsClass) -> NsClass {
        self.checked_add(rhs)
            .unwrap_or_else(|| panic!("adding classes in different bases: {self} + {rhs}"))
    }
}

impl Add for NsClass {
    type Output = NsClass;
    fn add(self, rhs: NsClass) -> NsClass {
        &self + &rhs
    }
}

impl Neg for &NsClass {
    type Output = NsClass;
    fn neg(self) -> NsClass {
        self.scale(&int(-1))
    }
}

impl Neg for NsClass {
    type Output = NsClass;
    fn neg(self) -> NsClass {
        -&self
    }
}

impl Sub<&NsClass> for &NsClass {
    type Output = NsClass;
    fn sub(self, rhs: &NsClass) -> NsClass {
        self + &(-rhs)
    }
}

impl Sub for NsClass {
    type Output = NsClass;
    fn sub(self, rhs: NsClass) -> NsClass {
        &self - &rhs
    }
}

impl Mul<&NsClass> for &Int {
    type Output = NsClass;
    fn mul(self, rhs: &NsClass) -> NsClass {
        rhs.scale(self)
    }
}

/// Mukai vector `(rank, c1, s)`; see the module docs for the meaning of `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MukaiVector {
    pub rank: Int,
    pub c1: NsClass,
    pub s: Int,
}

impl MukaiVector {
    pub fn new(rank: impl Into<Int>, c1: NsClass, s: impl Into<Int>) -> Self {
        MukaiVector {
            rank: rank.into(),
            c1,
            s: s.into(),
        }
    }

    pub fn zero(basis: NsBasis) -> Self {
        Self::new(0, NsClass::zero(basis), 0)
    }

    /// Coordinates `(rank, c1 coefficients..., s)`.
    pub fn coords(&self) -> Vec<Int> {
        let mut out = vec![self.rank.clone()];
        out.extend(self.c1.coeffs());
        out.push(self.s.clone());
        out
    }

    pub fn from_coords(basis: NsBasis, coords: &[Int]) -> Result<Self> {
        let n = basis.rank();
        if coords.len() != n + 2 {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                n + 2,
                coords.len()
            )));
        }
        Ok(MukaiVector {
            rank: coords[0].clone(),
            c1: NsClass::from_coeffs(basis, &coords[1..=n])?,
            s: coords[n + 1].clone(),
        })
    }

    pub fn scale(&self, k: &Int) -> Self {
        MukaiVector {
            rank: &self.rank * k,
            c1: self.c1.scale(k),
            s: &self.s * k,
        }
    }

    /// Gcd of all coordinates.
    pub fn content(&self) -> Int {
        self.coords().iter().fold(Int::zero(), |g, c| g.gcd(c))
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero() && self.c1.is_zero() && self.s.is_zero()
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {})", self.rank, self.c1, self.s)
    }
}

impl Add<&MukaiVector> for &MukaiVector {
    type Output = MukaiVector;
    fn add(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector {
            rank: &self.rank + &rhs.rank,
            c1: &self.c1 + &rhs.c1,
            s: &self.s + &rhs.s,
        }
    }
}

impl Add for MukaiVector {
    type Output = MukaiVector;
    fn add(self, rhs: MukaiVector) -> MukaiVector {
        &self + &rhs
    }
}

impl Neg for &MukaiVector {
    type Output = MukaiVector;
    fn neg(self) -> MukaiVector {
        self.scale(&int(-1))
    }
}

impl Neg for MukaiVector {
    type Output = MukaiVector;
    fn neg(self) -> MukaiVector {
        -&self
    }
}

impl Sub<&MukaiVector> for &MukaiVector {
    type Output = MukaiVector;
    fn sub(self, rhs: &MukaiVector) -> MukaiVector {
        self + &(-rhs)
    }
}

impl Sub for MukaiVector {
    type Output = MukaiVector;
    fn sub(self, rhs: MukaiVector) -> MukaiVector {
        &self - &rhs
    }
}

/// Chern character `(ch0, ch1, ch2)`; `ch2` may be half-integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chern {
    pub rank: Int,
    pub c1: NsClass,
    pub ch2: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    /// Picard rank one, `H² = degree`.
    GenericK3 { degree: Int },
    /// `σ² = -2, f² = 0, σ·f = 1`.
    EllipticK3,
    /// Simply connected elliptic surface with section:
    /// `σ² = -χ(O), f² = 0, σ·f = 1, K = (χ(O) - 2) f`.
    EllipticGeneral { chi_o: Int },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceModel {
    kind: SurfaceKind,
}

impl SurfaceModel {
    pub fn generic_k3(degree: impl Into<Int>) -> Result<Self> {
        let degree = degree.into();
        if !degree.is_positive() || degree.is_odd() {
            return Err(Error::InvalidModel(format!(
                "generic K3 degree must be even and positive, got {degree}"
            )));
        }
        Ok(SurfaceModel {
            kind: SurfaceKind::GenericK3 { degree },
        })
    }

    pub fn elliptic_k3() -> Self {
        SurfaceModel {
            kind: SurfaceKind::EllipticK3,
        }
    }

    pub fn elliptic_general(chi_o: impl Into<Int>) -> Result<Self> {
        let chi_o = chi_o.into();
        if chi_o < int(1) {
            return Err(Error::InvalidModel(format!(
                "holomorphic Euler characteristic must be at least 1, got {chi_o}"
            )));
        }
        Ok(SurfaceModel {
            kind: SurfaceKind::EllipticGeneral { chi_o },
        })
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SurfaceKind::GenericK3 { .. } => "generic-k3",
            SurfaceKind::EllipticK3 => "elliptic-k3",
            SurfaceKind::EllipticGeneral { .. } => "elliptic-general",
        }
    }

    pub fn basis(&self) -> NsBasis {
        match self.kind {
            SurfaceKind::GenericK3 { .. } => NsBasis::H,
            _ => NsBasis::SigmaF,
        }
    }

    pub fn chi_o(&self) -> Int {
        match &self.kind {
            SurfaceKind::GenericK3 { .. } | SurfaceKind::EllipticK3 => int(2),
            SurfaceKind::EllipticGeneral { chi_o } => chi_o.clone(),
        }
    }

    pub fn degree(&self) -> Option<&Int> {
        match &self.kind {
            SurfaceKind::GenericK3 { degree } => Some(degree),
            _ => None,
        }
    }

    pub fn canonical(&self) -> NsClass {
        match &self.kind {
            SurfaceKind::GenericK3 { .. } => NsClass::h(0),
            SurfaceKind::EllipticK3 => NsClass::sf(0, 0),
            SurfaceKind::EllipticGeneral { chi_o } => NsClass::sf(0, chi_o - 2),
        }
    }

    pub fn is_k3(&self) -> bool {
        self.chi_o() == int(2)
    }

    pub fn is_elliptic(&self) -> bool {
        self.basis() == NsBasis::SigmaF
    }

    /// Elliptic K3 lattice, including the `χ(O) = 2` general elliptic model.
    pub fn is_elliptic_k3(&self) -> bool {
        self.is_elliptic() && self.is_k3()
    }

    pub fn ensure_class(&self, d: &NsClass) -> Result<()> {
        if d.basis() == self.basis() {
            Ok(())
        } else {
            Err(Error::ModelMismatch {
                expected: self.basis().tag(),
                found: d.basis().tag(),
            })
        }
    }

    pub fn ensure_vector(&self, v: &MukaiVector) -> Result<()> {
        self.ensure_class(&v.c1)
    }

    pub fn require_elliptic(&self) -> Result<()> {
        if self.is_elliptic() {
            Ok(())
        } else {
            Err(Error::WrongModel {
                required: "an elliptic surface model",
            })
        }
    }

    pub fn require_elliptic_k3(&self) -> Result<()> {
        if self.is_elliptic_k3() {
            Ok(())
        } else {
            Err(Error::WrongModel {
                required: "an elliptic K3 lattice",
            })
        }
    }

    /// Intersection pairing on NS.
    pub fn ns_pair(&self, d1: &NsClass, d2: &NsClass) -> Result<Int> {
        self.ensure_class(d1)?;
        self.ensure_class(d2)?;
        Ok(match (&self.kind, d1, d2) {
            (SurfaceKind::GenericK3 { degree }, NsClass::H(a), NsClass::H(b)) => a * b * degree,
            (_, NsClass::SigmaF { sigma: x1, fiber: y1 }, NsClass::SigmaF { sigma: x2, fiber: y2 }) => {
                let sigma_sq = -self.chi_o();
                x1 * x2 * sigma_sq + x1 * y2 + y1 * x2
            }
            _ => unreachable!("bases checked above"),
        })
    }

    pub fn self_intersection(&self, d: &NsClass) -> Result<Int> {
        self.ns_pair(d, d)
    }

    /// Riemann–Roch: `χ(O(D)) = D·(D - K)/2 + χ(O)`.
    pub fn chi_rr(&self, d: &NsClass) -> Result<Int> {
        let k = self.canonical();
        let twice = self.ns_pair(d, &(d - &k))?;
        debug_assert!(twice.is_even(), "D·(D-K) is even on every surface");
        Ok(twice / 2 + self.chi_o())
    }

    /// `h⁰(O(mσ + nf))` on an elliptic K3. Effective classes lie in the cone
    /// spanned by `σ` and `f`, and `σ` splits off while `D·σ < 0`, leaving
    /// `m' = min(m, ⌊n/2⌋)`: then `h⁰ = n + 1` if `m' = 0` and
    /// `2 + m'(n - m')` otherwise.
    pub fn h0_surface(&self, d: &NsClass) -> Result<Option<Int>> {
        self.require_elliptic_k3()?;
        self.ensure_class(d)?;
        let (m, n) = d.sigma_fiber().expect("elliptic basis");
        if m.is_negative() || n.is_negative() {
            return Ok(Some(Int::zero()));
        }
        let m_fixed = m.clone().min(n / 2);
        Ok(Some(if m_fixed.is_zero() {
            n + 1
        } else {
            int(2) + &m_fixed * (n - &m_fixed)
        }))
    }

    /// `v(O)`.
    pub fn structure_sheaf(&self) -> MukaiVector {
        MukaiVector::new(1, NsClass::zero(self.basis()), self.chi_o() - 1)
    }

    /// `v(O_p)` for a point `p`.
    pub fn point(&self) -> MukaiVector {
        MukaiVector::new(0, NsClass::zero(self.basis()), 1)
    }

    /// `v(O(D))`.
    pub fn line_bundle(&self, d: &NsClass) -> Result<MukaiVector> {
        let chi = self.chi_rr(d)?;
        Ok(MukaiVector::new(1, d.clone(), chi - 1))
    }

    pub fn chern(&self, v: &MukaiVector) -> Result<Chern> {
        self.ensure_vector(v)?;
        let k_dot = self.ns_pair(&v.c1, &self.canonical())?;
        let chi = &v.rank + &v.s;
        let ch2 = to_rat(&(chi - &v.rank * self.chi_o())) + Rational::new(k_dot, int(2));
        Ok(Chern {
            rank: v.rank.clone(),
            c1: v.c1.clone(),
            ch2,
        })
    }

    pub fn from_chern(&self, ch: &Chern) -> Result<MukaiVector> {
        self.ensure_class(&ch.c1)?;
        let k_dot = self.ns_pair(&ch.c1, &self.canonical())?;
        let chi = &ch.ch2 - Rational::new(k_dot, int(2)) + to_rat(&(&ch.rank * self.chi_o()));
        let chi = as_integer(&chi).ok_or_else(|| {
            Error::NonIntegral(format!("Euler characteristic {chi} from ch2 = {}", ch.ch2))
        })?;
        Ok(MukaiVector::new(ch.rank.clone(), ch.c1.clone(), chi - &ch.rank))
    }

    /// `⟨v, w⟩ = c1(v)·c1(w) - r(v) s(w) - s(v) r(w)`.
    pub fn mukai_pair(&self, v: &MukaiVector, w: &MukaiVector) -> Result<Int> {
        let c = self.ns_pair(&v.c1, &w.c1)?;
        Ok(c - &v.rank * &w.s - &v.s * &w.rank)
    }

    /// Derived dual: `ch_i ↦ (-1)^i ch_i`. On K3 surfaces this negates `c1` only.
    pub fn mukai_dual(&self, v: &MukaiVector) -> Result<MukaiVector> {
        let k_dot = self.ns_pair(&v.c1, &self.canonical())?;
        Ok(MukaiVector::new(v.rank.clone(), -&v.c1, &v.s + k_dot))
    }

    /// Mukai vector of the K-theory product, computed through Chern characters.
    pub fn mukai_tensor(&self, v: &MukaiVector, w: &MukaiVector) -> Result<MukaiVector> {
        let a = self.chern(v)?;
        let b = self.chern(w)?;
        let c1 = &b.c1.scale(&a.rank) + &a.c1.scale(&b.rank);
        let ch2 = to_rat(&a.rank) * &b.ch2
            + to_rat(&b.rank) * &a.ch2
            + to_rat(&self.ns_pair(&a.c1, &b.c1)?);
        self.from_chern(&Chern {
            rank: &a.rank * &b.rank,
            c1,
            ch2,
        })
    }

    /// `v ⊗ O(D)`: multiplication by `e^D` at Chern level.
    pub fn twist(&self, v: &MukaiVector, d: &NsClass) -> Result<MukaiVector> {
        self.ensure_class(d)?;
        let a = self.chern(v)?;
        let c1 = &a.c1 + &d.scale(&a.rank);
        let ch2 = &a.ch2
            + to_rat(&self.ns_pair(&a.c1, d)?)
            + to_rat(&a.rank) * Rational::new(self.ns_pair(d, d)?, int(2));
        self.from_chern(&Chern {
            rank: a.rank,
            c1,
            ch2,
        })
    }

    /// Euler characteristic (Grothendieck–Riemann–Roch).
    pub fn chi_vec(&self, v: &MukaiVector) -> Result<Int> {
        self.ensure_vector(v)?;
        Ok(&v.rank + &v.s)
    }

    /// `(v, w) = χ(v·w)`, evaluated through the K-theory product.
    pub fn euler_form(&self, v: &MukaiVector, w: &MukaiVector) -> Result<Int> {
        self.euler_form_chern(&self.chern(v)?, &self.chern(w)?)
    }

    /// `∫ ch(a)·ch(b)·td(X)` with `td = 1 - K/2 + χ(O)·pt`.
    pub fn euler_form_chern(&self, a: &Chern, b: &Chern) -> Result<Int> {
        let c1 = &b.c1.scale(&a.rank) + &a.c1.scale(&b.rank);
        let twice = |c: &Chern| {
            as_integer(&(&c.ch2 + &c.ch2)).ok_or_else(|| Error::NonIntegral(format!("ch2 = {}", c.ch2)))
        };
        let twice_ch2 = &a.rank * twice(b)? + &b.rank * twice(a)? + self.ns_pair(&a.c1, &b.c1)? * 2;
        let twice_chi: Int = twice_ch2 - self.ns_pair(&c1, &self.canonical())? + &a.rank * &b.rank * self.chi_o() * 2;
        if twice_chi.is_odd() {
            return Err(Error::NonIntegral(format!("χ = {twice_chi}/2")));
        }
        Ok(twice_chi / 2)
    }

    /// `-⟨v, w^∨⟩`, the pairing-side expression of the Euler form on K3s.
    pub fn euler_form_via_pairing(&self, v: &MukaiVector, w: &MukaiVector) -> Result<Int> {
        let wd = self.mukai_dual(w)?;
        Ok(-self.mukai_pair(v, &wd)?)
    }

    /// `χ(v, w) = χ(v^∨·w)`, the Euler form of `RHom(v, w)`.
    pub fn hom_euler(&self, v: &MukaiVector, w: &MukaiVector) -> Result<Int> {
        let vd = self.mukai_dual(v)?;
        self.euler_form(&vd, w)
    }

    /// Expected dimension of the moduli space of stable sheaves.
    ///
    /// `⟨v,v⟩ + 2` on K3 surfaces; `χ(O) - χ(v, v)` on general elliptic
    /// surfaces, which agrees with the former when `χ(O) = 2`.
    pub fn moduli_dim(&self, v: &MukaiVector) -> Result<Int> {
        if self.is_k3() {
            Ok(self.mukai_pair(v, v)? + 2)
        } else {
            Ok(self.chi_o() - self.hom_euler(v, v)?)
        }
    }

    /// The normalized vector of rank `r` with `χ = 1` and moduli dimension `2a`:
    /// `c1 = σ + (a - r(r-1)χ(O)/2) f`.
    pub fn normalized_vector(&self, r: &Int, a: &Int) -> Result<MukaiVector> {
        self.require_elliptic()?;
        if *r < int(1) {
            return Err(Error::InvalidArgument(format!("rank must be at least 1, got {r}")));
        }
        let shift: Int = r * (r - 1) * self.chi_o();
        debug_assert!(shift.is_even());
        let fiber = a - shift / 2;
        Ok(MukaiVector::new(r.clone(), NsClass::sf(1, fiber), int(1) - r))
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SurfaceKind::GenericK3 { degree } => write!(f, "generic K3 of degree {degree}"),
            SurfaceKind::EllipticK3 => f.write_str("elliptic K3"),
            SurfaceKind::EllipticGeneral { chi_o } => write!(f, "elliptic surface with χ(O) = {chi_o}"),
        }
    }
}

impl SurfaceModel {
    pub fn describe(&self) -> alloc::string::String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k3() -> SurfaceModel {
        SurfaceModel::elliptic_k3()
    }

    fn mv(r: i64, x: i64, y: i64, s: i64) -> MukaiVector {
        MukaiVector::new(r, NsClass::sf(x, y), s)
    }

    #[test]
    fn ns_pair_examples() {
        let s = k3();
        assert_eq!(s.ns_pair(&NsClass::sigma(), &NsClass::sigma()).unwrap(), int(-2));
        assert_eq!(
            s.ns_pair(&NsClass::sf(1, 4), &NsClass::sf(1, -2)).unwrap(),
            int(0)
        );
        assert_eq!(s.ns_pair(&NsClass::sf(0, 0), &NsClass::sf(3, 7)).unwrap(), int(0));
        let g = SurfaceModel::elliptic_general(3).unwrap();
        assert_eq!(g.ns_pair(&NsClass::sigma(), &NsClass::sigma()).unwrap(), int(-3));
        assert_eq!(g.canonical(), NsClass::sf(0, 1));
    }

    #[test]
    fn model_mismatch_is_an_error() {
        let s = k3();
        let err = s.ns_pair(&NsClass::h(1), &NsClass::sigma()).unwrap_err();
        assert!(matches!(err, Error::ModelMismatch { .. }));
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(SurfaceModel::generic_k3(7).is_err());
        assert!(SurfaceModel::generic_k3(0).is_err());
        assert!(SurfaceModel::elliptic_general(0).is_err());
    }

    #[test]
    fn chi_rr_examples() {
        let s = k3();
        assert_eq!(s.chi_rr(&NsClass::sf(4, 8)).unwrap(), int(18));
        assert_eq!(s.chi_rr(&NsClass::sf(0, 0)).unwrap(), int(2));
        for m in 1..6 {
            for n in 2 * m..2 * m + 8 {
                assert_eq!(s.chi_rr(&NsClass::sf(m, n)).unwrap(), int(2 + m * (n - m)));
            }
        }
        let g = SurfaceModel::elliptic_general(4).unwrap();
        assert_eq!(g.chi_rr(&NsClass::sf(0, 0)).unwrap(), int(4));
    }

    #[test]
    fn h0_surface_examples() {
        let s = k3();
        let h0 = |m: i64, n: i64| s.h0_surface(&NsClass::sf(m, n)).unwrap();
        assert_eq!(h0(3, 8), Some(int(17)));
        assert_eq!(h0(4, 0), Some(int(1)));
        for a in 1..20 {
            assert_eq!(h0(0, a - 1), Some(int(a)));
        }
        assert_eq!(h0(2, -1), Some(int(0)));
        assert_eq!(h0(3, 4), Some(int(6)));
        assert_eq!(h0(4, 7), Some(int(14)));
        assert_eq!(h0(5, 1), Some(int(2)));
        assert_eq!(h0(-1, 4), Some(int(0)));
        assert!(SurfaceModel::generic_k3(2).unwrap().h0_surface(&NsClass::h(1)).is_err());
    }

    #[test]
    fn h0_agrees_with_rr_in_big_nef_range() {
        let s = k3();
        for m in 1..8 {
            for n in 2 * m..2 * m + 10 {
                let d = NsClass::sf(m, n);
                assert_eq!(s.h0_surface(&d).unwrap(), Some(s.chi_rr(&d).unwrap()));
            }
        }
    }

    #[test]
    fn mukai_pair_examples() {
        let s = k3();
        let o = s.structure_sheaf();
        assert_eq!(o, mv(1, 0, 0, 1));
        assert_eq!(s.mukai_pair(&o, &o).unwrap(), int(-2));
        assert_eq!(s.mukai_pair(&mv(2, 1, 0, -2), &mv(1, 0, 1, 0)).unwrap(), int(3));
        for a in 0..10 {
            let v = s.normalized_vector(&int(3), &int(a)).unwrap();
            assert_eq!(s.mukai_pair(&v, &v).unwrap(), int(2 * a - 2));
        }
    }

    #[test]
    fn dual_examples() {
        let s = k3();
        let o = s.structure_sheaf();
        assert_eq!(s.mukai_dual(&o).unwrap(), o);
        let v = mv(3, 1, 5, -2);
        assert_eq!(s.mukai_dual(&v).unwrap(), mv(3, -1, -5, -2));
    }

    #[test]
    fn tensor_examples() {
        let s = k3();
        let o = s.structure_sheaf();
        let p = s.point();
        assert_eq!(s.mukai_tensor(&o, &o).unwrap(), o);
        assert_eq!(s.mukai_tensor(&o, &p).unwrap(), p);
        let v = s.normalized_vector(&int(2), &int(9)).unwrap();
        let w = s.twist(&v, &NsClass::sf(0, -2)).unwrap();
        let prod = s.mukai_tensor(&v, &w).unwrap();
        assert_eq!(s.chern(&prod).unwrap().ch2, to_rat(&int(-8)));
        assert_eq!(s.chi_vec(&prod).unwrap(), int(0));
    }

    #[test]
    fn twist_examples() {
        let s = k3();
        for r in 1..5 {
            let v = s.normalized_vector(&int(r), &int(7)).unwrap();
            let t = s.twist(&v, &NsClass::fiber()).unwrap();
            assert_eq!(s.chi_vec(&t).unwrap(), s.chi_vec(&v).unwrap() + 1);
            assert_eq!(t, mv(r, 1, 7 - r * (r - 1) + r, 1 - r + 1));
            assert_eq!(s.twist(&v, &NsClass::sf(0, 0)).unwrap(), v);
        }
    }

    #[test]
    fn chi_vec_examples() {
        let s = k3();
        assert_eq!(s.chi_vec(&s.structure_sheaf()).unwrap(), int(2));
        assert_eq!(s.chi_vec(&s.point()).unwrap(), int(1));
        assert_eq!(s.chi_vec(&s.normalized_vector(&int(4), &int(3)).unwrap()).unwrap(), int(1));
    }

    #[test]
    fn euler_form_examples() {
        let s = k3();
        let o = s.structure_sheaf();
        assert_eq!(s.euler_form(&o, &o).unwrap(), int(2));
        assert_eq!(s.euler_form(&o, &s.point()).unwrap(), int(1));
        // The pairing-side identity carries a sign: ⟨O, O^∨⟩ = -2.
        assert_eq!(s.mukai_pair(&o, &s.mukai_dual(&o).unwrap()).unwrap(), int(-2));
        // Orthogonal pair on a generic K3 of degree 14.
        let g = SurfaceModel::generic_k3(14).unwrap();
        let v = MukaiVector::new(2, NsClass::h(1), -2);
        let w = MukaiVector::new(3, NsClass::h(1), -4);
        assert_eq!(g.euler_form(&v, &w).unwrap(), int(0));
        assert_eq!(g.mukai_pair(&v, &g.mukai_dual(&w).unwrap()).unwrap(), int(0));
    }

    #[test]
    fn moduli_dim_examples() {
        let s = k3();
        assert_eq!(s.moduli_dim(&s.normalized_vector(&int(2), &int(9)).unwrap()).unwrap(), int(18));
        assert_eq!(s.moduli_dim(&s.structure_sheaf()).unwrap(), int(0));
        assert_eq!(s.moduli_dim(&mv(2, 1, 0, -2)).unwrap(), int(8));
        for chi in 1..6 {
            let g = SurfaceModel::elliptic_general(chi).unwrap();
            for r in 1..6 {
                for a in 0..12 {
                    let v = g.normalized_vector(&int(r), &int(a)).unwrap();
                    assert_eq!(g.moduli_dim(&v).unwrap(), int(2 * a));
                    assert_eq!(g.chi_vec(&v).unwrap(), int(1));
                }
            }
        }
    }

    #[test]
    fn normalized_vector_examples() {
        let s = k3();
        assert_eq!(s.normalized_vector(&int(2), &int(9)).unwrap(), mv(2, 1, 7, -1));
        assert_eq!(s.normalized_vector(&int(1), &int(5)).unwrap(), mv(1, 1, 5, 0));
        assert!(s.normalized_vector(&int(0), &int(5)).is_err());
        assert!(SurfaceModel::generic_k3(2)
            .unwrap()
            .normalized_vector(&int(1), &int(1))
            .is_err());
    }

    #[test]
    fn chern_round_trip_on_odd_chi() {
        let g = SurfaceModel::elliptic_general(3).unwrap();
        let v = mv(2, 1, 4, -3);
        let ch = g.chern(&v).unwrap();
        assert_eq!(g.from_chern(&ch).unwrap(), v);
        assert!(!ch.ch2.is_integer());
    }

    fn small() -> impl Strategy<Value = i64> {
        -6i64..=6
    }

    fn vec_strategy() -> impl Strategy<Value = MukaiVector> {
        (small(), small(), small(), small()).prop_map(|(r, x, y, s)| mv(r, x, y, s))
    }

    fn models() -> impl Strategy<Value = SurfaceModel> {
        (1i64..=5).prop_map(|chi| SurfaceModel::elliptic_general(chi).unwrap())
    }

    proptest! {
        #[test]
        fn ns_pair_is_symmetric_bilinear(a in small(), b in small(), c in small(), d in small(),
                                         e in small(), f in small(), k in small(), model in models()) {
            let x = NsClass::sf(a, b);
            let y = NsClass::sf(c, d);
            let z = NsClass::sf(e, f);
            let p = |u: &NsClass, v: &NsClass| model.ns_pair(u, v).unwrap();
            prop_assert_eq!(p(&x, &y), p(&y, &x));
            prop_assert_eq!(p(&(&x + &z.scale(&int(k))), &y), p(&x, &y) + int(k) * p(&z, &y));
        }

        #[test]
        fn pairing_symmetric_and_dual_invariant(v in vec_strategy(), w in vec_strategy()) {
            let s = k3();
            prop_assert_eq!(s.mukai_pair(&v, &w).unwrap(), s.mukai_pair(&w, &v).unwrap());
            let vd = s.mukai_dual(&v).unwrap();
            let wd = s.mukai_dual(&w).unwrap();
            prop_assert_eq!(s.mukai_pair(&vd, &wd).unwrap(), s.mukai_pair(&v, &w).unwrap());
            prop_assert_eq!(s.mukai_dual(&vd).unwrap(), v);
        }

        #[test]
        fn tensor_ring_laws(u in vec_strategy(), v in vec_strategy(), w in vec_strategy(), model in models()) {
            let t = |a: &MukaiVector, b: &MukaiVector| model.mukai_tensor(a, b).unwrap();
            prop_assert_eq!(t(&u, &v), t(&v, &u));
            prop_assert_eq!(t(&t(&u, &v), &w), t(&u, &t(&v, &w)));
            prop_assert_eq!(t(&u, &model.structure_sheaf()), u.clone());
        }

        #[test]
        fn twist_is_tensor_with_line_bundle(v in vec_strategy(), x in small(), y in small(), model in models()) {
            let d = NsClass::sf(x, y);
            let lb = model.line_bundle(&d).unwrap();
            prop_assert_eq!(model.twist(&v, &d).unwrap(), model.mukai_tensor(&v, &lb).unwrap());
            let back = model.twist(&model.twist(&v, &d).unwrap(), &-&d).unwrap();
            prop_assert_eq!(back, v);
        }

        #[test]
        fn twist_preserves_k3_pairing(v in vec_strategy(), w in vec_strategy(), x in small(), y in small()) {
            let s = k3();
            let d = NsClass::sf(x, y);
            let tv = s.twist(&v, &d).unwrap();
            let tw = s.twist(&w, &d).unwrap();
            prop_assert_eq!(s.mukai_pair(&tv, &tw).unwrap(), s.mukai_pair(&v, &w).unwrap());
        }
    }
}
