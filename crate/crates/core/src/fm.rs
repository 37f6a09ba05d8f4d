//! Cohomological action of the relative Fourier–Mukai transform on an
//! elliptic surface with section, derived from its values on O'Grady sheaves.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::arith::{as_integer, int, to_rat, Int, Rational};
use crate::error::{Error, Result};
use crate::lattice::{MukaiVector, NsBasis, NsClass, SurfaceModel};
use crate::linalg::{determinant, inverse, mat_mul, transpose, LinearSystem};

/// K-theory class `(rank, degree)` on a genus-one fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiberClass {
    pub rank: Int,
    pub degree: Int,
}

impl FiberClass {
    pub fn new(rank: impl Into<Int>, degree: impl Into<Int>) -> Self {
        FiberClass {
            rank: rank.into(),
            degree: degree.into(),
        }
    }
}

/// Fiberwise transform: `(r, d) ↦ (d, -r)`.
pub fn fiber_fm(c: &FiberClass) -> FiberClass {
    FiberClass::new(c.degree.clone(), -&c.rank)
}

/// `c1` of the transform by Grothendieck–Riemann–Roch, on an elliptic K3:
/// `-rσ + (χ - 2r + l) f` for `c1(v) = lσ + mf`.
pub fn fm_c1_grr(v: &MukaiVector, s: &SurfaceModel) -> Result<NsClass> {
    s.require_elliptic_k3()?;
    s.ensure_vector(v)?;
    let (l, _) = v.c1.sigma_fiber().expect("elliptic basis");
    let chi = s.chi_vec(v)?;
    Ok(NsClass::sf(-&v.rank, chi - &v.rank * 2 + l))
}

/// 4×4 integer matrix acting on `(r, x, y, s)` for `v = (r; xσ + yf; s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FmMatrix {
    pub entries: [[Int; 4]; 4],
    pub chi_o: Int,
}

impl FmMatrix {
    /// Image of the `j`-th basis vector.
    pub fn column(&self, j: usize) -> [Int; 4] {
        core::array::from_fn(|i| self.entries[i][j].clone())
    }

    pub fn columns(&self) -> [[Int; 4]; 4] {
        core::array::from_fn(|j| self.column(j))
    }

    fn rational(&self) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(to_rat).collect())
            .collect()
    }

    pub fn determinant(&self) -> Int {
        let d = determinant(&self.rational());
        as_integer(&d).expect("integer matrix")
    }

    fn from_rational(m: &[Vec<Rational>], chi_o: Int) -> Result<Self> {
        let mut entries: [[Int; 4]; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                entries[i][j] = as_integer(&m[i][j]).ok_or_else(|| {
                    Error::NonIntegral(format!("matrix entry ({i},{j}) = {}", m[i][j]))
                })?;
            }
        }
        Ok(FmMatrix { entries, chi_o })
    }
}

impl fmt::Display for FmMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} {} {} {}", row[0], row[1], row[2], row[3])?;
        }
        Ok(())
    }
}

fn coords(v: &MukaiVector) -> Result<[Int; 4]> {
    match v.c1.sigma_fiber() {
        Some((x, y)) => Ok([v.rank.clone(), x.clone(), y.clone(), v.s.clone()]),
        None => Err(Error::ModelMismatch {
            expected: NsBasis::SigmaF.tag(),
            found: v.c1.basis().tag(),
        }),
    }
}

fn from_coords(c: &[Int; 4]) -> MukaiVector {
    MukaiVector::new(c[0].clone(), NsClass::sf(c[1].clone(), c[2].clone()), c[3].clone())
}

fn basis_vector(j: usize) -> MukaiVector {
    let c: [Int; 4] = core::array::from_fn(|i| if i == j { int(1) } else { int(0) });
    from_coords(&c)
}

/// Matrix–vector product in `(r, x, y, s)` coordinates.
pub fn fm_apply(m: &FmMatrix, v: &MukaiVector) -> Result<MukaiVector> {
    let c = coords(v)?;
    let out: [Int; 4] = core::array::from_fn(|i| {
        (0..4).fold(Int::zero(), |acc, j| acc + &m.entries[i][j] * &c[j])
    });
    Ok(from_coords(&out))
}

/// `v(E_r^∨)` for the normalized O'Grady sheaf `E_r`.
pub fn ogrady_dual(s: &SurfaceModel, r: &Int, a: &Int) -> Result<MukaiVector> {
    s.mukai_dual(&s.normalized_vector(r, a)?)
}

/// `v(I_Z(D))` for `Z` of length `a`.
pub fn ideal_twist(s: &SurfaceModel, d: &NsClass, a: &Int) -> Result<MukaiVector> {
    Ok(&s.line_bundle(d)? - &s.point().scale(a))
}

/// `v(O_σ) = v(O) - v(O(-σ))`.
pub fn section_sheaf(s: &SurfaceModel) -> Result<MukaiVector> {
    Ok(&s.structure_sheaf() - &s.line_bundle(&-NsClass::sigma())?)
}

/// Expected image of `E_r^∨`: `-v(I_Z(rσ + rχ f))`.
pub fn dual_image_target(s: &SurfaceModel, r: &Int, a: &Int) -> Result<MukaiVector> {
    let d = NsClass::sf(r.clone(), r * s.chi_o());
    Ok(-ideal_twist(s, &d, a)?)
}

/// Expected image of `E_r`: `v(I_Z^∨ ⊗ O(-rσ - (r-1)χ f))`.
pub fn image_target(s: &SurfaceModel, r: &Int, a: &Int) -> Result<MukaiVector> {
    let i_z = ideal_twist(s, &NsClass::sf(0, 0), a)?;
    let fiber: Int = (int(1) - r) * s.chi_o();
    let d = NsClass::sf(-r, fiber);
    s.twist(&s.mukai_dual(&i_z)?, &d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmDiagnostics {
    pub constraints: Vec<String>,
    pub rank: usize,
    pub unknowns: usize,
    /// Largest `|A x - b|` entry over all scalar equations.
    pub max_residual: Rational,
    pub unique: bool,
}

/// Pairs `(r, a)` whose `E_r^∨` images pin down the matrix.
pub const DERIVATION_POINTS: [(i64, i64); 6] = [(1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 2)];

/// Solves for the unique linear map sending `v(O) ↦ -v(O_σ)` and
/// `v(E_r^∨) ↦ -v(I_Z(rσ + rχ f))`.
pub fn derive_fm_matrix(s: &SurfaceModel) -> Result<(FmMatrix, FmDiagnostics)> {
    s.require_elliptic()?;
    let mut pairs: Vec<(String, MukaiVector, MukaiVector)> = Vec::new();
    pairs.push(("O ↦ -O_σ".into(), s.structure_sheaf(), -section_sheaf(s)?));
    for (r, a) in DERIVATION_POINTS {
        let (r, a) = (int(r), int(a));
        pairs.push((
            format!("E_{r}^∨ (a={a}) ↦ -I_Z({r}σ+{}f)", &r * s.chi_o()),
            ogrady_dual(s, &r, &a)?,
            dual_image_target(s, &r, &a)?,
        ));
    }
    let mut sys = LinearSystem::new(16);
    for (label, src, tgt) in &pairs {
        let sc = coords(src)?;
        let tc = coords(tgt)?;
        for i in 0..4 {
            let mut row = alloc::vec![Rational::zero(); 16];
            for j in 0..4 {
                row[4 * i + j] = to_rat(&sc[j]);
            }
            sys.push(format!("{label} [component {i}]"), row, to_rat(&tc[i]));
        }
    }
    let x = sys.solve_unique()?;
    let max_residual = sys
        .residuals(&x)
        .into_iter()
        .map(|r| if r < Rational::zero() { -r } else { r })
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let m: Vec<Vec<Rational>> = (0..4).map(|i| x[4 * i..4 * i + 4].to_vec()).collect();
    let matrix = FmMatrix::from_rational(&m, s.chi_o())?;
    let diag = FmDiagnostics {
        constraints: pairs.into_iter().map(|(l, _, _)| l).collect(),
        rank: 16,
        unknowns: 16,
        max_residual,
        unique: true,
    };
    Ok((matrix, diag))
}

/// Gram matrix of `χ(e_i, e_j)` on the coordinate basis.
pub fn hom_euler_gram(s: &SurfaceModel) -> Result<Vec<Vec<Rational>>> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| s.hom_euler(&basis_vector(i), &basis_vector(j)).map(|v| to_rat(&v)))
                .collect()
        })
        .collect()
}

/// The transform in the opposite direction, as the adjoint of `M` for the
/// Euler form: `χ(Mx, y) = χ(x, M_T y)`.
pub fn adjoint_matrix(m: &FmMatrix, s: &SurfaceModel) -> Result<FmMatrix> {
    let g = hom_euler_gram(s)?;
    let gi = inverse(&g).ok_or_else(|| Error::CheckFailed("Euler form is degenerate".into()))?;
    let t = mat_mul(&gi, &mat_mul(&transpose(&m.rational()), &g));
    FmMatrix::from_rational(&t, m.chi_o.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmSuiteReport {
    pub determinant: Int,
    /// Basis pairs `(i, j)` where `χ(Me_i, Me_j) ≠ χ(e_i, e_j)`.
    pub isometry_failures: Vec<(usize, usize)>,
    /// On K3 lattices also the Mukai pairing.
    pub mukai_isometry_failures: Vec<(usize, usize)>,
    pub dual_image_failures: Vec<(Int, Int)>,
    pub image_failures: Vec<(Int, Int)>,
    pub twist_failures: Vec<(Int, Int, Int)>,
    pub bridge_identity: bool,
    pub transform_t: FmMatrix,
    /// `None` off the elliptic K3 lattice.
    pub grr_failures: Option<Vec<(Int, Int)>>,
    pub checked_points: usize,
}

impl FmSuiteReport {
    pub fn all_pass(&self) -> bool {
        (self.determinant == int(1) || self.determinant == int(-1))
            && self.isometry_failures.is_empty()
            && self.mukai_isometry_failures.is_empty()
            && self.dual_image_failures.is_empty()
            && self.image_failures.is_empty()
            && self.twist_failures.is_empty()
            && self.bridge_identity
            && self.grr_failures.as_ref().is_none_or(|f| f.is_empty())
    }

    pub fn isometry_passed(&self) -> usize {
        16 - self.isometry_failures.len()
    }
}

/// Runs every transform identity over `1 ≤ r ≤ r_max`, `0 ≤ a ≤ a_max`.
pub fn verify_fm_suite(
    m: &FmMatrix,
    s: &SurfaceModel,
    r_max: i64,
    a_max: i64,
) -> Result<FmSuiteReport> {
    s.require_elliptic()?;
    let mut isometry_failures = Vec::new();
    let mut mukai_isometry_failures = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let (ei, ej) = (basis_vector(i), basis_vector(j));
            let (mi, mj) = (fm_apply(m, &ei)?, fm_apply(m, &ej)?);
            if s.hom_euler(&mi, &mj)? != s.hom_euler(&ei, &ej)? {
                isometry_failures.push((i, j));
            }
            if s.is_k3() && s.mukai_pair(&mi, &mj)? != s.mukai_pair(&ei, &ej)? {
                mukai_isometry_failures.push((i, j));
            }
        }
    }
    let mut dual_image_failures = Vec::new();
    let mut image_failures = Vec::new();
    let mut twist_failures = Vec::new();
    let mut grr_failures = s.is_elliptic_k3().then(Vec::new);
    let mut checked_points = 0;
    for r in 1..=r_max {
        for a in 0..=a_max {
            let (r, a) = (int(r), int(a));
            checked_points += 1;
            let dual = ogrady_dual(s, &r, &a)?;
            let image = fm_apply(m, &dual)?;
            if image != dual_image_target(s, &r, &a)? {
                dual_image_failures.push((r.clone(), a.clone()));
            }
            let e = s.normalized_vector(&r, &a)?;
            let image_e = fm_apply(m, &e)?;
            if image_e != image_target(s, &r, &a)? {
                image_failures.push((r.clone(), a.clone()));
            }
            for n in -3..=3 {
                let tw = s.twist(&dual, &NsClass::sf(0, n))?;
                let shifted = fm_apply(m, &tw)?;
                if shifted.c1 != &image.c1 - &NsClass::sf(0, n) {
                    twist_failures.push((r.clone(), a.clone(), int(n)));
                }
            }
            if let Some(fails) = grr_failures.as_mut() {
                let ok = [&dual, &e]
                    .iter()
                    .map(|v| Ok(fm_c1_grr(v, s)? == fm_apply(m, v)?.c1))
                    .collect::<Result<Vec<bool>>>()?
                    .into_iter()
                    .all(|b| b);
                if !ok {
                    fails.push((r.clone(), a.clone()));
                }
            }
        }
    }
    let transform_t = adjoint_matrix(m, s)?;
    let product = mat_mul(&transform_t.rational(), &m.rational());
    let bridge_identity = product
        .iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == if i == j { Rational::one() } else { Rational::zero() }));
    Ok(FmSuiteReport {
        determinant: m.determinant(),
        isometry_failures,
        mukai_isometry_failures,
        dual_image_failures,
        image_failures,
        twist_failures,
        bridge_identity,
        transform_t,
        grr_failures,
        checked_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> SurfaceModel {
        SurfaceModel::elliptic_k3()
    }

    #[test]
    fn fiber_fm_examples() {
        for r in -5..6 {
            assert_eq!(fiber_fm(&FiberClass::new(r, 1)), FiberClass::new(1, -r));
            assert_eq!(fiber_fm(&FiberClass::new(r, -1)), FiberClass::new(-1, -r));
            for d in -5..6 {
                let c = FiberClass::new(r, d);
                assert_eq!(fiber_fm(&fiber_fm(&c)), FiberClass::new(-r, -d));
            }
        }
        assert_eq!(fiber_fm(&FiberClass::new(0, 1)), FiberClass::new(1, 0));
    }

    #[test]
    fn grr_examples() {
        let s = k3();
        assert_eq!(fm_c1_grr(&s.structure_sheaf(), &s).unwrap(), NsClass::sf(-1, 0));
        for r in 1..6 {
            let dual = ogrady_dual(&s, &int(r), &int(4)).unwrap();
            assert_eq!(fm_c1_grr(&dual, &s).unwrap(), NsClass::sf(-r, -2 * r));
            for n in -3..4 {
                let tw = s.twist(&dual, &NsClass::sf(0, n)).unwrap();
                assert_eq!(fm_c1_grr(&tw, &s).unwrap(), NsClass::sf(-r, -2 * r - n));
            }
        }
        assert!(fm_c1_grr(&s.structure_sheaf(), &SurfaceModel::elliptic_general(3).unwrap()).is_err());
    }

    #[test]
    fn derived_k3_matrix() {
        let (m, diag) = derive_fm_matrix(&k3()).unwrap();
        assert!(diag.unique);
        assert!(diag.max_residual.is_zero());
        let cols = m.columns();
        let expect = [[0, -1, -1, -1], [1, 0, 1, 1], [0, 0, 0, -1], [0, 0, 1, 0]];
        for j in 0..4 {
            assert_eq!(cols[j].to_vec(), expect[j].iter().map(|&x| int(x)).collect::<Vec<_>>());
        }
        let pt = fm_apply(&m, &k3().point()).unwrap();
        assert_eq!(pt, MukaiVector::new(0, NsClass::sf(0, 1), 0));
        assert_eq!(fiber_fm(&FiberClass::new(0, 1)), FiberClass::new(1, 0));
        assert_eq!(m.determinant(), int(1));
    }

    #[test]
    fn image_vector_form() {
        let s = k3();
        let (m, _) = derive_fm_matrix(&s).unwrap();
        let img = fm_apply(&m, &s.normalized_vector(&int(2), &int(9)).unwrap()).unwrap();
        assert_eq!(img, MukaiVector::new(1, NsClass::sf(-2, -2), -8));
        for r in 1..7 {
            for a in 0..21 {
                let t = image_target(&s, &int(r), &int(a)).unwrap();
                let expect = MukaiVector::new(1, NsClass::sf(-r, -2 * (r - 1)), (r - 1) * (r - 1) - a);
                assert_eq!(t, expect);
            }
        }
        let base = fm_apply(&m, &s.normalized_vector(&int(1), &int(3)).unwrap()).unwrap();
        assert_eq!(base, image_target(&s, &int(1), &int(3)).unwrap());
    }

    #[test]
    fn suite_passes_on_k3() {
        let s = k3();
        let (m, _) = derive_fm_matrix(&s).unwrap();
        let rep = verify_fm_suite(&m, &s, 6, 20).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.isometry_passed(), 16);
        assert_eq!(fm_apply(&m, &MukaiVector::zero(NsBasis::SigmaF)).unwrap(), MukaiVector::zero(NsBasis::SigmaF));
    }

    #[test]
    fn general_chi_matrices() {
        let (k3m, _) = derive_fm_matrix(&k3()).unwrap();
        for chi in 1..6 {
            let g = SurfaceModel::elliptic_general(chi).unwrap();
            let (m, _) = derive_fm_matrix(&g).unwrap();
            let rep = verify_fm_suite(&m, &g, 4, 8).unwrap();
            assert!(rep.all_pass(), "chi = {chi}: {rep:?}");
            let expect = [
                [0, -1, -(chi - 1), -1],
                [1, 0, chi - 1, chi - 1],
                [0, 0, 0, -1],
                [0, 0, 1, 0],
            ];
            for (j, col) in expect.iter().enumerate() {
                assert_eq!(m.column(j), col.map(int));
            }
            if chi == 2 {
                assert_eq!(m.entries, k3m.entries);
            }
        }
    }

    #[test]
    fn rejects_non_elliptic() {
        assert!(derive_fm_matrix(&SurfaceModel::generic_k3(4).unwrap()).is_err());
    }
}
