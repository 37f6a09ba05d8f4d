//! Divisor classes on Hilbert schemes of points `X^[a]` and on products
//! `X^[a] × X^[b]`, via `Pic(X^[a]) = Pic(X) ⊕ Z·M`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::arith::{binom, int, to_rat, Int, Rational};
use crate::duality::{DualityInstance, TowerParams};
use crate::error::{Error, Result};
use crate::linalg::LinearSystem;
use crate::lattice::{NsClass, SurfaceModel};

/// `base_(a) ⊗ M^{m}` on `X^[a]`. `L^[a]` is `(L, 1)`, `L_(a)` is `(L, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbPicClass {
    pub a: Int,
    pub base: NsClass,
    pub m: Int,
}

impl HilbPicClass {
    pub fn new(a: impl Into<Int>, base: NsClass, m: impl Into<Int>) -> Result<Self> {
        let a = a.into();
        if a < int(1) {
            return Err(Error::InvalidArgument(format!("number of points must be positive, got {a}")));
        }
        Ok(HilbPicClass { a, base, m: m.into() })
    }

    /// `L^[a]`
    pub fn tautological_det(a: &Int, l: &NsClass) -> Result<Self> {
        Self::new(a.clone(), l.clone(), 1)
    }

    /// `L_(a)`
    pub fn symmetric(a: &Int, l: &NsClass) -> Result<Self> {
        Self::new(a.clone(), l.clone(), 0)
    }

    pub fn trivial(a: &Int, basis: crate::NsBasis) -> Result<Self> {
        Self::new(a.clone(), NsClass::zero(basis), 0)
    }

    fn same_space(&self, o: &Self) -> Result<()> {
        if self.a != o.a {
            return Err(Error::InvalidArgument(format!(
                "classes live on X^[{}] and X^[{}]",
                self.a, o.a
            )));
        }
        if self.base.basis() != o.base.basis() {
            return Err(Error::ModelMismatch {
                expected: self.base.basis().tag(),
                found: o.base.basis().tag(),
            });
        }
        Ok(())
    }

    pub fn plus(&self, o: &Self) -> Result<Self> {
        self.same_space(o)?;
        Ok(HilbPicClass {
            a: self.a.clone(),
            base: &self.base + &o.base,
            m: &self.m + &o.m,
        })
    }

    pub fn scale(&self, k: &Int) -> Self {
        HilbPicClass {
            a: self.a.clone(),
            base: self.base.scale(k),
            m: &self.m * k,
        }
    }

    pub fn minus(&self, o: &Self) -> Result<Self> {
        self.plus(&o.scale(&int(-1)))
    }

    pub fn is_trivial(&self) -> bool {
        self.base.is_zero() && self.m.is_zero()
    }
}

impl fmt::Display for HilbPicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})_({}) ⊗ M^{}", self.base, self.a, self.m)
    }
}

/// External product `left ⊠ right` on `X^[a] × X^[b]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductClass {
    pub left: HilbPicClass,
    pub right: HilbPicClass,
}

impl ProductClass {
    pub fn new(left: HilbPicClass, right: HilbPicClass) -> Self {
        ProductClass { left, right }
    }

    pub fn plus(&self, o: &Self) -> Result<Self> {
        Ok(ProductClass {
            left: self.left.plus(&o.left)?,
            right: self.right.plus(&o.right)?,
        })
    }

    pub fn scale(&self, k: &Int) -> Self {
        ProductClass {
            left: self.left.scale(k),
            right: self.right.scale(k),
        }
    }

    pub fn minus(&self, o: &Self) -> Result<Self> {
        self.plus(&o.scale(&int(-1)))
    }
}

impl fmt::Display for ProductClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊠ {}", self.left, self.right)
    }
}

fn h0_or_unknown(l: &NsClass, s: &SurfaceModel) -> Result<Option<Int>> {
    s.h0_surface(l)
}

/// `h⁰(X^[a], L_(a)) = C(h⁰(L) + a - 1, a)`.
pub fn taut_sym_sections(l: &NsClass, a: &Int, s: &SurfaceModel) -> Result<Option<Int>> {
    Ok(h0_or_unknown(l, s)?.map(|h| binom(&(h + a - 1), a)))
}

/// `h⁰(X^[a], L^[a]) = C(h⁰(L), a)`.
pub fn taut_det_sections(l: &NsClass, a: &Int, s: &SurfaceModel) -> Result<Option<Int>> {
    Ok(h0_or_unknown(l, s)?.map(|h| binom(&h, a)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedClass {
    Single(HilbPicClass),
    Product(ProductClass),
}

impl NamedClass {
    pub fn single(self) -> Option<HilbPicClass> {
        match self {
            NamedClass::Single(c) => Some(c),
            NamedClass::Product(_) => None,
        }
    }

    pub fn product(self) -> Option<ProductClass> {
        match self {
            NamedClass::Product(p) => Some(p),
            NamedClass::Single(_) => None,
        }
    }
}

fn need_b(name: &str, b: Option<&Int>) -> Result<Int> {
    b.cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("class {name} needs both a and b")))
}

fn single_named(name: &str, a: &Int) -> Result<HilbPicClass> {
    match name {
        "Q" => HilbPicClass::tautological_det(a, &NsClass::sf(0, a - 1)),
        "R" => HilbPicClass::new(a.clone(), NsClass::sf(0, 0), -2),
        "S" => HilbPicClass::symmetric(a, &NsClass::sigma()),
        _ => Err(Error::InvalidArgument(format!("unknown class name {name:?}"))),
    }
}

/// The boundary classes `Q`, `R`, `S` on `X^[a]`, and `Q3`, `Q1`, `Q2`,
/// `R1`, `R2`, `S1`, `S2` on `X^[a] × X^[b]`.
pub fn named_class(name: &str, a: &Int, b: Option<&Int>, s: &SurfaceModel) -> Result<NamedClass> {
    s.require_elliptic()?;
    if *a < int(1) {
        return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
    }
    match name {
        "Q" | "R" | "S" => Ok(NamedClass::Single(single_named(name, a)?)),
        "Q3" => {
            let b = need_b(name, b)?;
            Ok(NamedClass::Product(ProductClass::new(
                HilbPicClass::symmetric(a, &NsClass::sf(0, b.clone()))?,
                HilbPicClass::symmetric(&b, &NsClass::sf(0, a.clone()))?,
            )))
        }
        "Q1" | "Q2" | "R1" | "R2" | "S1" | "S2" => {
            let b = need_b(name, b)?;
            let base = &name[..1];
            let trivial_a = HilbPicClass::symmetric(a, &NsClass::sf(0, 0))?;
            let trivial_b = HilbPicClass::symmetric(&b, &NsClass::sf(0, 0))?;
            let p = if name.ends_with('1') {
                ProductClass::new(single_named(base, a)?, trivial_b)
            } else {
                ProductClass::new(trivial_a, single_named(base, &b)?)
            };
            Ok(NamedClass::Product(p))
        }
        _ => Err(Error::InvalidArgument(format!("unknown class name {name:?}"))),
    }
}

/// `τ*` for `τ: X^[a] × X^[b] ⇢ X^[a+b]`: the diagonal on `Pic(X) ⊕ Z`.
pub fn tau_pullback(c: &HilbPicClass, a: &Int, b: &Int) -> Result<ProductClass> {
    if *a < int(1) || *b < int(1) {
        return Err(Error::InvalidArgument(format!("a and b must be positive, got {a}, {b}")));
    }
    if c.a != a + b {
        return Err(Error::InvalidArgument(format!(
            "class lives on X^[{}] but a + b = {}",
            c.a,
            a + b
        )));
    }
    Ok(ProductClass::new(
        HilbPicClass::new(a.clone(), c.base.clone(), c.m.clone())?,
        HilbPicClass::new(b.clone(), c.base.clone(), c.m.clone())?,
    ))
}

pub fn is_tau_pullback(p: &ProductClass) -> bool {
    p.left.base == p.right.base && p.left.m == p.right.m
}

/// Unknowns of the Γ solve, ordered so that the dependent coefficients are
/// eliminated first.
pub const GAMMA_UNKNOWNS: [&str; 5] = ["q1", "r2", "s2", "r1", "s1"];
const GAMMA_NAMES: [&str; 5] = ["Q1", "R2", "S2", "R1", "S1"];

/// `(dependent, [(coefficient, free variable)], constant)`.
pub type Relation = (String, Vec<(Rational, String)>, Rational);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSolution {
    pub params: TowerParams,
    /// One relation per pivot.
    pub relations: Vec<Relation>,
    pub free: Vec<String>,
    /// Constraint labels used in the solve.
    pub constraints: Vec<String>,
    /// `τ*(Γ₀) = Γ` with `Γ₀ = r1·R + s1·S`, checked on every free basis vector.
    pub gamma0_is_r1_r_plus_s1_s: bool,
}

impl GammaSolution {
    pub fn relation_strings(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|(dep, terms, c)| {
                let mut parts: Vec<String> = terms
                    .iter()
                    .map(|(k, v)| {
                        if *k == to_rat(&int(1)) {
                            v.clone()
                        } else {
                            format!("{k}·{v}")
                        }
                    })
                    .collect();
                if !c.is_zero() || parts.is_empty() {
                    parts.push(c.to_string());
                }
                format!("{dep} = {}", parts.join(" + "))
            })
            .collect()
    }
}

/// Solves the pullback constraint on `Γ = q1 Q1 + r1 R1 + r2 R2 + s1 S1 + s2 S2`
/// (with `q2 = q3 = 0`).
pub fn solve_gamma_constraints(params: &TowerParams, s: &SurfaceModel) -> Result<GammaSolution> {
    s.require_elliptic()?;
    let (a, b) = (&params.a, &params.b);
    let gens: Vec<ProductClass> = GAMMA_NAMES
        .iter()
        .map(|n| named_class(n, a, Some(b), s).map(|c| c.product().expect("product class")))
        .collect::<Result<_>>()?;
    let coord = |p: &ProductClass| -> Vec<Int> {
        let mut v = p.left.base.coeffs();
        v.push(p.left.m.clone());
        v.extend(p.right.base.coeffs());
        v.push(p.right.m.clone());
        v
    };
    let cols: Vec<Vec<Int>> = gens.iter().map(coord).collect();
    let half = cols[0].len() / 2;
    let labels = ["σ", "f", "M"];
    let mut sys = LinearSystem::new(GAMMA_UNKNOWNS.len());
    for (k, label) in labels.iter().enumerate().take(half) {
        let row = cols.iter().map(|c| to_rat(&(&c[k] - &c[k + half]))).collect();
        sys.push(format!("{label}-coefficient diagonal"), row, Rational::zero());
    }
    // Q and R are empty on X^[1].
    let unit = |i: usize| {
        let mut row = vec![Rational::zero(); GAMMA_UNKNOWNS.len()];
        row[i] = to_rat(&int(1));
        row
    };
    if *a == int(1) {
        sys.push("Q1 empty on X^[1]", unit(0), Rational::zero());
        sys.push("R1 empty on X^[1]", unit(3), Rational::zero());
    }
    if *b == int(1) {
        sys.push("R2 empty on X^[1]", unit(1), Rational::zero());
    }
    let sol = sys.general_solution()?;
    let free: Vec<String> = sol.free.iter().map(|&i| GAMMA_UNKNOWNS[i].to_string()).collect();
    let relations = sol
        .pivots
        .iter()
        .map(|&p| {
            let terms = sol
                .free
                .iter()
                .zip(&sol.nullspace)
                .filter(|(_, n)| !n[p].is_zero())
                .map(|(&fi, n)| (n[p].clone(), GAMMA_UNKNOWNS[fi].to_string()))
                .collect();
            (GAMMA_UNKNOWNS[p].to_string(), terms, sol.particular[p].clone())
        })
        .collect();

    // Γ₀ = r1·R + s1·S on X^[a+b]; compare its pullback with Γ on each free direction.
    let n = a + b;
    let r_cls = single_named("R", &n)?;
    let s_cls = single_named("S", &n)?;
    let mut gamma0_ok = true;
    for null in &sol.nullspace {
        let mut gamma = ProductClass::new(
            HilbPicClass::symmetric(a, &NsClass::sf(0, 0))?,
            HilbPicClass::symmetric(b, &NsClass::sf(0, 0))?,
        );
        for (coef, g) in null.iter().zip(&gens) {
            let k = crate::arith::as_integer(coef).ok_or_else(|| {
                Error::NonIntegral(format!("Γ direction coefficient {coef}"))
            })?;
            gamma = gamma.plus(&g.scale(&k))?;
        }
        let r1 = crate::arith::as_integer(&null[3]).unwrap_or_default();
        let s1 = crate::arith::as_integer(&null[4]).unwrap_or_default();
        let gamma0 = r_cls.scale(&r1).plus(&s_cls.scale(&s1))?;
        gamma0_ok &= tau_pullback(&gamma0, a, b)? == gamma;
    }
    Ok(GammaSolution {
        params: params.clone(),
        relations,
        free,
        constraints: sys.labels().to_vec(),
        gamma0_is_r1_r_plus_s1_s: gamma0_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionReport {
    pub params: TowerParams,
    pub l: NsClass,
    pub h0_l_minus_bf: Int,
    pub h0_l_minus_af: Int,
    pub h0_l_minus_a1f: Int,
    pub h0_l_minus_b1f: Int,
    pub h0_l_minus_sigma: Int,
    /// `C(h⁰(L(-bf)), a) · C(h⁰(L(-af)), b)`
    pub q3_sections: Int,
    /// `C(h⁰(L((1-a)f)) + a - 1, a) · C(h⁰(L((1-b)f)) + b - 1, b)`
    pub q1q2_sections: Int,
    /// `C(h⁰(L(-σ)), a + b)`
    pub s_sections: Int,
    /// `f`-coefficient of `L((1-a-b)f)`
    pub q_fiber_coeff: Int,
    pub q3_excluded: bool,
    pub q1q2_excluded: bool,
    pub exceptional_case: bool,
    pub s_proper: bool,
    pub q_proper: bool,
}

fn known_h0(s: &SurfaceModel, d: &NsClass) -> Result<Int> {
    s.h0_surface(d)?
        .ok_or_else(|| Error::CheckFailed(format!("h⁰({d}) is outside the known ranges")))
}

/// The section counts ruling out `Q3`, `Q1 + Q2`, `S` and `Q` as components.
pub fn exclusion_report(params: &TowerParams, s: &SurfaceModel) -> Result<ExclusionReport> {
    s.require_elliptic_k3()?;
    let inst = DualityInstance::new(s.clone(), params.clone())?;
    let (a, b) = (&params.a, &params.b);
    let l = inst.l.clone();
    let fib = |k: Int| NsClass::sf(0, k);
    let h0_l_minus_bf = known_h0(s, &(&l - &fib(b.clone())))?;
    let h0_l_minus_af = known_h0(s, &(&l - &fib(a.clone())))?;
    let h0_l_minus_a1f = known_h0(s, &(&l - &fib(a - 1)))?;
    let h0_l_minus_b1f = known_h0(s, &(&l - &fib(b - 1)))?;
    let h0_l_minus_sigma = known_h0(s, &(&l - &NsClass::sigma()))?;
    let q3_sections = binom(&h0_l_minus_bf, a) * binom(&h0_l_minus_af, b);
    let q1q2_sections =
        binom(&(&h0_l_minus_a1f + a - 1), a) * binom(&(&h0_l_minus_b1f + b - 1), b);
    let n = a + b;
    let s_sections = binom(&h0_l_minus_sigma, &n);
    let q_fiber_coeff: Int = l.sigma_fiber().expect("elliptic").1 - &n + 1;
    let q_proper = q_fiber_coeff.is_negative() && known_h0(s, &(&l - &fib(&n - 1)))?.is_zero();
    Ok(ExclusionReport {
        params: params.clone(),
        l,
        q3_excluded: q3_sections.is_zero(),
        q1q2_excluded: q1q2_sections.is_zero(),
        exceptional_case: !q1q2_sections.is_zero(),
        s_proper: s_sections.is_zero(),
        q_proper,
        h0_l_minus_bf,
        h0_l_minus_af,
        h0_l_minus_a1f,
        h0_l_minus_b1f,
        h0_l_minus_sigma,
        q3_sections,
        q1q2_sections,
        s_sections,
        q_fiber_coeff,
    })
}
