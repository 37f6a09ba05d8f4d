//! Numerical hypotheses and dimension bookkeeping for strange duality.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{as_integer, binom, int, ratio, to_rat, Int, Rational};
use crate::error::{Error, Result};
use crate::lattice::{MukaiVector, NsClass, SurfaceKind, SurfaceModel};

/// Ranks `r, s` and half-dimensions `a, b` of two normalized moduli spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TowerParams {
    pub r: Int,
    pub s: Int,
    pub a: Int,
    pub b: Int,
}

impl TowerParams {
    pub fn new(r: impl Into<Int>, s: impl Into<Int>, a: impl Into<Int>, b: impl Into<Int>) -> Self {
        TowerParams {
            r: r.into(),
            s: s.into(),
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn is_exceptional(&self) -> bool {
        *self == TowerParams::new(2, 2, 9, 9)
    }
}

impl fmt::Display for TowerParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r,s,a,b) = ({},{},{},{})", self.r, self.s, self.a, self.b)
    }
}

fn check_ranges(p: &TowerParams) -> Result<()> {
    if p.r < int(2) || p.s < int(2) {
        return Err(Error::InvalidArgument(format!("ranks must be at least 2: {p}")));
    }
    if p.a < int(1) || p.b < int(1) {
        return Err(Error::InvalidArgument(format!("a and b must be positive: {p}")));
    }
    Ok(())
}

/// `-ν = (a+b-χ)/(r+s) - (r+s-1)χ/2 + 1`, as an exact rational.
pub fn neg_nu_rational(p: &TowerParams, chi_o: &Int) -> Rational {
    let rs = &p.r + &p.s;
    ratio(&p.a + &p.b - chi_o, rs.clone()) - ratio((&rs - 1) * chi_o, int(2)) + Rational::one()
}

/// The twist parameter `ν` making `χ(E_r · F_s(νf)) = 0`.
///
/// On K3 lattices this is `r+s | a+b-2` with `-ν ≥ 2`; on a general elliptic
/// surface the whole expression must be integral and `-ν ≥ χ(O)`.
pub fn compute_nu(p: &TowerParams, surface: &SurfaceModel) -> Result<Int> {
    surface.require_elliptic()?;
    check_ranges(p)?;
    let chi = surface.chi_o();
    let rs = &p.r + &p.s;
    let neg_nu = neg_nu_rational(p, &chi);
    let Some(neg_nu_int) = as_integer(&neg_nu) else {
        return Err(if surface.is_k3() {
            Error::Divisibility {
                numerator: &p.a + &p.b - 2,
                divisor: rs,
            }
        } else {
            Error::Divisibility {
                numerator: (&p.a + &p.b - &chi) * 2 - &rs * (&rs - 1) * &chi,
                divisor: rs * 2,
            }
        });
    };
    let required = if surface.is_k3() { int(2) } else { chi };
    if neg_nu_int < required {
        return Err(Error::Bound { neg_nu, required });
    }
    Ok(-neg_nu_int)
}

/// `Δ = χ(O)((r+s)² + (r+s) + 2) - 2(r+s)`.
pub fn delta(chi_o: &Int, r: &Int, s: &Int) -> Int {
    let rs = r + s;
    chi_o * (&rs * &rs + &rs + 2) - rs * 2
}

/// `L = (r+s)σ + ((r+s-1)χ - ν) f + K`.
pub fn line_bundle_class(p: &TowerParams, nu: &Int, surface: &SurfaceModel) -> NsClass {
    let rs = &p.r + &p.s;
    let chi = surface.chi_o();
    let base = NsClass::sf(rs.clone(), (&rs - 1) * &chi - nu);
    &base + &surface.canonical()
}

/// A pair of normalized moduli spaces together with the derived `ν` and `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityInstance {
    pub surface: SurfaceModel,
    pub params: TowerParams,
    pub v: MukaiVector,
    pub w_normalized: MukaiVector,
    /// `w_normalized ⊗ O(νf)`, orthogonal to `v` for the Euler form.
    pub w: MukaiVector,
    pub nu: Int,
    pub l: NsClass,
}

impl DualityInstance {
    pub fn new(surface: SurfaceModel, params: TowerParams) -> Result<Self> {
        let nu = compute_nu(&params, &surface)?;
        let v = surface.normalized_vector(&params.r, &params.a)?;
        let w_normalized = surface.normalized_vector(&params.s, &params.b)?;
        let w = surface.twist(&w_normalized, &NsClass::sf(0, nu.clone()))?;
        let l = line_bundle_class(&params, &nu, &surface);
        Ok(DualityInstance {
            surface,
            params,
            v,
            w_normalized,
            w,
            nu,
            l,
        })
    }

    /// `χ(E_r · F_s(νf))`.
    pub fn orthogonality_chi(&self) -> Result<Int> {
        self.surface.euler_form(&self.v, &self.w)
    }

    /// `a = ⟨v,v⟩/2 + 1` and likewise for `b`, through the moduli dimension.
    pub fn half_dimensions(&self) -> Result<(Int, Int)> {
        let a = self.surface.moduli_dim(&self.v)? / 2;
        let b = self.surface.moduli_dim(&self.w)? / 2;
        Ok((a, b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleReport {
    pub l: NsClass,
    pub chi_l: Int,
    pub expected: Int,
    /// `h⁰(L)`, where the surface formula applies.
    pub h0: Option<Int>,
    /// `(r+s)σ + (r+s + (a+b-2)/(r+s)) f` on K3 lattices.
    pub alternative: Option<NsClass>,
}

/// Computes `L` and checks `χ(L) = a+b` and, where known, `h⁰(L) = a+b`.
pub fn duality_line_bundle(inst: &DualityInstance) -> Result<LineBundleReport> {
    let s = &inst.surface;
    let p = &inst.params;
    let expected = &p.a + &p.b;
    let chi_l = s.chi_rr(&inst.l)?;
    if chi_l != expected {
        return Err(Error::CheckFailed(format!(
            "χ(L) = {chi_l} but a+b = {expected} for L = {}",
            inst.l
        )));
    }
    let (h0, alternative) = if s.is_elliptic_k3() {
        let h0 = s.h0_surface(&inst.l)?;
        if let Some(h) = &h0 {
            if *h != expected {
                return Err(Error::CheckFailed(format!("h⁰(L) = {h} but a+b = {expected}")));
            }
        }
        let rs = &p.r + &p.s;
        let alt = NsClass::sf(rs.clone(), &rs + (&expected - 2) / &rs);
        if alt != inst.l {
            return Err(Error::CheckFailed(format!(
                "alternative form {alt} disagrees with L = {}",
                inst.l
            )));
        }
        (h0, Some(alt))
    } else {
        (None, None)
    };
    Ok(LineBundleReport {
        l: inst.l.clone(),
        chi_l,
        expected,
        h0,
        alternative,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T1,
    T1A,
    T2,
    T5,
    Conj,
}

impl TheoremId {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "T1" => Some(TheoremId::T1),
            "T1A" => Some(TheoremId::T1A),
            "T2" => Some(TheoremId::T2),
            "T5" => Some(TheoremId::T5),
            "Conj" => Some(TheoremId::Conj),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            TheoremId::T1 => "T1",
            TheoremId::T1A => "T1A",
            TheoremId::T2 => "T2",
            TheoremId::T5 => "T5",
            TheoremId::Conj => "Conj",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub label: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub theorem: TheoremId,
    pub conditions: Vec<Condition>,
    pub verdict: bool,
}

impl HypothesisReport {
    pub fn condition(&self, label: &str) -> Option<bool> {
        self.conditions.iter().find(|c| c.label == label).map(|c| c.holds)
    }
}

fn cond(label: &str, holds: bool, detail: String) -> Condition {
    Condition {
        label: label.into(),
        holds,
        detail,
    }
}

/// Per-condition verdicts for the hypotheses of the named theorem.
pub fn hypotheses_report(
    v: &MukaiVector,
    w: &MukaiVector,
    surface: &SurfaceModel,
    theorem: TheoremId,
) -> Result<HypothesisReport> {
    surface.ensure_vector(v)?;
    surface.ensure_vector(w)?;
    let (r, s) = (&v.rank, &w.rank);
    let euler = surface.euler_form(v, w)?;
    let mut conditions = Vec::new();
    match theorem {
        TheoremId::T1 | TheoremId::T1A => {
            let SurfaceKind::GenericK3 { degree } = surface.kind() else {
                return Err(Error::WrongModel {
                    required: "a generic K3 of Picard rank one",
                });
            };
            conditions.push(cond("orthogonal", euler.is_zero(), format!("(v,w) = {euler}")));
            let chi_v = surface.chi_vec(v)?;
            let chi_w = surface.chi_vec(w)?;
            let h = NsClass::h(1);
            if theorem == TheoremId::T1 {
                conditions.push(cond(
                    "ranks",
                    *r >= int(2) && *s >= int(3),
                    format!("r = {r}, s = {s}"),
                ));
            } else {
                conditions.push(cond("ranks", *r == int(2) && *s == int(2), format!("r = {r}, s = {s}")));
                conditions.push(cond("degree", *degree >= int(8), format!("H² = {degree}")));
            }
            conditions.push(cond(
                "(i)",
                v.c1 == h && w.c1 == h,
                format!("c1(v) = {}, c1(w) = {}", v.c1, w.c1),
            ));
            conditions.push(cond(
                "(ii)",
                !chi_v.is_positive() && !chi_w.is_positive(),
                format!("χ(v) = {chi_v}, χ(w) = {chi_w}"),
            ));
            if theorem == TheoremId::T1 {
                let vv = surface.mukai_pair(v, v)?;
                let ww = surface.mukai_pair(w, w)?;
                let bv = (r - 1) * (r * r + 1) * 2;
                let bw = (s - 1) * (s * s + 1) * 2;
                conditions.push(cond(
                    "(iii)",
                    vv >= bv && ww >= bw,
                    format!("⟨v,v⟩ = {vv} ≥ {bv}, ⟨w,w⟩ = {ww} ≥ {bw}"),
                ));
            }
        }
        TheoremId::T2 | TheoremId::T5 | TheoremId::Conj => {
            if theorem == TheoremId::T2 {
                surface.require_elliptic_k3()?;
            } else {
                surface.require_elliptic()?;
            }
            conditions.push(cond("orthogonal", euler.is_zero(), format!("(v,w) = {euler}")));
            conditions.push(cond(
                "ranks",
                *r >= int(2) && *s >= int(2),
                format!("r = {r}, s = {s}"),
            ));
            let f = NsClass::fiber();
            let vf = surface.ns_pair(&v.c1, &f)?;
            let wf = surface.ns_pair(&w.c1, &f)?;
            conditions.push(cond(
                "(i)",
                vf == int(1) && wf == int(1),
                format!("c1(v)·f = {vf}, c1(w)·f = {wf}"),
            ));
            if theorem == TheoremId::T2 {
                let sum = surface.mukai_pair(v, v)? + surface.mukai_pair(w, w)?;
                let rs = r + s;
                let bound = &rs * &rs * 2;
                conditions.push(cond(
                    "(ii)",
                    sum >= bound,
                    format!("⟨v,v⟩ + ⟨w,w⟩ = {sum} ≥ {bound}"),
                ));
            } else {
                let dims = surface.moduli_dim(v)? + surface.moduli_dim(w)?;
                let d = delta(&surface.chi_o(), r, s);
                conditions.push(cond(
                    "(ii)",
                    dims >= d,
                    format!("dim M_v + dim M_w = {dims} ≥ Δ = {d}"),
                ));
            }
        }
    }
    let verdict = conditions.iter().all(|c| c.holds);
    Ok(HypothesisReport {
        theorem,
        conditions,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionMatch {
    pub left: Int,
    pub right: Int,
    pub equal: bool,
}

/// `h⁰(X^[a], L^[a])` against `h⁰(X^[b], L^[b])` with `h⁰(L) = a+b`.
pub fn dimension_match(a: &Int, b: &Int) -> DimensionMatch {
    let h0 = a + b;
    let left = binom(&h0, a);
    let right = binom(&h0, b);
    let equal = left == right;
    DimensionMatch { left, right, equal }
}

pub fn dimension_match_instance(inst: &DualityInstance) -> DimensionMatch {
    dimension_match(&inst.params.a, &inst.params.b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerStep {
    /// Rank of the source `E_r`.
    pub r: Int,
    /// `v_{r+1}` equals `v(O) + v(E_r(-χ f))`.
    pub recursion_holds: bool,
    /// `χ(E_r(-χ f), O)`, expected `-1`.
    pub hom_chi: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub a: Int,
    pub vectors: Vec<MukaiVector>,
    pub steps: Vec<TowerStep>,
    pub all_pass: bool,
}

/// Builds `v_{1,a}, …, v_{r_max,a}` and checks each extension step at χ-level.
pub fn ogrady_tower(r_max: &Int, a: &Int, surface: &SurfaceModel) -> Result<TowerReport> {
    surface.require_elliptic()?;
    if a.is_negative() {
        return Err(Error::InvalidArgument(format!("a must be non-negative, got {a}")));
    }
    let chi = surface.chi_o();
    let shift = NsClass::sf(0, -chi);
    let o = surface.structure_sheaf();
    let mut vectors = Vec::new();
    let mut steps = Vec::new();
    let mut r = int(1);
    while r <= *r_max {
        vectors.push(surface.normalized_vector(&r, a)?);
        r += 1;
    }
    let mut all_pass = vectors.iter().all(|v| surface.chi_vec(v).map(|c| c.is_one()).unwrap_or(false));
    for (i, pair) in vectors.windows(2).enumerate() {
        let twisted = surface.twist(&pair[0], &shift)?;
        let recursion_holds = &o + &twisted == pair[1];
        let hom_chi = surface.hom_euler(&twisted, &o)?;
        all_pass &= recursion_holds && hom_chi == int(-1);
        steps.push(TowerStep {
            r: int(i as i64 + 1),
            recursion_holds,
            hom_chi,
        });
    }
    Ok(TowerReport {
        a: a.clone(),
        vectors,
        steps,
        all_pass,
    })
}

/// A vector `(rank, c·H, v4)` on a rank-one lattice with `H² = h_sq`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankOneVector {
    pub rank: Int,
    pub h: Int,
    pub v4: Int,
}

impl RankOneVector {
    pub fn new(rank: impl Into<Int>, h: impl Into<Int>, v4: impl Into<Int>) -> Self {
        RankOneVector {
            rank: rank.into(),
            h: h.into(),
            v4: v4.into(),
        }
    }

    fn scale(&self, k: &Int) -> Self {
        RankOneVector::new(&self.rank * k, &self.h * k, &self.v4 * k)
    }

    fn add(&self, o: &Self) -> Self {
        RankOneVector::new(&self.rank + &o.rank, &self.h + &o.h, &self.v4 + &o.v4)
    }

    fn dual(&self) -> Self {
        RankOneVector::new(self.rank.clone(), -&self.h, self.v4.clone())
    }

    fn pair(&self, o: &Self, h_sq: &Int) -> Int {
        &self.h * &o.h * h_sq - &self.rank * &o.v4 - &self.v4 * &o.rank
    }

    pub fn components(&self) -> [Int; 3] {
        [self.rank.clone(), self.h.clone(), self.v4.clone()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaRelation {
    pub h_sq: Int,
    pub v: RankOneVector,
    pub w: RankOneVector,
    pub lambda: RankOneVector,
    pub mu: RankOneVector,
    /// `H²·w`
    pub lhs: RankOneVector,
    /// `(χ(w) - s)·λ_v - s·μ_v`
    pub rhs: RankOneVector,
    /// Per component: rank, H-coefficient, v4.
    pub component_ok: [bool; 3],
    /// `⟨v, λ_v^∨⟩` and `⟨v, μ_v^∨⟩`, both zero for orthogonal input.
    pub euler_perp: [Int; 2],
    /// `⟨v, λ_v⟩` and `⟨v, μ_v⟩` read literally.
    pub literal_pairings: [Int; 2],
    /// `⟨v, w^∨⟩`
    pub orthogonality: Int,
}

impl ThetaRelation {
    pub fn holds(&self) -> bool {
        self.component_ok.iter().all(|&b| b)
            && self.euler_perp.iter().all(Zero::is_zero)
            && self.orthogonality.is_zero()
    }

    pub fn failing_components(&self) -> Vec<&'static str> {
        ["rank", "H", "v4"]
            .into_iter()
            .zip(self.component_ok)
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n)
            .collect()
    }
}

/// The theta relation for `v = (r, H, χ-r)`, `w = (s, H, χ'-s)` on a
/// rank-one lattice, with `H² = 2rs - rχ' - sχ` forced by orthogonality.
/// `H²` may be odd here; only the coordinate identity is tested.
pub fn theta_relation_coords(r: &Int, s: &Int, chi: &Int, chi_p: &Int) -> ThetaRelation {
    let h_sq: Int = r * s * 2 - r * chi_p - s * chi;
    let v = RankOneVector::new(r.clone(), 1, chi - r);
    let w = RankOneVector::new(s.clone(), 1, chi_p - s);
    theta_relation_vectors(&v, &w, &h_sq)
}

fn theta_relation_vectors(v: &RankOneVector, w: &RankOneVector, h_sq: &Int) -> ThetaRelation {
    // H·v2 for v2 = c·H
    let h_dot_v2 = &v.h * h_sq;
    let lambda = RankOneVector::new(0, -&v.rank, h_dot_v2.clone());
    let mu = RankOneVector::new(-h_dot_v2, v.v4.clone(), 0);
    let chi_w = &w.rank + &w.v4;
    let lhs = w.scale(h_sq);
    let rhs = lambda.scale(&(&chi_w - &w.rank)).add(&mu.scale(&-&w.rank));
    let component_ok = [lhs.rank == rhs.rank, lhs.h == rhs.h, lhs.v4 == rhs.v4];
    ThetaRelation {
        h_sq: h_sq.clone(),
        euler_perp: [v.pair(&lambda.dual(), h_sq), v.pair(&mu.dual(), h_sq)],
        literal_pairings: [v.pair(&lambda, h_sq), v.pair(&mu, h_sq)],
        orthogonality: v.pair(&w.dual(), h_sq),
        v: v.clone(),
        w: w.clone(),
        lambda,
        mu,
        lhs,
        rhs,
        component_ok,
    }
}

/// The theta relation for vectors on a generic K3 model.
pub fn theta_relation_identity(
    v: &MukaiVector,
    w: &MukaiVector,
    surface: &SurfaceModel,
) -> Result<ThetaRelation> {
    let SurfaceKind::GenericK3 { degree } = surface.kind() else {
        return Err(Error::WrongModel {
            required: "a generic K3 of Picard rank one",
        });
    };
    surface.ensure_vector(v)?;
    surface.ensure_vector(w)?;
    let h = NsClass::h(1);
    if v.c1 != h || w.c1 != h {
        return Err(Error::InvalidArgument(format!(
            "theta relation needs c1(v) = c1(w) = H, got {} and {}",
            v.c1, w.c1
        )));
    }
    let lift = |x: &MukaiVector| RankOneVector::new(x.rank.clone(), 1, x.s.clone());
    let rel = theta_relation_vectors(&lift(v), &lift(w), degree);
    if !rel.orthogonality.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "vectors are not orthogonal: ⟨v, w^∨⟩ = {}",
            rel.orthogonality
        )));
    }
    Ok(rel)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelPair {
    pub surface: SurfaceModel,
    pub v: MukaiVector,
    pub w: MukaiVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationSetup {
    pub h_sq: Int,
    pub generic: ModelPair,
    pub elliptic: ModelPair,
    /// `(⟨v,v⟩, ⟨w,w⟩, ⟨v,w^∨⟩)` on each model.
    pub generic_pairings: [Int; 3],
    pub elliptic_pairings: [Int; 3],
    pub pairings_agree: bool,
}

fn pairings(m: &ModelPair) -> Result<[Int; 3]> {
    let s = &m.surface;
    Ok([
        s.mukai_pair(&m.v, &m.v)?,
        s.mukai_pair(&m.w, &m.w)?,
        s.mukai_pair(&m.v, &s.mukai_dual(&m.w)?)?,
    ])
}

/// The generic-K3 pair `v = (r, H, χ-r)`, `w = (s, H, χ'-s)` and its
/// elliptic specialization with `c1 = σ + kf`, `(σ + kf)² = H²`.
pub fn deformation_setup(r: &Int, s: &Int, chi: &Int, chi_p: &Int) -> Result<DeformationSetup> {
    if chi.is_positive() || chi_p.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "Euler characteristics must be non-positive, got {chi} and {chi_p}"
        )));
    }
    if *r < int(1) || *s < int(1) {
        return Err(Error::InvalidArgument(format!("ranks must be positive, got {r} and {s}")));
    }
    let h_sq: Int = r * s * 2 - r * chi_p - s * chi;
    let generic_surface = SurfaceModel::generic_k3(h_sq.clone())?;
    let generic = ModelPair {
        v: MukaiVector::new(r.clone(), NsClass::h(1), chi - r),
        w: MukaiVector::new(s.clone(), NsClass::h(1), chi_p - s),
        surface: generic_surface,
    };
    let k = &h_sq / 2 + 1;
    let c1 = NsClass::sf(1, k);
    let elliptic = ModelPair {
        v: MukaiVector::new(r.clone(), c1.clone(), chi - r),
        w: MukaiVector::new(s.clone(), c1, chi_p - s),
        surface: SurfaceModel::elliptic_k3(),
    };
    let generic_pairings = pairings(&generic)?;
    let elliptic_pairings = pairings(&elliptic)?;
    let pairings_agree = generic_pairings == elliptic_pairings;
    Ok(DeformationSetup {
        h_sq,
        generic,
        elliptic,
        generic_pairings,
        elliptic_pairings,
        pairings_agree,
    })
}

/// Every `(r, s, a, b)` with ranks in the given inclusive ranges and
/// `a + b ≤ ab_max` that passes [`compute_nu`].
pub fn valid_params(
    surface: &SurfaceModel,
    r_range: (i64, i64),
    s_range: (i64, i64),
    ab_max: i64,
) -> Vec<TowerParams> {
    let mut out = Vec::new();
    for r in r_range.0..=r_range.1 {
        for s in s_range.0..=s_range.1 {
            for n in 2..=ab_max {
                for a in 1..n {
                    let p = TowerParams::new(r, s, a, n - a);
                    if compute_nu(&p, surface).is_ok() {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// The smallest valid `a + b` for ranks `(r, s)`, split as evenly as possible.
pub fn minimal_params(surface: &SurfaceModel, r: i64, s: i64, search_max: i64) -> Option<TowerParams> {
    (2..=search_max).find_map(|n| {
        let p = TowerParams::new(r, s, n / 2, n - n / 2);
        compute_nu(&p, surface).ok().map(|_| p)
    })
}

/// The dimension condition read through `⟨v,v⟩ + ⟨w,w⟩` against `-ν ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionAgreement {
    pub params: TowerParams,
    pub pairing_condition: bool,
    pub nu_condition: bool,
}

/// Grid points with `r+s | a+b-2` where the two readings of the dimension
/// condition disagree. Expected empty.
pub fn theorem2_vs_nu(r_max: i64, ab_max: i64) -> Vec<ConditionAgreement> {
    let s3 = SurfaceModel::elliptic_k3();
    let mut out = Vec::new();
    for r in 2..=r_max {
        for s in 2..=r_max {
            for n in 2..=ab_max {
                if (n - 2) % (r + s) != 0 {
                    continue;
                }
                for a in 1..n {
                    let p = TowerParams::new(r, s, a, n - a);
                    let neg_nu = neg_nu_rational(&p, &int(2));
                    let nu_condition = neg_nu >= to_rat(&int(2));
                    let sum = int(2 * a - 2) + int(2 * (n - a) - 2);
                    let pairing_condition = sum >= int(2 * (r + s) * (r + s));
                    debug_assert!(s3.is_k3());
                    if nu_condition != pairing_condition {
                        out.push(ConditionAgreement {
                            params: p,
                            pairing_condition,
                            nu_condition,
                        });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> SurfaceModel {
        SurfaceModel::elliptic_k3()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(compute_nu(&TowerParams::new(2, 2, 9, 9), &k3()).unwrap(), int(-2));
        for a in 1..27 {
            assert_eq!(compute_nu(&TowerParams::new(2, 3, a, 27 - a), &k3()).unwrap(), int(-2));
        }
        match compute_nu(&TowerParams::new(2, 2, 5, 5), &k3()).unwrap_err() {
            Error::Bound { neg_nu, required } => {
                assert_eq!(neg_nu, to_rat(&int(0)));
                assert_eq!(required, int(2));
            }
            e => panic!("{e:?}"),
        }
        assert!(matches!(
            compute_nu(&TowerParams::new(2, 2, 9, 10), &k3()).unwrap_err(),
            Error::Divisibility { .. }
        ));
    }

    #[test]
    fn nu_general_chi() {
        let g = SurfaceModel::elliptic_general(3).unwrap();
        let p = minimal_params(&g, 2, 2, 200).unwrap();
        assert_eq!(&p.a + &p.b, int(29));
        assert_eq!(compute_nu(&p, &g).unwrap(), int(-3));
    }

    #[test]
    fn line_bundle_examples() {
        let inst = DualityInstance::new(k3(), TowerParams::new(2, 2, 9, 9)).unwrap();
        let rep = duality_line_bundle(&inst).unwrap();
        assert_eq!(rep.l, NsClass::sf(4, 8));
        assert_eq!(rep.chi_l, int(18));
        assert_eq!(rep.h0, Some(int(18)));
        assert_eq!(rep.alternative, Some(NsClass::sf(4, 8)));
        let g = SurfaceModel::elliptic_general(3).unwrap();
        let p = minimal_params(&g, 2, 2, 200).unwrap();
        let inst = DualityInstance::new(g, p).unwrap();
        let rep = duality_line_bundle(&inst).unwrap();
        assert_eq!(rep.l, NsClass::sf(4, 13));
        assert_eq!(rep.chi_l, int(29));
    }

    #[test]
    fn orthogonality_and_half_dimensions() {
        for chi in 2..5 {
            let g = SurfaceModel::elliptic_general(chi).unwrap();
            for p in valid_params(&g, (2, 3), (2, 3), 80) {
                let inst = DualityInstance::new(g.clone(), p.clone()).unwrap();
                assert_eq!(inst.orthogonality_chi().unwrap(), int(0), "{p}");
                assert_eq!(inst.half_dimensions().unwrap(), (p.a.clone(), p.b.clone()));
            }
        }
    }

    #[test]
    fn hypotheses_examples() {
        let s = k3();
        let v = s.normalized_vector(&int(2), &int(14)).unwrap();
        let w = s.normalized_vector(&int(3), &int(13)).unwrap();
        let rep = hypotheses_report(&v, &w, &s, TheoremId::T2).unwrap();
        assert_eq!(rep.condition("(ii)"), Some(true));
        assert_eq!(rep.condition("(i)"), Some(true));

        let g = SurfaceModel::generic_k3(14).unwrap();
        let v = MukaiVector::new(2, NsClass::h(1), -8);
        let w = MukaiVector::new(3, NsClass::h(1), -3);
        assert_eq!(g.mukai_pair(&v, &v).unwrap(), int(46));
        let rep = hypotheses_report(&v, &w, &g, TheoremId::T1).unwrap();
        assert_eq!(rep.condition("(iii)"), Some(g.mukai_pair(&w, &w).unwrap() >= int(40)));

        let g10 = SurfaceModel::generic_k3(10).unwrap();
        let v = MukaiVector::new(2, NsClass::h(1), 0);
        assert_eq!(g10.mukai_pair(&v, &v).unwrap(), int(10));
        let rep = hypotheses_report(&v, &v, &g10, TheoremId::T1).unwrap();
        assert!(rep.conditions.iter().any(|c| c.label == "(iii)"));
        assert_eq!(delta(&int(2), &int(2), &int(2)), int(36));
        assert!(hypotheses_report(&v, &v, &g10, TheoremId::T2).is_err());
    }

    #[test]
    fn theorem1_iii_threshold() {
        // r = 2 with ⟨v,v⟩ = 10 sits exactly on the bound 2·1·5.
        let g = SurfaceModel::generic_k3(10).unwrap();
        let v = MukaiVector::new(2, NsClass::h(1), 0);
        let w = MukaiVector::new(3, NsClass::h(1), -2);
        let rep = hypotheses_report(&v, &w, &g, TheoremId::T1).unwrap();
        let detail = &rep.conditions.iter().find(|c| c.label == "(iii)").unwrap().detail;
        assert!(detail.contains("⟨v,v⟩ = 10 ≥ 10"), "{detail}");
    }

    #[test]
    fn dimension_match_examples() {
        let m = dimension_match(&int(9), &int(9));
        assert_eq!((m.left.clone(), m.right.clone(), m.equal), (int(48620), int(48620), true));
        let m = dimension_match(&int(4), &int(0));
        assert_eq!((m.left, m.right, m.equal), (int(1), int(1), true));
    }

    #[test]
    fn tower_examples() {
        let s = k3();
        let rep = ogrady_tower(&int(4), &int(9), &s).unwrap();
        assert!(rep.all_pass);
        assert_eq!(rep.vectors[0], MukaiVector::new(1, NsClass::sf(1, 9), 0));
        assert_eq!(rep.vectors[1], MukaiVector::new(2, NsClass::sf(1, 7), -1));
        assert!(rep.steps.iter().all(|st| st.hom_chi == int(-1)));
        for chi in 2..5 {
            let g = SurfaceModel::elliptic_general(chi).unwrap();
            assert!(ogrady_tower(&int(6), &int(11), &g).unwrap().all_pass);
        }
    }

    #[test]
    fn theta_worked_instance() {
        let rel = theta_relation_coords(&int(2), &int(3), &int(0), &int(-1));
        assert_eq!(rel.h_sq, int(14));
        assert_eq!(rel.lambda, RankOneVector::new(0, -2, 14));
        assert_eq!(rel.mu, RankOneVector::new(-14, -2, 0));
        assert_eq!(rel.rhs, RankOneVector::new(42, 14, -56));
        assert!(rel.holds());
        assert_eq!(rel.literal_pairings[0], int(-2 * 2 * 14));
    }

    #[test]
    fn theta_on_model() {
        let g = SurfaceModel::generic_k3(14).unwrap();
        let v = MukaiVector::new(2, NsClass::h(1), -2);
        let w = MukaiVector::new(3, NsClass::h(1), -4);
        assert!(theta_relation_identity(&v, &w, &g).unwrap().holds());
        let bad = MukaiVector::new(3, NsClass::h(1), -3);
        assert!(theta_relation_identity(&v, &bad, &g).is_err());
    }

    #[test]
    fn deformation_examples() {
        let d = deformation_setup(&int(2), &int(3), &int(0), &int(-1)).unwrap();
        assert_eq!(d.h_sq, int(14));
        assert_eq!(d.elliptic.v.c1, NsClass::sf(1, 8));
        assert!(d.pairings_agree);
        assert_eq!(d.generic_pairings[2], int(0));
        let d = deformation_setup(&int(2), &int(2), &int(0), &int(0)).unwrap();
        assert_eq!(d.h_sq, int(8));
        assert!(deformation_setup(&int(2), &int(2), &int(1), &int(0)).is_err());
    }

    #[test]
    fn theorem2_reading_agrees() {
        assert!(theorem2_vs_nu(4, 80).is_empty());
    }
}
