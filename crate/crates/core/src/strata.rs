//! Walls in the ample cone of an elliptic K3 and Harder–Narasimhan strata on
//! them, with the dimension estimates that bound their codimension.
//!
//! Polarizations are `H = σ + m f` with `m > 2`. Mukai vectors are written
//! `v = (r, ξ, a)` with `ξ = c1(v)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{int, int_range, isqrt, rat_ceil, rat_floor, ratio, to_rat, Int, Rational};
use crate::error::{Error, Result};
use crate::lattice::{MukaiVector, NsClass, SurfaceModel};

/// `D·(σ + m f)` for a rational `m` on the elliptic K3 lattice.
fn pair_with_polarization(d: &NsClass, m: &Rational) -> Rational {
    let (x, y) = d.sigma_fiber().expect("elliptic basis");
    to_rat(&(y - x * 2)) + to_rat(x) * m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    /// Primitive, with positive σ-coefficient.
    pub d: NsClass,
    pub m_value: Rational,
    /// `(r1, ξ1)` pairs producing a multiple of `d`.
    pub witnesses: Vec<(Int, NsClass)>,
}

impl Wall {
    /// Builds a wall from a class `D`, normalizing it to the primitive
    /// representative with positive σ-coefficient.
    pub fn from_class(d: &NsClass) -> Result<Self> {
        let (x, y) = d
            .sigma_fiber()
            .ok_or_else(|| Error::InvalidArgument("walls live on the elliptic lattice".into()))?;
        if x.is_zero() {
            return Err(Error::InvalidArgument(format!("{d} is not orthogonal to any σ + m f")));
        }
        let g = d.content();
        let sign = if x.is_negative() { int(-1) } else { int(1) };
        let (x, y) = (x * &sign / &g, y * &sign / &g);
        let m_value = ratio(&x * 2 - &y, x.clone());
        Ok(Wall {
            d: NsClass::sf(x, y),
            m_value,
            witnesses: Vec::new(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StackDimension {
    Dim(Int),
    Empty,
}

impl StackDimension {
    pub fn dim(&self) -> Option<&Int> {
        match self {
            StackDimension::Dim(d) => Some(d),
            StackDimension::Empty => None,
        }
    }
}

/// Dimension of the stack of semistable sheaves for a general polarization:
/// `⟨v²⟩ + 1`, `⟨v²⟩ + l` or `-l²` according to the sign of `⟨v²⟩`, with
/// `l` the gcd of the coordinates; empty when `⟨(v/l)²⟩ < -2`.
pub fn stack_dim(v: &MukaiVector, s: &SurfaceModel) -> Result<StackDimension> {
    s.ensure_vector(v)?;
    if v.rank < int(1) {
        return Err(Error::InvalidArgument(format!("rank must be positive, got {}", v.rank)));
    }
    let sq = s.mukai_pair(v, v)?;
    let l = v.content();
    if sq.clone() / (&l * &l) < int(-2) {
        return Ok(StackDimension::Empty);
    }
    Ok(StackDimension::Dim(if sq.is_positive() {
        sq + 1
    } else if sq.is_zero() {
        l
    } else {
        -(&l * &l)
    }))
}

/// All walls for `v` produced by `D = r ξ1 - r1 ξ` with `1 ≤ r1 < r` and
/// `|x|, |y| ≤ coeff_bound` for `ξ1 = xσ + yf`, inside the ample range `m > 2`.
pub fn wall_enumerate(v: &MukaiVector, s: &SurfaceModel, coeff_bound: i64) -> Result<Vec<Wall>> {
    s.require_elliptic_k3()?;
    s.ensure_vector(v)?;
    if v.rank < int(2) {
        return Err(Error::InvalidArgument(format!(
            "walls need rank at least 2, got {}",
            v.rank
        )));
    }
    let two = to_rat(&int(2));
    let mut walls: Vec<Wall> = Vec::new();
    for r1 in int_range(int(1), &v.rank - 1) {
        for x in -coeff_bound..=coeff_bound {
            for y in -coeff_bound..=coeff_bound {
                let xi1 = NsClass::sf(x, y);
                let d = &xi1.scale(&v.rank) - &v.c1.scale(&r1);
                if d.is_zero() || d.sigma_fiber().expect("elliptic").0.is_zero() {
                    continue;
                }
                let wall = Wall::from_class(&d)?;
                if wall.m_value <= two {
                    continue;
                }
                debug_assert!(s.ns_pair(&wall.d, &wall.d)?.is_negative());
                match walls.iter_mut().find(|w| w.d == wall.d) {
                    Some(w) => w.witnesses.push((r1.clone(), xi1)),
                    None => walls.push(Wall {
                        witnesses: vec![(r1.clone(), xi1)],
                        ..wall
                    }),
                }
            }
        }
    }
    walls.sort_by(|a, b| a.m_value.cmp(&b.m_value).then_with(|| a.d.cmp(&b.d)));
    Ok(walls)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suitability {
    pub suitable: bool,
    /// Largest wall carrying a nonempty stratum.
    pub largest_wall: Option<Rational>,
    /// Largest numerical wall, whether or not strata live on it.
    pub largest_numerical_wall: Option<Rational>,
    pub coeff_bound: i64,
}

/// Whether some stratum with at least two parts lives on the wall.
pub fn wall_is_effective(v: &MukaiVector, wall: &Wall, s: &SurfaceModel) -> Result<bool> {
    let mut k = 2usize;
    while int(k as i64) <= v.rank {
        if !strata_enumerate(v, wall, k, s)?.ordered.is_empty() {
            return Ok(true);
        }
        k += 1;
    }
    Ok(false)
}

/// Whether `σ + m f` lies above every wall found within `coeff_bound`
/// that carries a stratum.
pub fn is_suitable(m: &Rational, v: &MukaiVector, s: &SurfaceModel, coeff_bound: i64) -> Result<Suitability> {
    if *m <= to_rat(&int(2)) {
        return Err(Error::InvalidArgument(format!("σ + {m}f is not ample")));
    }
    if v.rank < int(2) {
        return Ok(Suitability {
            suitable: true,
            largest_wall: None,
            largest_numerical_wall: None,
            coeff_bound,
        });
    }
    let walls = wall_enumerate(v, s, coeff_bound)?;
    let mut largest_wall = None;
    for w in walls.iter().rev() {
        if wall_is_effective(v, w, s)? {
            largest_wall = Some(w.m_value.clone());
            break;
        }
    }
    Ok(Suitability {
        suitable: largest_wall.as_ref().is_none_or(|w| m > w),
        largest_wall,
        largest_numerical_wall: walls.last().map(|w| w.m_value.clone()),
        coeff_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Stratum {
    pub parts: Vec<MukaiVector>,
    pub dims: Vec<Int>,
    pub total_dim: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataEnumeration {
    /// Every ordered tuple `(v1, …, vs)`.
    pub ordered: Vec<Stratum>,
    /// One representative per multiset of parts.
    pub unordered: Vec<Stratum>,
    /// Tuples that are Harder–Narasimhan types for a polarization just
    /// above the wall: `(μ, χ/r)` strictly decreasing.
    pub hn_above: Vec<Stratum>,
}

fn compositions(total: &Int, parts: usize) -> Vec<Vec<Int>> {
    if parts == 1 {
        return if total.is_positive() { vec![vec![total.clone()]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in int_range(int(1), total - (parts as i64 - 1)) {
        for mut rest in compositions(&(total - &first), parts - 1) {
            rest.insert(0, first.clone());
            out.push(rest);
        }
    }
    out
}

/// Integer tuples `t` with `Σ t = 0` and `Σ t_i² / r_i ≤ budget`.
fn t_tuples(ranks: &[Int], budget: &Rational) -> Vec<Vec<Int>> {
    fn go(ranks: &[Int], budget: &Rational, sum: &Int, used: Rational, acc: &mut Vec<Int>, out: &mut Vec<Vec<Int>>) {
        let i = acc.len();
        if i + 1 == ranks.len() {
            let t = -sum;
            let cost = used + ratio(&t * &t, ranks[i].clone());
            if cost <= *budget {
                acc.push(t);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        let bound = isqrt(&rat_floor(&(budget * to_rat(&ranks[i]))).max(Int::zero()));
        for t in int_range(-&bound, bound.clone()) {
            let cost = used.clone() + ratio(&t * &t, ranks[i].clone());
            if cost > *budget {
                continue;
            }
            acc.push(t.clone());
            go(ranks, budget, &(sum + &t), cost, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(ranks, budget, &Int::zero(), Rational::zero(), &mut Vec::new(), &mut out);
    out
}

fn build_stratum(parts: Vec<MukaiVector>, s: &SurfaceModel) -> Result<Option<Stratum>> {
    let mut dims = Vec::with_capacity(parts.len());
    for p in &parts {
        match stack_dim(p, s)? {
            StackDimension::Dim(d) => dims.push(d),
            StackDimension::Empty => return Ok(None),
        }
    }
    let mut total = dims.iter().fold(Int::zero(), |a, b| a + b);
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            total += s.mukai_pair(&parts[i], &parts[j])?;
        }
    }
    Ok(Some(Stratum {
        parts,
        dims,
        total_dim: total,
    }))
}

/// `(c1·f / r, χ / r)`, the order of HN factors for `σ + (m + ε) f`.
fn above_key(v: &MukaiVector, s: &SurfaceModel) -> Result<(Rational, Rational)> {
    let f = s.ns_pair(&v.c1, &NsClass::fiber())?;
    Ok((ratio(f, v.rank.clone()), ratio(s.chi_vec(v)?, v.rank.clone())))
}

fn is_hn_above(st: &Stratum, s: &SurfaceModel) -> Result<bool> {
    let keys = st.parts.iter().map(|p| above_key(p, s)).collect::<Result<Vec<_>>>()?;
    Ok(keys.windows(2).all(|w| w[0] > w[1]))
}

/// Every stratum with `s_parts` parts on the wall, pruned by the
/// decomposition of `⟨v²⟩` and Bogomolov's inequality.
pub fn strata_enumerate(v: &MukaiVector, wall: &Wall, s_parts: usize, s: &SurfaceModel) -> Result<StrataEnumeration> {
    s.require_elliptic_k3()?;
    s.ensure_vector(v)?;
    if s_parts < 2 {
        return Err(Error::InvalidArgument(format!("need at least two parts, got {s_parts}")));
    }
    let r = v.rank.clone();
    let mut ordered = Vec::new();
    let d_sq = s.ns_pair(&wall.d, &wall.d)?;
    if int(s_parts as i64) > r || !d_sq.is_negative() {
        return Ok(StrataEnumeration {
            ordered,
            unordered: Vec::new(),
            hn_above: Vec::new(),
        });
    }
    let abs_d_sq = -d_sq;
    let v_sq = s.mukai_pair(v, v)?;
    // |D²| Σ t_i²/r_i ≤ r⟨v²⟩ + 2r³
    let budget_total: Int = &r * &v_sq + &r * &r * &r * 2;
    if budget_total.is_negative() {
        return Ok(StrataEnumeration {
            ordered,
            unordered: Vec::new(),
            hn_above: Vec::new(),
        });
    }
    let budget = ratio(budget_total, abs_d_sq.clone());
    for ranks in compositions(&r, s_parts) {
        for ts in t_tuples(&ranks, &budget) {
            // ξ_i = (r_i ξ + t_i D) / r must be integral.
            let mut xis = Vec::with_capacity(s_parts);
            for (ri, ti) in ranks.iter().zip(&ts) {
                let num = &v.c1.scale(ri) + &wall.d.scale(ti);
                let coeffs = num.coeffs();
                if coeffs.iter().any(|c| !c.is_multiple_of(&r)) {
                    break;
                }
                xis.push(NsClass::sf(&coeffs[0] / &r, &coeffs[1] / &r));
            }
            if xis.len() != s_parts {
                continue;
            }
            // 2C = |D²| Σ t_i²/r_i / r
            let weighted: Rational = ts
                .iter()
                .zip(&ranks)
                .fold(Rational::zero(), |acc, (t, ri)| acc + ratio(t * t, ri.clone()));
            let two_c = to_rat(&abs_d_sq) * weighted / to_rat(&r);
            let mut parts = Vec::with_capacity(s_parts);
            enumerate_a(v, s, &ranks, &xis, &two_c, &v_sq, &mut parts, &mut ordered)?;
        }
    }
    ordered.sort();
    ordered.dedup();
    let mut seen = BTreeSet::new();
    let mut unordered = Vec::new();
    for st in &ordered {
        let mut key = st.parts.clone();
        key.sort();
        if seen.insert(key) {
            unordered.push(st.clone());
        }
    }
    let mut hn_above = Vec::new();
    for st in &ordered {
        if is_hn_above(st, s)? {
            hn_above.push(st.clone());
        }
    }
    Ok(StrataEnumeration {
        ordered,
        unordered,
        hn_above,
    })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_a(
    v: &MukaiVector,
    s: &SurfaceModel,
    ranks: &[Int],
    xis: &[NsClass],
    two_c: &Rational,
    v_sq: &Int,
    acc: &mut Vec<MukaiVector>,
    out: &mut Vec<Stratum>,
) -> Result<()> {
    let i = acc.len();
    let r = &v.rank;
    if i + 1 == ranks.len() {
        let used = acc.iter().fold(MukaiVector::zero(v.c1.basis()), |a, p| &a + p);
        let last = v - &used;
        debug_assert_eq!(last.rank, ranks[i]);
        debug_assert_eq!(last.c1, xis[i]);
        acc.push(last);
        if let Some(st) = build_stratum(acc.clone(), s)? {
            out.push(st);
        }
        acc.pop();
        return Ok(());
    }
    let ri = &ranks[i];
    let xi_sq = s.ns_pair(&xis[i], &xis[i])?;
    // -2 r_i² ≤ ⟨v_i²⟩ ≤ (r_i / r)(⟨v²⟩ - 2C + 2r(r - r_i))
    let upper = ratio(ri.clone(), r.clone()) * (to_rat(v_sq) - two_c + to_rat(&(r * (r - ri) * 2)));
    let upper = rat_floor(&upper);
    let lower: Int = ri * ri * (-2);
    if upper < lower {
        return Ok(());
    }
    // ⟨v_i²⟩ = ξ_i² - 2 r_i a_i
    let a_lo = rat_ceil(&ratio(&xi_sq - &upper, ri * 2));
    let a_hi = rat_floor(&ratio(&xi_sq - &lower, ri * 2));
    for a in int_range(a_lo, a_hi) {
        acc.push(MukaiVector::new(ri.clone(), xis[i].clone(), a));
        enumerate_a(v, s, ranks, xis, two_c, v_sq, acc, out)?;
        acc.pop();
    }
    Ok(())
}

/// The right-hand side of the codimension estimate: `⟨v²⟩/(2r) + r - r² + 1`.
pub fn proposition_bound(v_sq: &Int, r: &Int) -> Rational {
    ratio(v_sq.clone(), r * 2) + to_rat(&(r - r * r + 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumChecks {
    pub sum_ok: bool,
    pub slope_ok: bool,
    pub nonempty_ok: bool,
    /// The seven expressions of the inequality chain, in order.
    pub chain: Vec<Rational>,
    pub chain_ok: bool,
    /// `(⟨v²⟩ + 1) - total_dim`
    pub codim: Int,
    pub bound_ok: bool,
}

impl StratumChecks {
    pub fn all_ok(&self) -> bool {
        self.sum_ok && self.slope_ok && self.nonempty_ok && self.chain_ok && self.bound_ok
    }
}

/// Verifies a stratum's invariants and the inequality chain term by term.
pub fn check_stratum(v: &MukaiVector, wall: &Wall, st: &Stratum, s: &SurfaceModel) -> Result<StratumChecks> {
    let sum = st.parts.iter().fold(MukaiVector::zero(v.c1.basis()), |a, p| &a + p);
    let sum_ok = sum == *v;
    let m = &wall.m_value;
    let target = pair_with_polarization(&v.c1, m) / to_rat(&v.rank);
    let slope_ok = st
        .parts
        .iter()
        .all(|p| pair_with_polarization(&p.c1, m) / to_rat(&p.rank) == target);
    let nonempty_ok = st
        .parts
        .iter()
        .map(|p| stack_dim(p, s))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|d| d.dim().is_some());

    let r = to_rat(&v.rank);
    let v_sq = to_rat(&s.mukai_pair(v, v)?);
    let two = to_rat(&int(2));
    let n = st.parts.len();
    let ri: Vec<Rational> = st.parts.iter().map(|p| to_rat(&p.rank)).collect();
    let qi: Vec<Rational> = st
        .parts
        .iter()
        .map(|p| s.mukai_pair(p, p).map(|x| to_rat(&x)))
        .collect::<Result<_>>()?;
    let mut cross = Rational::zero();
    let mut x_term = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            cross += to_rat(&s.mukai_pair(&st.parts[i], &st.parts[j])?);
            let diff = &st.parts[j].c1.scale(&st.parts[i].rank) - &st.parts[i].c1.scale(&st.parts[j].rank);
            let sq = to_rat(&s.ns_pair(&diff, &diff)?);
            x_term += sq / (&two * &ri[i] * &ri[j]);
        }
    }
    let sum_ri_sq: Rational = ri.iter().map(|x| x * x).sum();
    let sum_over = |f: &dyn Fn(usize) -> Rational| (0..n).map(f).sum::<Rational>();
    let line0 = cross;
    let line1 = sum_over(&|i| (&r - &ri[i]) / &ri[i] * &qi[i] / &two) - &x_term;
    let line2 = sum_over(&|i| (&r - &ri[i]) / &ri[i] * (&qi[i] / &two + &ri[i] * &ri[i]))
        - sum_over(&|i| (&r - &ri[i]) * &ri[i])
        - &x_term;
    let line3 = sum_over(&|i| (&qi[i] / &two + &ri[i] * &ri[i]) / &ri[i])
        - sum_over(&|i| (&r - &ri[i]) * &ri[i])
        - &x_term;
    let line4 = sum_over(&|i| &qi[i] / &two / &ri[i]) + &r - &r * &r + &sum_ri_sq - &x_term;
    let line5 = &v_sq / &two / &r + &x_term / &r + &r - &r * &r + &sum_ri_sq - &x_term;
    let line6 = &v_sq / &two / &r + &r - &r * &r + &sum_ri_sq;
    let chain_ok = line0 == line1
        && line1 == line2
        && line2 >= line3
        && line3 == line4
        && line4 == line5
        && line5 >= line6;
    let v_sq_int = s.mukai_pair(v, v)?;
    let codim = &v_sq_int + 1 - &st.total_dim;
    let bound_ok = to_rat(&codim) >= proposition_bound(&v_sq_int, &v.rank);
    Ok(StratumChecks {
        sum_ok,
        slope_ok,
        nonempty_ok,
        chain: vec![line0, line1, line2, line3, line4, line5, line6],
        chain_ok,
        codim,
        bound_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimAudit {
    pub v_sq: Int,
    pub strata_count: usize,
    pub min_codim: Option<Int>,
    pub bound: Rational,
    pub bound_satisfied: bool,
    pub corollary_applicable: bool,
    pub remark_applicable: bool,
    /// Whether `⟨v²⟩ > 0`, the regime the estimate is stated for.
    pub positive_square: bool,
    pub all_strata_checked: bool,
}

/// Minimum codimension of the strata on a wall against the proposition bound.
pub fn codim_audit(v: &MukaiVector, wall: &Wall, s: &SurfaceModel) -> Result<CodimAudit> {
    let v_sq = s.mukai_pair(v, v)?;
    let bound = proposition_bound(&v_sq, &v.rank);
    let mut all = Vec::new();
    let max_parts = v.rank.clone();
    let mut k = 2usize;
    while int(k as i64) <= max_parts {
        all.extend(strata_enumerate(v, wall, k, s)?.ordered);
        k += 1;
    }
    let mut min_codim: Option<Int> = None;
    let mut all_strata_checked = true;
    for st in &all {
        let c = check_stratum(v, wall, st, s)?;
        all_strata_checked &= c.all_ok();
        min_codim = Some(match min_codim {
            Some(m) if m <= c.codim => m,
            _ => c.codim,
        });
    }
    let bound_satisfied = min_codim.as_ref().is_none_or(|m| to_rat(m) >= bound);
    let r = &v.rank;
    let remark_applicable = v.c1.is_primitive() && v_sq >= (r - 1) * (r * r + 1) * 2;
    Ok(CodimAudit {
        strata_count: all.len(),
        corollary_applicable: bound >= to_rat(&int(2)),
        positive_square: v_sq.is_positive(),
        v_sq,
        min_codim,
        bound,
        bound_satisfied,
        remark_applicable,
        all_strata_checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeVerdict {
    pub orthogonal: bool,
    pub d_sq: Int,
    /// `D·H = 0 ∧ D ≠ 0 ⇒ D² < 0`.
    pub holds: bool,
    /// `D² ≤ -2` when the premise applies and strictness is requested.
    pub strict: Option<bool>,
}

/// Hodge index check for `D` against an ample `H` on the elliptic K3 lattice.
pub fn hodge_check(d: &NsClass, h: &NsClass, primitive_c1: bool, s: &SurfaceModel) -> Result<HodgeVerdict> {
    s.require_elliptic_k3()?;
    let ample = s.ns_pair(h, h)?.is_positive()
        && s.ns_pair(h, &NsClass::sigma())?.is_positive()
        && s.ns_pair(h, &NsClass::fiber())?.is_positive();
    if !ample {
        return Err(Error::InvalidArgument(format!("{h} is not ample")));
    }
    let orthogonal = s.ns_pair(d, h)?.is_zero();
    let d_sq = s.ns_pair(d, d)?;
    let premise = orthogonal && !d.is_zero();
    Ok(HodgeVerdict {
        orthogonal,
        holds: !premise || d_sq.is_negative(),
        strict: (premise && primitive_c1).then(|| d_sq <= int(-2)),
        d_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn k3() -> SurfaceModel {
        SurfaceModel::elliptic_k3()
    }

    fn mv(r: i64, x: i64, y: i64, a: i64) -> MukaiVector {
        MukaiVector::new(r, NsClass::sf(x, y), a)
    }

    #[test]
    fn stack_dim_cases() {
        let s = k3();
        // ⟨v²⟩ = 6
        assert_eq!(stack_dim(&mv(2, 1, 0, -2), &s).unwrap(), StackDimension::Dim(int(7)));
        // ⟨v²⟩ = 0: (1; f; 0)
        assert_eq!(stack_dim(&mv(1, 0, 1, 0), &s).unwrap(), StackDimension::Dim(int(1)));
        // ⟨v²⟩ = -2
        assert_eq!(stack_dim(&mv(1, 0, 0, 1), &s).unwrap(), StackDimension::Dim(int(-1)));
        // 2·v(O): ⟨v²⟩ = -8 = -2 l²
        assert_eq!(stack_dim(&mv(2, 0, 0, 2), &s).unwrap(), StackDimension::Dim(int(-4)));
        // (1; σ; 2): ⟨v²⟩ = -6
        assert_eq!(stack_dim(&mv(1, 1, 0, 2), &s).unwrap(), StackDimension::Empty);
    }

    #[test]
    fn wall_examples() {
        let s = k3();
        let v = mv(2, 1, 0, -2);
        let walls = wall_enumerate(&v, &s, 3).unwrap();
        let w = walls.iter().find(|w| w.d == NsClass::sf(1, -2)).expect("wall σ-2f");
        assert_eq!(w.m_value, rat(4, 1));
        assert!(w.witnesses.contains(&(int(1), NsClass::sf(1, -1))));
        assert_eq!(s.ns_pair(&w.d, &w.d).unwrap(), int(-6));
        for w in &walls {
            assert!(pair_with_polarization(&w.d, &w.m_value).is_zero());
            assert!(w.m_value > rat(2, 1));
        }
        assert!(wall_enumerate(&v, &s, 0).unwrap().is_empty());
        assert!(wall_enumerate(&mv(1, 1, 0, 0), &s, 3).is_err());
    }

    #[test]
    fn suitability_examples() {
        let s = k3();
        let v = mv(2, 1, 0, -2);
        // O(σ - 3f) ⊕ O(3f) has equal slopes on σ + 8f.
        let rep = is_suitable(&rat(5, 1), &v, &s, 3).unwrap();
        assert!(!rep.suitable);
        assert_eq!(rep.largest_wall, Some(rat(8, 1)));
        assert!(is_suitable(&rat(9, 1), &v, &s, 3).unwrap().suitable);
        let small = is_suitable(&rat(5, 1), &v, &s, 1).unwrap();
        assert!(small.suitable);
        assert_eq!(small.largest_wall, Some(rat(4, 1)));
        assert!(is_suitable(&rat(3, 1), &v, &s, 1).unwrap().largest_wall > Some(rat(3, 1)));
        assert!(!is_suitable(&rat(3, 1), &v, &s, 1).unwrap().suitable);
        assert!(is_suitable(&rat(3, 1), &mv(1, 1, 0, 0), &s, 3).unwrap().suitable);
        assert!(is_suitable(&rat(2, 1), &v, &s, 3).is_err());
    }

    #[test]
    fn worked_strata() {
        let s = k3();
        let v = mv(2, 1, 0, -2);
        let wall = Wall::from_class(&NsClass::sf(1, -2)).unwrap();
        let e = strata_enumerate(&v, &wall, 2, &s).unwrap();
        assert_eq!(e.ordered.len(), 6);
        assert_eq!(e.unordered.len(), 3);
        assert_eq!(e.hn_above.len(), 3);
        for st in &e.hn_above {
            assert_eq!(st.total_dim, int(5));
            assert_eq!(st.parts[0].c1, NsClass::sf(1, -1));
            assert_eq!(s.mukai_pair(&st.parts[0], &st.parts[1]).unwrap(), int(3));
        }
        let s1: BTreeSet<Int> = e.hn_above.iter().map(|st| st.parts[0].s.clone()).collect();
        assert_eq!(s1, [int(-3), int(-2), int(-1)].into_iter().collect());
        assert!(strata_enumerate(&v, &wall, 3, &s).unwrap().ordered.is_empty());
        let audit = codim_audit(&v, &wall, &s).unwrap();
        assert_eq!(audit.min_codim, Some(int(2)));
        assert_eq!(audit.bound, rat(1, 2));
        assert!(audit.bound_satisfied && audit.all_strata_checked);
    }

    #[test]
    fn audit_flags() {
        assert!(proposition_bound(&int(12), &int(2)) >= rat(2, 1));
        assert!(proposition_bound(&int(11), &int(2)) < rat(2, 1));
        let s = k3();
        // (2; σ + 2f; -2): ⟨v²⟩ = 2 + 4 + 4 = 10 with c1 primitive.
        let v = mv(2, 1, 2, -2);
        assert_eq!(s.mukai_pair(&v, &v).unwrap(), int(10));
        let wall = Wall::from_class(&NsClass::sf(1, -3)).unwrap();
        let audit = codim_audit(&v, &wall, &s).unwrap();
        assert!(audit.remark_applicable);
        assert!(!audit.corollary_applicable);
    }

    #[test]
    fn hodge_examples() {
        let s = k3();
        let h = NsClass::sf(1, 4);
        let v = hodge_check(&NsClass::sf(1, -2), &h, true, &s).unwrap();
        assert!(v.orthogonal && v.holds);
        assert_eq!(v.d_sq, int(-6));
        assert_eq!(v.strict, Some(true));
        let z = hodge_check(&NsClass::sf(0, 0), &h, false, &s).unwrap();
        assert!(z.holds);
        let f = hodge_check(&NsClass::fiber(), &h, false, &s).unwrap();
        assert!(!f.orthogonal && f.holds);
        assert!(hodge_check(&NsClass::fiber(), &NsClass::sf(1, 1), false, &s).is_err());
    }

    #[test]
    fn stack_dim_upper_bound() {
        let s = k3();
        for r in 1..4 {
            for x in -2..3 {
                for y in -3..4 {
                    for a in -4..5 {
                        let v = mv(r, x, y, a);
                        if let StackDimension::Dim(d) = stack_dim(&v, &s).unwrap() {
                            assert!(d <= s.mukai_pair(&v, &v).unwrap() + int(r * r));
                        }
                    }
                }
            }
        }
    }
}
