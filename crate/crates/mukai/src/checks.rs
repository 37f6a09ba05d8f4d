//! Runs the requested checks of one instance and collects their results.

use std::collections::BTreeMap;

use mukai_core::duality::{
    compute_nu, delta, dimension_match_instance, duality_line_bundle, hypotheses_report, minimal_params,
    neg_nu_rational, ogrady_tower, theta_relation_coords, valid_params, DualityInstance, ThetaRelation,
    TheoremId, TowerParams,
};
use mukai_core::fm::{derive_fm_matrix, verify_fm_suite, FmMatrix};
use mukai_core::hilbert::{exclusion_report, solve_gamma_constraints};
use mukai_core::lattice::SurfaceKind;
use mukai_core::strata::{
    check_stratum, codim_audit, hodge_check, is_suitable, strata_enumerate, wall_enumerate, Stratum, Wall,
};
use mukai_core::{int, Error, Int, MukaiVector, NsClass, Rational, SurfaceModel};
use serde::Serialize;
use serde_json::{json, Value};

use crate::encode;
use crate::spec::{Check, InstanceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub status: Status,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CheckResult {
    fn verdict(ok: bool, data: Value) -> Self {
        CheckResult {
            status: if ok { Status::Pass } else { Status::Fail },
            data,
            reason: None,
        }
    }

    fn error(e: &Error) -> Self {
        CheckResult {
            status: Status::Error,
            data: json!({ "kind": error_kind(e) }),
            reason: Some(e.to_string()),
        }
    }

    fn skipped(reason: String) -> Self {
        CheckResult {
            status: Status::Skipped,
            data: Value::Null,
            reason: Some(reason),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidModel(_) => "invalid-model",
        Error::ModelMismatch { .. } => "model-mismatch",
        Error::WrongModel { .. } => "wrong-model",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::NonIntegral(_) => "non-integral",
        Error::Divisibility { .. } => "divisibility",
        Error::Bound { .. } => "bound",
        Error::Underdetermined { .. } => "underdetermined",
        Error::Inconsistent { .. } => "inconsistent",
        Error::CheckFailed(_) => "check-failed",
    }
}

type Outcome = Result<CheckResult, Error>;

/// Everything a check may read, built once per instance.
struct Context<'a> {
    spec: &'a InstanceSpec,
    surface: SurfaceModel,
    params: Option<TowerParams>,
    /// The duality instance, or why it could not be built.
    duality: Option<Result<DualityInstance, Error>>,
}

impl Context<'_> {
    fn duality(&self) -> Result<&DualityInstance, String> {
        match &self.duality {
            Some(Ok(d)) => Ok(d),
            Some(Err(e)) => Err(format!("nu failed: {e}")),
            None => Err("no params".into()),
        }
    }

    fn vector(&self, which: &str) -> Result<MukaiVector, Error> {
        let v = if which == "v" { &self.spec.v } else { &self.spec.w };
        v.as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("missing vector {which}")))?
            .build(&self.surface)
            .map_err(Error::InvalidArgument)
    }
}

/// Runs every requested check; a failed prerequisite skips its dependents.
pub fn run_checks(spec: &InstanceSpec) -> BTreeMap<String, CheckResult> {
    let surface = spec.surface.build().expect("validated at parse time");
    let params = spec.params.map(|[r, s, a, b]| TowerParams::new(r, s, a, b));
    let duality = params
        .as_ref()
        .map(|p| DualityInstance::new(surface.clone(), p.clone()));
    let ctx = Context {
        spec,
        surface,
        params,
        duality,
    };
    let mut out = BTreeMap::new();
    for &check in &spec.checks {
        let mut result = run_one(&ctx, check).unwrap_or_else(|e| CheckResult::error(&e));
        apply_expectations(spec, check, &mut result);
        out.insert(check.name().to_string(), result);
    }
    out
}

fn apply_expectations(spec: &InstanceSpec, check: Check, result: &mut CheckResult) {
    let prefix = format!("{}.", check.name());
    let mut mismatches = Vec::new();
    for (key, expected) in &spec.expect {
        let Some(path) = key.strip_prefix(&prefix) else { continue };
        let pointer = format!("/{}", path.replace('.', "/"));
        let found = result.data.pointer(&pointer);
        if found != Some(expected) {
            mismatches.push(format!(
                "{key}: expected {expected}, found {}",
                found.map_or("nothing".to_string(), Value::to_string)
            ));
        }
    }
    if !mismatches.is_empty() && result.status != Status::Skipped {
        result.status = Status::Fail;
        let prior = result.reason.take().map(|r| format!("; {r}")).unwrap_or_default();
        result.reason = Some(format!("{}{prior}", mismatches.join("; ")));
    }
}

fn run_one(ctx: &Context, check: Check) -> Outcome {
    if check != Check::Nu && check.needs_params() {
        if let Err(reason) = ctx.duality() {
            return Ok(CheckResult::skipped(reason));
        }
    }
    match check {
        Check::Nu => nu(ctx),
        Check::LineBundle => line_bundle(ctx),
        Check::DimensionMatch => {
            let d = ctx.duality().expect("checked above");
            let m = dimension_match_instance(d);
            Ok(CheckResult::verdict(
                m.equal,
                json!({ "left": encode::int(&m.left), "right": encode::int(&m.right), "equal": m.equal }),
            ))
        }
        Check::Orthogonality => {
            let d = ctx.duality().expect("checked above");
            let chi = d.orthogonality_chi()?;
            Ok(CheckResult::verdict(
                chi == int(0),
                json!({ "chi": encode::int(&chi), "v": encode::vector(&d.v), "w": encode::vector(&d.w) }),
            ))
        }
        Check::Exclusions => exclusions(ctx),
        Check::Gamma => gamma(ctx),
        Check::Hypotheses => hypotheses(ctx),
        Check::Tower => tower(ctx),
        Check::SignLaw => sign_law(ctx),
        Check::FmVerify => fm_verify(ctx),
        Check::ExclusionSweep => exclusion_sweep(ctx),
        Check::Strata => strata(ctx),
        Check::Suitability => suitability(ctx),
        Check::Hodge => hodge(ctx),
        Check::Theta => theta(ctx),
        Check::GeneralSurface => general_surface(ctx),
    }
}

fn nu(ctx: &Context) -> Outcome {
    let p = ctx.params.as_ref().expect("validated");
    let neg_nu = neg_nu_rational(p, &ctx.surface.chi_o());
    match compute_nu(p, &ctx.surface) {
        Ok(nu) => Ok(CheckResult::verdict(
            true,
            json!({ "nu": encode::int(&nu), "neg_nu": encode::rational(&neg_nu) }),
        )),
        Err(e) => {
            let mut r = CheckResult::error(&e);
            r.data["neg_nu"] = encode::rational(&neg_nu);
            Ok(r)
        }
    }
}

fn line_bundle(ctx: &Context) -> Outcome {
    let d = ctx.duality().expect("checked above");
    match duality_line_bundle(d) {
        Ok(rep) => Ok(CheckResult::verdict(
            true,
            json!({
                "l": encode::class(&rep.l),
                "chi_l": encode::int(&rep.chi_l),
                "expected": encode::int(&rep.expected),
                "h0": encode::opt_int(&rep.h0),
                "alternative": rep.alternative.as_ref().map_or(Value::Null, encode::class),
            }),
        )),
        Err(Error::CheckFailed(msg)) => Ok(CheckResult {
            status: Status::Fail,
            data: json!({ "l": encode::class(&d.l) }),
            reason: Some(msg),
        }),
        Err(e) => Err(e),
    }
}

fn exclusions(ctx: &Context) -> Outcome {
    let p = ctx.params.as_ref().expect("validated");
    let ex = exclusion_report(p, &ctx.surface)?;
    let ok = ex.q3_excluded && (ex.q1q2_excluded || ex.exceptional_case) && ex.s_proper && ex.q_proper;
    Ok(CheckResult::verdict(
        ok,
        json!({
            "l": encode::class(&ex.l),
            "h0_l_minus_bf": encode::int(&ex.h0_l_minus_bf),
            "h0_l_minus_af": encode::int(&ex.h0_l_minus_af),
            "h0_l_minus_a1f": encode::int(&ex.h0_l_minus_a1f),
            "h0_l_minus_b1f": encode::int(&ex.h0_l_minus_b1f),
            "h0_l_minus_sigma": encode::int(&ex.h0_l_minus_sigma),
            "q3_sections": encode::int(&ex.q3_sections),
            "q1q2_sections": encode::int(&ex.q1q2_sections),
            "s_sections": encode::int(&ex.s_sections),
            "q_fiber_coeff": encode::int(&ex.q_fiber_coeff),
            "q3_excluded": ex.q3_excluded,
            "q1q2_excluded": ex.q1q2_excluded,
            "exceptional_case": ex.exceptional_case,
            "s_proper": ex.s_proper,
            "q_proper": ex.q_proper,
        }),
    ))
}

fn gamma(ctx: &Context) -> Outcome {
    let p = ctx.params.as_ref().expect("validated");
    let sol = solve_gamma_constraints(p, &ctx.surface)?;
    Ok(CheckResult::verdict(
        sol.gamma0_is_r1_r_plus_s1_s,
        json!({
            "relations": sol.relation_strings(),
            "free": sol.free,
            "constraints": sol.constraints,
            "gamma0_is_r1_r_plus_s1_s": sol.gamma0_is_r1_r_plus_s1_s,
        }),
    ))
}

fn default_theorems(surface: &SurfaceModel) -> Vec<TheoremId> {
    match surface.kind() {
        SurfaceKind::GenericK3 { .. } => vec![TheoremId::T1, TheoremId::T1A],
        SurfaceKind::EllipticK3 => vec![TheoremId::T2, TheoremId::T5, TheoremId::Conj],
        SurfaceKind::EllipticGeneral { .. } => vec![TheoremId::T5, TheoremId::Conj],
    }
}

fn hypotheses(ctx: &Context) -> Outcome {
    let (v, w) = if ctx.spec.v.is_some() && ctx.spec.w.is_some() {
        (ctx.vector("v")?, ctx.vector("w")?)
    } else {
        match ctx.duality() {
            Ok(d) => (d.v.clone(), d.w.clone()),
            Err(reason) => return Ok(CheckResult::skipped(format!("needs v and w or valid params: {reason}"))),
        }
    };
    let theorems = match &ctx.spec.bounds.theorems {
        Some(names) => names
            .iter()
            .map(|n| TheoremId::parse(n).ok_or_else(|| Error::InvalidArgument(format!("unknown theorem {n:?}"))))
            .collect::<Result<Vec<_>, _>>()?,
        None => default_theorems(&ctx.surface),
    };
    let mut reports = serde_json::Map::new();
    for t in theorems {
        let rep = hypotheses_report(&v, &w, &ctx.surface, t)?;
        let conditions: serde_json::Map<String, Value> = rep
            .conditions
            .iter()
            .map(|c| (c.label.clone(), json!({ "holds": c.holds, "detail": c.detail })))
            .collect();
        reports.insert(
            t.tag().to_string(),
            json!({ "verdict": rep.verdict, "conditions": conditions }),
        );
    }
    Ok(CheckResult::verdict(
        true,
        json!({ "v": encode::vector(&v), "w": encode::vector(&w), "theorems": reports }),
    ))
}

fn tower(ctx: &Context) -> Outcome {
    let s = &ctx.surface;
    let r_max = ctx.spec.bounds.r_max.unwrap_or(10);
    let a_max = ctx.spec.bounds.a_max.unwrap_or(50);
    let mut dim_failures = Vec::new();
    let mut chi_failures = Vec::new();
    let mut step_failures = Vec::new();
    let mut points = 0;
    for a in 0..=a_max {
        let a = int(a);
        let rep = ogrady_tower(&int(r_max), &a, s)?;
        for (v, r) in rep.vectors.iter().zip(1..) {
            points += 1;
            let expected: Int = &a * 2;
            let dim_ok = s.moduli_dim(v)? == expected
                && (!s.is_k3() || s.mukai_pair(v, v)? == &expected - 2);
            if !dim_ok {
                dim_failures.push(json!([r, encode::int(&a)]));
            }
            if s.chi_vec(v)? != int(1) {
                chi_failures.push(json!([r, encode::int(&a)]));
            }
        }
        for step in rep.steps.iter().filter(|st| !st.recursion_holds || st.hom_chi != int(-1)) {
            step_failures.push(json!([encode::int(&step.r), encode::int(&a)]));
        }
    }
    let ok = dim_failures.is_empty() && chi_failures.is_empty() && step_failures.is_empty();
    Ok(CheckResult::verdict(
        ok,
        json!({
            "r_max": r_max,
            "a_max": a_max,
            "points": points,
            "dimension_failures": dim_failures,
            "chi_failures": chi_failures,
            "recursion_failures": step_failures,
        }),
    ))
}

fn grid_vectors(s: &SurfaceModel, bound: i64) -> Vec<MukaiVector> {
    let rng = || -bound..=bound;
    let mut out = Vec::new();
    for r in rng() {
        for a in rng() {
            if s.basis().rank() == 1 {
                out.extend(rng().map(|c| MukaiVector::new(r, NsClass::h(c), a)));
            } else {
                for x in rng() {
                    out.extend(rng().map(|y| MukaiVector::new(r, NsClass::sf(x, y), a)));
                }
            }
        }
    }
    out
}

fn sign_law(ctx: &Context) -> Outcome {
    let s = &ctx.surface;
    if !s.is_k3() {
        return Err(Error::WrongModel { required: "a K3 lattice" });
    }
    let bound = ctx.spec.bounds.grid.unwrap_or(3);
    let vs = grid_vectors(s, bound);
    let duals = vs.iter().map(|w| s.mukai_dual(w)).collect::<Result<Vec<_>, _>>()?;
    let cherns = vs.iter().map(|w| s.chern(w)).collect::<Result<Vec<_>, _>>()?;
    let mut sign_failures = 0u64;
    let mut orthogonality_failures = 0u64;
    let mut pairs = 0u64;
    for (v, cv) in vs.iter().zip(&cherns) {
        for (wd, cw) in duals.iter().zip(&cherns) {
            pairs += 1;
            let grr = s.euler_form_chern(cv, cw)?;
            let pairing = s.mukai_pair(v, wd)?;
            if grr != -pairing.clone() {
                sign_failures += 1;
            }
            if (grr == int(0)) != (pairing == int(0)) {
                orthogonality_failures += 1;
            }
        }
    }
    let o = s.structure_sheaf();
    Ok(CheckResult::verdict(
        sign_failures == 0 && orthogonality_failures == 0,
        json!({
            "grid": bound,
            "vectors": vs.len(),
            "pairs": pairs,
            "sign_failures": sign_failures,
            "orthogonality_failures": orthogonality_failures,
            "structure_sheaf": {
                "grr": encode::int(&s.euler_form(&o, &o)?),
                "pairing": encode::int(&s.mukai_pair(&o, &o)?),
            },
        }),
    ))
}

fn matrix_columns(m: &FmMatrix) -> Value {
    Value::Array(m.columns().iter().map(encode::ints).collect())
}

fn pairs_json<A: Serialize, B: Serialize>(xs: impl IntoIterator<Item = (A, B)>) -> Value {
    Value::Array(xs.into_iter().map(|(a, b)| json!([a, b])).collect())
}

fn fm_verify(ctx: &Context) -> Outcome {
    let r_max = ctx.spec.bounds.r_max.unwrap_or(6);
    let a_max = ctx.spec.bounds.a_max.unwrap_or(20);
    let (m, diag) = derive_fm_matrix(&ctx.surface)?;
    let rep = verify_fm_suite(&m, &ctx.surface, r_max, a_max)?;
    let int_pairs = |xs: &[(Int, Int)]| pairs_json(xs.iter().map(|(a, b)| (encode::int(a), encode::int(b))));
    Ok(CheckResult::verdict(
        diag.unique && rep.all_pass(),
        json!({
            "columns": matrix_columns(&m),
            "derivation": {
                "constraints": diag.constraints.len(),
                "rank": diag.rank,
                "unknowns": diag.unknowns,
                "unique": diag.unique,
                "max_residual": encode::rational(&diag.max_residual),
            },
            "determinant": encode::int(&rep.determinant),
            "isometry_passed": rep.isometry_passed(),
            "isometry_failures": pairs_json(rep.isometry_failures.iter().copied()),
            "mukai_isometry_failures": pairs_json(rep.mukai_isometry_failures.iter().copied()),
            "dual_image_failures": int_pairs(&rep.dual_image_failures),
            "image_failures": int_pairs(&rep.image_failures),
            "twist_failures": rep.twist_failures.len(),
            "bridge_identity": rep.bridge_identity,
            "transform_t_columns": matrix_columns(&rep.transform_t),
            "grr_failures": rep.grr_failures.as_ref().map_or(Value::Null, |f| int_pairs(f)),
            "checked_points": rep.checked_points,
            "r_max": r_max,
            "a_max": a_max,
        }),
    ))
}

fn params_json(p: &TowerParams) -> Value {
    json!([encode::int(&p.r), encode::int(&p.s), encode::int(&p.a), encode::int(&p.b)])
}

fn exclusion_sweep(ctx: &Context) -> Outcome {
    let b = &ctx.spec.bounds;
    let r_range = b.r_range.unwrap_or([2, 4]);
    let s_range = b.s_range.unwrap_or([2, 4]);
    let ab_max = b.ab_max.unwrap_or(60);
    let grid = valid_params(&ctx.surface, (r_range[0], r_range[1]), (s_range[0], s_range[1]), ab_max);
    let mut h0_failures = Vec::new();
    let mut h00_exceptions = Vec::new();
    let mut orthogonality_failures = Vec::new();
    let mut proper_failures = Vec::new();
    for p in &grid {
        let ex = exclusion_report(p, &ctx.surface)?;
        if !ex.q3_excluded {
            h0_failures.push(params_json(p));
        }
        if !ex.q1q2_excluded {
            h00_exceptions.push(params_json(p));
        }
        if !(ex.s_proper && ex.q_proper) {
            proper_failures.push(params_json(p));
        }
        let inst = DualityInstance::new(ctx.surface.clone(), p.clone())?;
        if inst.orthogonality_chi()? != int(0) {
            orthogonality_failures.push(params_json(p));
        }
    }
    let documented = json!([[2, 2, 9, 9]]);
    let exceptions_ok = h00_exceptions.is_empty() || Value::Array(h00_exceptions.clone()) == documented;
    let ok = h0_failures.is_empty() && exceptions_ok && orthogonality_failures.is_empty() && proper_failures.is_empty();
    Ok(CheckResult::verdict(
        ok,
        json!({
            "r_range": r_range,
            "s_range": s_range,
            "ab_max": ab_max,
            "points": grid.len(),
            "h0_failures": h0_failures,
            "h00_exceptions": h00_exceptions,
            "proper_failures": proper_failures,
            "orthogonality_failures": orthogonality_failures,
        }),
    ))
}

fn stratum_json(st: &Stratum) -> Value {
    json!({
        "parts": st.parts.iter().map(encode::vector).collect::<Vec<_>>(),
        "dims": encode::ints(&st.dims),
        "total_dim": encode::int(&st.total_dim),
    })
}

fn strata(ctx: &Context) -> Outcome {
    let s = &ctx.surface;
    let v = ctx.vector("v")?;
    let b = &ctx.spec.bounds;
    let coeff_bound = b.coeff_bound.unwrap_or(3);
    let walls = match b.wall {
        Some([x, y]) => vec![Wall::from_class(&NsClass::sf(x, y))?],
        None => wall_enumerate(&v, s, coeff_bound)?,
    };
    let rank = i64::try_from(&v.rank).map_err(|_| Error::InvalidArgument("rank too large".into()))?;
    let part_counts: Vec<usize> = match b.parts {
        Some(k) => vec![k],
        None => (2..=rank.max(2) as usize).collect(),
    };
    let mut ok = true;
    let mut walls_json = Vec::new();
    for wall in &walls {
        let mut by_parts = serde_json::Map::new();
        let mut chain_failures = 0usize;
        for &k in &part_counts {
            let e = strata_enumerate(&v, wall, k, s)?;
            for st in &e.ordered {
                if !check_stratum(&v, wall, st, s)?.all_ok() {
                    chain_failures += 1;
                }
            }
            by_parts.insert(
                k.to_string(),
                json!({
                    "ordered": e.ordered.len(),
                    "unordered": e.unordered.len(),
                    "hn_above": e.hn_above.len(),
                    "hn_above_strata": e.hn_above.iter().map(stratum_json).collect::<Vec<_>>(),
                }),
            );
        }
        let audit = codim_audit(&v, wall, s)?;
        ok &= chain_failures == 0 && audit.bound_satisfied && audit.all_strata_checked;
        walls_json.push(json!({
            "d": encode::class(&wall.d),
            "m": encode::rational(&wall.m_value),
            "witnesses": wall.witnesses.len(),
            "strata": by_parts,
            "chain_failures": chain_failures,
            "audit": {
                "v_sq": encode::int(&audit.v_sq),
                "strata_count": audit.strata_count,
                "min_codim": encode::opt_int(&audit.min_codim),
                "bound": encode::rational(&audit.bound),
                "bound_satisfied": audit.bound_satisfied,
                "corollary_applicable": audit.corollary_applicable,
                "remark_applicable": audit.remark_applicable,
                "positive_square": audit.positive_square,
            },
        }));
    }
    Ok(CheckResult::verdict(
        ok,
        json!({
            "v": encode::vector(&v),
            "coeff_bound": coeff_bound,
            "walls": walls_json,
        }),
    ))
}

fn suitability(ctx: &Context) -> Outcome {
    let v = ctx.vector("v")?;
    let b = &ctx.spec.bounds;
    let coeff_bound = b.coeff_bound.unwrap_or(3);
    let m: Rational = b
        .m
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("suitability needs bounds.m".into()))?
        .parse()
        .map_err(|_| Error::InvalidArgument("bounds.m is not a rational".into()))?;
    let rep = is_suitable(&m, &v, &ctx.surface, coeff_bound)?;
    let opt = |q: &Option<Rational>| q.as_ref().map_or(Value::Null, encode::rational);
    Ok(CheckResult::verdict(
        true,
        json!({
            "m": encode::rational(&m),
            "suitable": rep.suitable,
            "largest_wall": opt(&rep.largest_wall),
            "largest_numerical_wall": opt(&rep.largest_numerical_wall),
            "coeff_bound": rep.coeff_bound,
        }),
    ))
}

fn hodge(ctx: &Context) -> Outcome {
    let b = &ctx.spec.bounds;
    let [dx, dy] = b
        .d
        .ok_or_else(|| Error::InvalidArgument("hodge needs bounds.d".into()))?;
    let [hx, hy] = b
        .h
        .ok_or_else(|| Error::InvalidArgument("hodge needs bounds.h".into()))?;
    let verdict = hodge_check(
        &NsClass::sf(dx, dy),
        &NsClass::sf(hx, hy),
        b.primitive.unwrap_or(false),
        &ctx.surface,
    )?;
    Ok(CheckResult::verdict(
        verdict.holds && verdict.strict != Some(false),
        json!({
            "orthogonal": verdict.orthogonal,
            "d_sq": encode::int(&verdict.d_sq),
            "holds": verdict.holds,
            "strict": verdict.strict,
        }),
    ))
}

fn theta_json(t: &ThetaRelation) -> Value {
    json!({
        "h_sq": encode::int(&t.h_sq),
        "lhs": encode::ints(&t.lhs.components()),
        "rhs": encode::ints(&t.rhs.components()),
        "euler_perp": encode::ints(&t.euler_perp),
        "literal_pairings": encode::ints(&t.literal_pairings),
    })
}

fn theta(ctx: &Context) -> Outcome {
    let b = &ctx.spec.bounds;
    let r_range = b.r_range.unwrap_or([2, 5]);
    let s_range = b.s_range.unwrap_or([2, 5]);
    let chi_range = b.chi_range.unwrap_or([-5, 0]);
    let chi_p_range = b.chi_p_range.unwrap_or([-5, 0]);
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for r in r_range[0]..=r_range[1] {
        for s in s_range[0]..=s_range[1] {
            for chi in chi_range[0]..=chi_range[1] {
                for chi_p in chi_p_range[0]..=chi_p_range[1] {
                    let t = theta_relation_coords(&int(r), &int(s), &int(chi), &int(chi_p));
                    if t.h_sq <= int(0) {
                        continue;
                    }
                    checked += 1;
                    if !t.holds() || t.euler_perp.iter().any(|x| *x != int(0)) {
                        failures.push(json!({
                            "point": [r, s, chi, chi_p],
                            "components": t.failing_components(),
                        }));
                    }
                }
            }
        }
    }
    let worked = theta_relation_coords(&int(2), &int(3), &int(0), &int(-1));
    Ok(CheckResult::verdict(
        failures.is_empty() && worked.holds(),
        json!({
            "checked": checked,
            "failures": failures,
            "worked": theta_json(&worked),
        }),
    ))
}

fn general_surface(ctx: &Context) -> Outcome {
    let s = &ctx.surface;
    s.require_elliptic()?;
    let b = &ctx.spec.bounds;
    let r_range = b.r_range.unwrap_or([2, 3]);
    let s_range = b.s_range.unwrap_or([2, 3]);
    let search_max = b.search_max.unwrap_or(400);
    let chi = s.chi_o();
    let mut ok = s.canonical() == NsClass::sf(0, &chi - 2);
    let mut cases = Vec::new();
    for r in r_range[0]..=r_range[1] {
        for rs in s_range[0]..=s_range[1] {
            let Some(p) = minimal_params(s, r, rs, search_max) else {
                ok = false;
                cases.push(json!({ "r": r, "s": rs, "params": Value::Null }));
                continue;
            };
            let inst = DualityInstance::new(s.clone(), p.clone())?;
            let chi_l = s.chi_rr(&inst.l)?;
            let orth = inst.orthogonality_chi()?;
            let case_ok = chi_l == &p.a + &p.b && orth == int(0);
            ok &= case_ok;
            cases.push(json!({
                "r": r,
                "s": rs,
                "params": params_json(&p),
                "nu": encode::int(&inst.nu),
                "l": encode::class(&inst.l),
                "chi_l": encode::int(&chi_l),
                "orthogonality": encode::int(&orth),
                "delta": encode::int(&delta(&chi, &int(r), &int(rs))),
                "ok": case_ok,
            }));
        }
    }
    let degeneration = if chi == int(2) {
        let consistent = degeneration_consistent(s, b.ab_max.unwrap_or(40))?;
        ok &= consistent;
        Value::Bool(consistent)
    } else {
        Value::Null
    };
    Ok(CheckResult::verdict(
        ok,
        json!({
            "chi_o": encode::int(&chi),
            "canonical": encode::class(&s.canonical()),
            "delta_2_2": encode::int(&delta(&chi, &int(2), &int(2))),
            "cases": cases,
            "matches_elliptic_k3": degeneration,
        }),
    ))
}

/// At `χ(O) = 2` every parameter, vector, line bundle and the transform
/// agree with the elliptic K3 model.
fn degeneration_consistent(general: &SurfaceModel, ab_max: i64) -> Result<bool, Error> {
    let k3 = SurfaceModel::elliptic_k3();
    let grid = valid_params(&k3, (2, 4), (2, 4), ab_max);
    if grid != valid_params(general, (2, 4), (2, 4), ab_max) {
        return Ok(false);
    }
    for p in &grid {
        let a = DualityInstance::new(k3.clone(), p.clone())?;
        let b = DualityInstance::new(general.clone(), p.clone())?;
        if a.nu != b.nu || a.l != b.l || a.v != b.v || a.w != b.w {
            return Ok(false);
        }
        if k3.chi_rr(&a.l)? != general.chi_rr(&b.l)? {
            return Ok(false);
        }
    }
    let (mk, _) = derive_fm_matrix(&k3)?;
    let (mg, _) = derive_fm_matrix(general)?;
    Ok(mk.columns() == mg.columns())
}
