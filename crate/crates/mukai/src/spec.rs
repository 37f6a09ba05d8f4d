//! Instance descriptions read from TOML, with grid expansion.
//!
//! ```toml
//! [[instance]]
//! name = "exceptional"
//! surface = { kind = "elliptic-k3" }
//! params = { r = 2, s = 2, a = 9, b = 9 }
//! checks = ["nu", "line-bundle", "dimension-match", "exclusions"]
//! expect = { "nu.nu" = -2 }
//! ```
//!
//! Any of `params.r`, `params.s`, `params.a`, `params.b`, `v.s`, `w.s` and
//! `surface.chi_o` may be an inclusive range `[lo, hi]`; the instance then
//! expands to one entry per grid point.

use std::collections::BTreeMap;
use std::fmt;

use mukai_core::{MukaiVector, NsClass, SurfaceModel};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("instance {index}{name}: {field}: {message}")]
    Field {
        index: usize,
        name: String,
        field: String,
        message: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Nu,
    LineBundle,
    DimensionMatch,
    Orthogonality,
    Exclusions,
    Gamma,
    Hypotheses,
    Tower,
    SignLaw,
    FmVerify,
    ExclusionSweep,
    Strata,
    Suitability,
    Hodge,
    Theta,
    GeneralSurface,
}

impl Check {
    pub const ALL: [Check; 16] = [
        Check::Nu,
        Check::LineBundle,
        Check::DimensionMatch,
        Check::Orthogonality,
        Check::Exclusions,
        Check::Gamma,
        Check::Hypotheses,
        Check::Tower,
        Check::SignLaw,
        Check::FmVerify,
        Check::ExclusionSweep,
        Check::Strata,
        Check::Suitability,
        Check::Hodge,
        Check::Theta,
        Check::GeneralSurface,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Nu => "nu",
            Check::LineBundle => "line-bundle",
            Check::DimensionMatch => "dimension-match",
            Check::Orthogonality => "orthogonality",
            Check::Exclusions => "exclusions",
            Check::Gamma => "gamma",
            Check::Hypotheses => "hypotheses",
            Check::Tower => "tower",
            Check::SignLaw => "sign-law",
            Check::FmVerify => "fm-verify",
            Check::ExclusionSweep => "exclusion-sweep",
            Check::Strata => "strata",
            Check::Suitability => "suitability",
            Check::Hodge => "hodge",
            Check::Theta => "theta",
            Check::GeneralSurface => "general-surface",
        }
    }

    pub fn parse(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Whether the check reads the `(r, s, a, b)` parameters.
    pub fn needs_params(self) -> bool {
        matches!(
            self,
            Check::Nu
                | Check::LineBundle
                | Check::DimensionMatch
                | Check::Orthogonality
                | Check::Exclusions
                | Check::Gamma
        )
    }

    pub fn needs_v(self) -> bool {
        matches!(self, Check::Strata | Check::Suitability)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum Axis {
    Value(i64),
    Range([i64; 2]),
}

impl Axis {
    fn values(&self) -> Vec<i64> {
        match *self {
            Axis::Value(v) => vec![v],
            Axis::Range([lo, hi]) => (lo..=hi).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKindName {
    EllipticK3,
    GenericK3,
    Elliptic,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    kind: SurfaceKindName,
    degree: Option<i64>,
    chi_o: Option<Axis>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    r: Axis,
    s: Axis,
    a: Axis,
    b: Axis,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVector {
    r: i64,
    c1: Vec<i64>,
    s: Axis,
}

/// Numeric bounds and extra inputs for individual checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ab_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_p_range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorems: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_max: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    name: Option<String>,
    surface: RawSurface,
    params: Option<RawParams>,
    v: Option<RawVector>,
    w: Option<RawVector>,
    checks: Vec<Check>,
    #[serde(default)]
    bounds: Bounds,
    #[serde(default)]
    expect: BTreeMap<String, toml::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    instance: Vec<RawInstance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceSpec {
    pub kind: SurfaceKindName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_o: Option<i64>,
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<SurfaceModel, String> {
        let model = match self.kind {
            SurfaceKindName::EllipticK3 => {
                if self.degree.is_some() || self.chi_o.is_some() {
                    return Err("elliptic-k3 takes no degree or chi_o".into());
                }
                Ok(SurfaceModel::elliptic_k3())
            }
            SurfaceKindName::GenericK3 => {
                if self.chi_o.is_some() {
                    return Err("generic-k3 takes no chi_o".into());
                }
                let d = self.degree.ok_or("generic-k3 needs a degree")?;
                SurfaceModel::generic_k3(d)
            }
            SurfaceKindName::Elliptic => {
                if self.degree.is_some() {
                    return Err("elliptic takes no degree".into());
                }
                let chi = self.chi_o.ok_or("elliptic needs chi_o")?;
                SurfaceModel::elliptic_general(chi)
            }
        };
        model.map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorSpec {
    pub r: i64,
    pub c1: Vec<i64>,
    pub s: i64,
}

impl VectorSpec {
    pub fn build(&self, surface: &SurfaceModel) -> Result<MukaiVector, String> {
        let c1 = NsClass::from_coeffs(surface.basis(), &self.c1.iter().map(|&c| c.into()).collect::<Vec<_>>())
            .map_err(|e| e.to_string())?;
        Ok(MukaiVector::new(self.r, c1, self.s))
    }

    /// Parses `r;c1;s` with comma-separated `c1` coefficients.
    pub fn parse(text: &str) -> Result<Self, String> {
        let fields: Vec<&str> = text.split(';').map(str::trim).collect();
        let [r, c1, s] = fields[..] else {
            return Err(format!("expected r;c1;s, got {text:?}"));
        };
        let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(VectorSpec {
            r: num(r)?,
            c1: c1.split(',').map(num).collect::<Result<_, _>>()?,
            s: num(s)?,
        })
    }
}

/// One grid point of an instance, ready to run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub surface: SurfaceSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<[i64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<VectorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<VectorSpec>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "is_default")]
    pub bounds: Bounds,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub expect: BTreeMap<String, serde_json::Value>,
}

fn is_default(b: &Bounds) -> bool {
    *b == Bounds::default()
}

impl InstanceSpec {
    pub fn new(surface: SurfaceSpec, checks: Vec<Check>) -> Self {
        InstanceSpec {
            name: None,
            surface,
            params: None,
            v: None,
            w: None,
            checks,
            bounds: Bounds::default(),
            expect: BTreeMap::new(),
        }
    }

    /// Structural validation that does not need any computation.
    pub fn validate(&self) -> Result<(), (String, String)> {
        let surface = self.surface.build().map_err(|e| ("surface".to_string(), e))?;
        for (field, v) in [("v", &self.v), ("w", &self.w)] {
            if let Some(v) = v {
                v.build(&surface).map_err(|e| (field.to_string(), e))?;
            }
        }
        if self.checks.is_empty() {
            return Err(("checks".into(), "no checks requested".into()));
        }
        for c in &self.checks {
            if c.needs_params() && self.params.is_none() {
                return Err(("params".into(), format!("check {c} needs params")));
            }
            if c.needs_v() && self.v.is_none() {
                return Err(("v".into(), format!("check {c} needs a vector v")));
            }
        }
        for key in self.expect.keys() {
            let check = key.split('.').next().unwrap_or_default();
            match Check::parse(check) {
                Some(c) if self.checks.contains(&c) => {}
                Some(_) => return Err((format!("expect.{key}"), format!("check {check} is not requested"))),
                None => return Err((format!("expect.{key}"), format!("unknown check {check:?}"))),
            }
        }
        if let Some(m) = &self.bounds.m {
            m.parse::<mukai_core::Rational>()
                .map_err(|e| ("bounds.m".to_string(), format!("{m:?}: {e}")))?;
        }
        Ok(())
    }
}

fn expand_vector(v: &Option<RawVector>) -> Vec<Option<VectorSpec>> {
    match v {
        None => vec![None],
        Some(v) => v
            .s
            .values()
            .into_iter()
            .map(|s| {
                Some(VectorSpec {
                    r: v.r,
                    c1: v.c1.clone(),
                    s,
                })
            })
            .collect(),
    }
}

fn to_json(v: &toml::Value) -> serde_json::Value {
    serde_json::to_value(v).expect("TOML values are JSON-representable")
}

/// Parses a spec file and expands every grid.
pub fn parse_spec(text: &str) -> Result<Vec<InstanceSpec>, SpecError> {
    let raw: RawFile = toml::from_str(text)?;
    let mut out = Vec::new();
    for (index, inst) in raw.instance.into_iter().enumerate() {
        let chis: Vec<Option<i64>> = match &inst.surface.chi_o {
            None => vec![None],
            Some(axis) => axis.values().into_iter().map(Some).collect(),
        };
        let params: Vec<Option<[i64; 4]>> = match &inst.params {
            None => vec![None],
            Some(p) => {
                let mut grid = Vec::new();
                for r in p.r.values() {
                    for s in p.s.values() {
                        for a in p.a.values() {
                            for b in p.b.values() {
                                grid.push(Some([r, s, a, b]));
                            }
                        }
                    }
                }
                grid
            }
        };
        let vs = expand_vector(&inst.v);
        let ws = expand_vector(&inst.w);
        let expect: BTreeMap<String, serde_json::Value> =
            inst.expect.iter().map(|(k, v)| (k.clone(), to_json(v))).collect();
        let before = out.len();
        for chi_o in &chis {
            for p in &params {
                for v in &vs {
                    for w in &ws {
                        out.push(InstanceSpec {
                            name: inst.name.clone(),
                            surface: SurfaceSpec {
                                kind: inst.surface.kind,
                                degree: inst.surface.degree,
                                chi_o: *chi_o,
                            },
                            params: *p,
                            v: v.clone(),
                            w: w.clone(),
                            checks: inst.checks.clone(),
                            bounds: inst.bounds.clone(),
                            expect: expect.clone(),
                        });
                    }
                }
            }
        }
        if out.len() == before {
            return Err(SpecError::Field {
                index,
                name: label(&inst.name),
                field: "grid".into(),
                message: "a range is empty".into(),
            });
        }
        for spec in &out[before..] {
            spec.validate().map_err(|(field, message)| SpecError::Field {
                index,
                name: label(&inst.name),
                field,
                message,
            })?;
        }
    }
    Ok(out)
}

fn label(name: &Option<String>) -> String {
    name.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
}
