//! Problem files: a ring, an optional blowup center, a task and its payload.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::QuotientCtx;
use crate::nagata::TFrac;
use crate::poly::{BaseOrder, Poly, VarTable};

pub const PROBLEM_SCHEMA: &str = "dstar-problem/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Gb,
    Member,
    Eliminate,
    Colon,
    Saturate,
    Intersect,
    Primitive,
    NagataMember,
    Relevant,
    Charts,
    Glue,
    Pullback,
    Contract,
    DstarMember,
    Theta,
    Phi,
    ToRelevant,
    ToSheaf,
    Roundtrip,
}

impl TaskKind {
    /// Tasks that are posed on a blowup model.
    pub fn needs_model(self) -> bool {
        use TaskKind::*;
        matches!(
            self,
            Charts | Glue | Pullback | DstarMember | Theta | Phi | ToRelevant | ToSheaf | Roundtrip
        )
    }

    /// Tasks posed in `R[t]` rather than `R`.
    pub fn uses_t(self) -> bool {
        use TaskKind::*;
        matches!(self, Primitive | NagataMember | Relevant) || self.needs_model()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub center: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: String,
    pub ring: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<BaseOrder>,
    pub task: TaskKind,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub payload: serde_json::Value,
}

/// A fraction `num / den`; a bare string is a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FracSpec {
    Poly(String),
    Frac(FracParts),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FracParts {
    pub num: String,
    pub den: String,
}

impl FracSpec {
    pub fn of(u: &TFrac) -> FracSpec {
        if u.den.is_one() {
            FracSpec::Poly(u.num.to_string())
        } else {
            FracSpec::Frac(FracParts {
                num: u.num.to_string(),
                den: u.den.to_string(),
            })
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GensPayload {
    pub gens: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberPayload {
    pub poly: String,
    pub gens: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EliminatePayload {
    pub gens: Vec<String>,
    pub eliminate: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColonPayload {
    pub gens: Vec<String>,
    pub by: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectPayload {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyPayload {
    pub poly: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementPayload {
    pub element: FracSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FracGensPayload {
    pub gens: Vec<FracSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmptyPayload {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafPayload {
    pub sheaf: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealPayload {
    pub ideal: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartIdealPayload {
    pub chart: usize,
    pub ideal: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaPayload {
    #[serde(default)]
    pub orderings: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiPayload {
    pub alphas: Vec<FracSpec>,
    pub unit_charts: Vec<usize>,
}

/// Parse a problem file from JSON text.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let p: ProblemFile = serde_json::from_str(text)?;
    if p.schema != PROBLEM_SCHEMA {
        return Err(Error::schema("schema", format!("expected `{PROBLEM_SCHEMA}`, found `{}`", p.schema)));
    }
    if p.task.needs_model() && p.model.is_none() {
        return Err(Error::schema("model", format!("task `{}` needs a model", p.task.name())));
    }
    if p.model.is_some() && !p.relations.is_empty() {
        return Err(Error::schema("relations", "blowup models are built over polynomial rings only"));
    }
    Ok(p)
}

impl TaskKind {
    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }
}

impl ProblemFile {
    /// Decode the payload for this task; a missing payload reads as `{}`.
    pub fn payload<T: DeserializeOwned>(&self) -> Result<T> {
        let v = if self.payload.is_null() {
            serde_json::Value::Object(Default::default())
        } else {
            self.payload.clone()
        };
        serde_json::from_value(v).map_err(|e| Error::schema("payload", e.to_string()))
    }

    /// The ring's variable table; `t` is appended for tasks posed in `R[t]`.
    pub fn table(&self) -> Result<Arc<VarTable>> {
        let t = VarTable::user(&self.ring).map_err(|e| Error::schema("ring", e.to_string()))?;
        let uses_t = self.task.uses_t() || (self.task == TaskKind::Contract && self.model.is_none());
        Ok(if uses_t { t.with_t() } else { t })
    }

    pub fn ctx(&self, order: BaseOrder) -> Result<QuotientCtx> {
        let table = self.table()?;
        let rel = polys(&self.relations, &table, "relations")?;
        QuotientCtx::new(&table, rel, order)
    }

    pub fn center(&self, ground: &Arc<VarTable>) -> Result<Vec<Poly>> {
        let spec = self.model.as_ref().ok_or_else(|| Error::schema("model", "missing"))?;
        polys(&spec.center, ground, "model.center")
    }
}

pub fn poly(s: &str, table: &Arc<VarTable>, field: &str) -> Result<Poly> {
    Poly::parse(s, table).map_err(|e| Error::schema(field, e.to_string()))
}

pub fn polys(ss: &[String], table: &Arc<VarTable>, field: &str) -> Result<Vec<Poly>> {
    ss.iter()
        .enumerate()
        .map(|(i, s)| poly(s, table, &format!("{field}[{i}]")))
        .collect()
}

pub fn frac(f: &FracSpec, table: &Arc<VarTable>, field: &str) -> Result<TFrac> {
    match f {
        FracSpec::Poly(s) => Ok(TFrac::from_poly(poly(s, table, field)?)),
        FracSpec::Frac(p) => {
            let num = poly(&p.num, table, &format!("{field}.num"))?;
            let den = poly(&p.den, table, &format!("{field}.den"))?;
            if den.is_zero() {
                return Err(Error::schema(format!("{field}.den"), "zero denominator"));
            }
            Ok(TFrac { num, den })
        }
    }
}

pub fn fracs(fs: &[FracSpec], table: &Arc<VarTable>, field: &str) -> Result<Vec<TFrac>> {
    fs.iter()
        .enumerate()
        .map(|(i, f)| frac(f, table, &format!("{field}[{i}]")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_rejected() {
        let ok = r#"{"schema":"dstar-problem/1","ring":["x"],"task":"gb","payload":{"gens":["x"]}}"#;
        let p = parse_problem(ok).unwrap();
        assert!(p.payload::<GensPayload>().is_ok());
        let bad = r#"{"schema":"dstar-problem/1","ring":["x"],"task":"gb","colour":1}"#;
        assert!(matches!(parse_problem(bad), Err(Error::Json(_))));
        let bad = r#"{"schema":"dstar-problem/1","ring":["x"],"task":"gb","payload":{"gens":["x"],"extra":[]}}"#;
        assert!(matches!(
            parse_problem(bad).unwrap().payload::<GensPayload>(),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let p = parse_problem(r#"{"schema":"dstar-problem/1","ring":["x","y"],"task":"gb","payload":{"gens":["x","2z"]}}"#)
            .unwrap();
        let g: GensPayload = p.payload().unwrap();
        match polys(&g.gens, &p.table().unwrap(), "payload.gens") {
            Err(Error::Schema { field, .. }) => assert_eq!(field, "payload.gens[1]"),
            other => panic!("{other:?}"),
        }
        let e = parse_problem(r#"{"schema":"dstar-problem/1","ring":["x"],"task":"glue"}"#).unwrap_err();
        assert!(e.to_string().contains("`model`"));
    }

    #[test]
    fn fractions() {
        let t = VarTable::user(&["x", "y", "t"]).unwrap();
        let f: FracSpec = serde_json::from_str(r#"{"num":"y","den":"x*t + y"}"#).unwrap();
        let u = frac(&f, &t, "e").unwrap();
        assert_eq!(FracSpec::of(&u), f);
        let f: FracSpec = serde_json::from_str(r#""x*t + y""#).unwrap();
        assert!(frac(&f, &t, "e").unwrap().den.is_one());
    }
}
