//! Per-task results, their production and their verification.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::model::{
    check_charts, prove_charts, sheaf_polys, ChartWitness, DStarWitness, GlueWitness, PhiWitness, RoundTripWitness,
    ThetaWitness, ToRelevantWitness, ToSheafWitness,
};
use super::problem::{
    frac, fracs, poly, polys, ChartIdealPayload, ColonPayload, ElementPayload, EliminatePayload, EmptyPayload,
    FracGensPayload, GensPayload, IdealPayload, IntersectPayload, MemberPayload, PhiPayload, PolyPayload,
    ProblemFile, SheafPayload, TaskKind, ThetaPayload,
};
use super::ring::{check_colon, Equality, Inclusion, NagataWitness, RelevanceStatus, RelevanceWitness, Ring};
use super::witness::{ensure, parse_all, same_list, show, Check, Combination, GroebnerWitness, Primitivity};
use super::Certificate;
use crate::blowup::{build_model, pullback, BlowupModel, IdealSheaf};
use crate::error::{Error, Result};
use crate::ideal::QuotientCtx;
use crate::nagata::TFrac;
use crate::oracle::{Oracle, OracleMultiplier, OracleVerdict};
use crate::poly::{BaseOrder, Order, Poly, VarTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisResult {
    pub basis: Vec<String>,
    pub witness: GroebnerWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberResult {
    pub member: bool,
    pub inclusion: Inclusion,
}

/// Generators read off an auxiliary or elimination basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivedResult {
    pub generators: Vec<String>,
    pub witness: GroebnerWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimitiveResult {
    pub primitive: bool,
    pub witness: Option<Primitivity>,
    /// Basis of the proper content ideal, for non-primitive polynomials.
    pub content: Option<GroebnerWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartsResult {
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackResult {
    pub sheaf: Vec<Vec<String>>,
    pub equalities: Vec<Equality>,
}

/// Contraction to the base ring: of a chart ideal to `D` (by elimination), or
/// of an ideal of `R(t)` to `R` (the content ideal, for relevant ideals).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractResult {
    pub status: RelevanceStatus,
    pub contraction: Vec<String>,
    pub relevance: Option<RelevanceWitness>,
    pub witness: Option<GroebnerWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaResult {
    pub passed: bool,
    pub entries: Vec<ThetaWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskResult {
    Gb(BasisResult),
    Member(MemberResult),
    Eliminate(DerivedResult),
    Colon(DerivedResult),
    Saturate(DerivedResult),
    Intersect(DerivedResult),
    Primitive(PrimitiveResult),
    NagataMember(NagataWitness),
    Relevant(RelevanceWitness),
    Charts(ChartsResult),
    Glue(GlueWitness),
    Pullback(PullbackResult),
    Contract(ContractResult),
    DstarMember(DStarWitness),
    Theta(ThetaResult),
    Phi(PhiWitness),
    ToRelevant(ToRelevantWitness),
    ToSheaf(ToSheafWitness),
    Roundtrip(RoundTripWitness),
}

fn kebab<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn yes_no(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}

impl TaskResult {
    pub fn task(&self) -> TaskKind {
        use TaskResult::*;
        match self {
            Gb(_) => TaskKind::Gb,
            Member(_) => TaskKind::Member,
            Eliminate(_) => TaskKind::Eliminate,
            Colon(_) => TaskKind::Colon,
            Saturate(_) => TaskKind::Saturate,
            Intersect(_) => TaskKind::Intersect,
            Primitive(_) => TaskKind::Primitive,
            NagataMember(_) => TaskKind::NagataMember,
            Relevant(_) => TaskKind::Relevant,
            Charts(_) => TaskKind::Charts,
            Glue(_) => TaskKind::Glue,
            Pullback(_) => TaskKind::Pullback,
            Contract(_) => TaskKind::Contract,
            DstarMember(_) => TaskKind::DstarMember,
            Theta(_) => TaskKind::Theta,
            Phi(_) => TaskKind::Phi,
            ToRelevant(_) => TaskKind::ToRelevant,
            ToSheaf(_) => TaskKind::ToSheaf,
            Roundtrip(_) => TaskKind::Roundtrip,
        }
    }

    /// The verdict as claimed by the result.
    pub fn verdict(&self) -> String {
        use TaskResult::*;
        match self {
            Gb(_) => "basis".into(),
            Member(r) => yes_no(r.member, "member", "non-member"),
            Eliminate(_) => "eliminated".into(),
            Colon(_) => "colon".into(),
            Saturate(_) => "saturation".into(),
            Intersect(_) => "intersection".into(),
            Primitive(r) => yes_no(r.primitive, "primitive", "not-primitive"),
            NagataMember(w) => yes_no(w.is_member(), "member", "non-member"),
            Relevant(w) => kebab(&w.status),
            Charts(_) => "charts".into(),
            Glue(w) => yes_no(w.glued, "glued", "not-glued"),
            Pullback(_) => "pullback".into(),
            Contract(r) => contract_verdict(r.status),
            DstarMember(w) => yes_no(w.member, "member", "non-member"),
            Theta(r) => yes_no(r.passed, "passed", "failed"),
            Phi(w) => yes_no(w.unit_everywhere, "unit-everywhere", "not-unit-everywhere"),
            ToRelevant(_) => "relevant-ideal".into(),
            ToSheaf(w) => kebab(&w.status),
            Roundtrip(w) => yes_no(w.equal, "identity", "mismatch"),
        }
    }
}

fn contract_verdict(s: RelevanceStatus) -> String {
    match s {
        RelevanceStatus::Relevant => "contraction".into(),
        other => kebab(&other),
    }
}

/// A multiplier found by the bounded search, as checkable identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleWitness {
    pub g: String,
    pub identity: Option<Combination>,
    pub primitivity: Primitivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheck {
    pub chart: Option<usize>,
    pub criterion: bool,
    pub oracle: bool,
    pub agrees: bool,
    pub witness: Option<OracleWitness>,
}

/// Brute-force cross-check of the criterion's verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub deg_bound: u32,
    pub checks: Vec<OracleCheck>,
    pub agrees: bool,
}

fn oracle_witness(m: &OracleMultiplier, u: &TFrac, ctx: &QuotientCtx) -> OracleWitness {
    let gens: Vec<Poly> = std::iter::once(u.den.clone()).chain(ctx.relations().iter().cloned()).collect();
    let cofs: Vec<Poly> = m.cofactors.iter().chain(&m.relation_cofactors).cloned().collect();
    OracleWitness {
        g: m.g.to_string(),
        identity: Some(Combination::new(&(&m.g * &u.num), &gens, &cofs)),
        primitivity: Primitivity {
            poly: m.g.to_string(),
            cofactors: show(&m.unit_cofactors.iter().chain(&m.unit_relation_cofactors).cloned().collect::<Vec<_>>()),
        },
    }
}

fn oracle_membership(oracle: &Oracle, u: &TFrac, ctx: &QuotientCtx, criterion: bool, chart: Option<usize>) -> Result<OracleCheck> {
    let verdict = oracle.nagata_member(u, ctx)?;
    let witness = match &verdict {
        OracleVerdict::Found(m) => Some(oracle_witness(m, u, ctx)),
        OracleVerdict::NotFound => None,
    };
    let found = witness.is_some();
    if found && !criterion {
        return Err(Error::Consistency(
            "the bounded search found a primitive multiplier the criterion refutes".into(),
        ));
    }
    Ok(OracleCheck {
        chart,
        criterion,
        oracle: found,
        agrees: found == criterion,
        witness,
    })
}

fn section(bound: u32, checks: Vec<OracleCheck>) -> OracleSection {
    OracleSection {
        deg_bound: bound,
        agrees: checks.iter().all(|c| c.agrees),
        checks,
    }
}

type Produced = (Vec<ChartWitness>, TaskResult, Option<OracleSection>);

fn index_of(table: &VarTable, name: &str, field: &str) -> Result<usize> {
    table
        .index_of(name)
        .ok_or_else(|| Error::schema(field, format!("unknown variable `{name}`")))
}

fn nonzero(f: &Poly, ctx: &QuotientCtx, field: &str) -> Result<()> {
    if ctx.is_zero(f) {
        Err(Error::schema(field, "must be nonzero in the ring"))
    } else {
        Ok(())
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn orderings(payload: &ThetaPayload, n: usize) -> Result<Vec<Vec<usize>>> {
    match &payload.orderings {
        None if n <= 6 => Ok(all_permutations(n)),
        None => Err(Error::schema("payload.orderings", "required for centers with more than 6 generators")),
        Some(list) => list
            .iter()
            .enumerate()
            .map(|(k, o)| {
                let mut p = Vec::with_capacity(o.len());
                let mut seen = vec![false; n];
                for &i in o {
                    if i == 0 || i > n || std::mem::replace(&mut seen[i - 1], true) || o.len() != n {
                        return Err(Error::schema(
                            format!("payload.orderings[{k}]"),
                            "not a permutation of 1..n (1-based)",
                        ));
                    }
                    p.push(i - 1);
                }
                if o.len() != n {
                    return Err(Error::schema(format!("payload.orderings[{k}]"), "wrong length"));
                }
                Ok(p)
            })
            .collect(),
    }
}

fn chart_number(k: usize, model: &BlowupModel, field: &str) -> Result<usize> {
    if k == 0 || k > model.len() {
        Err(Error::schema(field, format!("chart {k} does not exist (charts are 1..{})", model.len())))
    } else {
        Ok(k - 1)
    }
}

fn parse_sheaf(model: &BlowupModel, sheaf: &[Vec<String>]) -> Result<IdealSheaf> {
    if sheaf.len() != model.len() {
        return Err(Error::schema(
            "payload.sheaf",
            format!("{} chart ideals for {} charts", sheaf.len(), model.len()),
        ));
    }
    let per_chart = model
        .charts()
        .iter()
        .zip(sheaf)
        .enumerate()
        .map(|(e, (c, gens))| polys(gens, c.table(), &format!("payload.sheaf[{e}]")))
        .collect::<Result<Vec<_>>>()?;
    IdealSheaf::new(model, per_chart)
}

fn chart_elimination(model: &BlowupModel, chart: usize, ideal: &[Poly]) -> (Arc<VarTable>, Vec<Poly>, Order, Vec<usize>) {
    let c = &model.charts()[chart];
    let ring = Ring::of(c.ctx());
    let drop = c.y_indices();
    let order = Order::block(ring.table.len(), &drop, ring.base);
    (ring.table.clone(), ring.with_relations(ideal), order, drop)
}

pub(crate) fn run_task(problem: &ProblemFile, order: BaseOrder, oracle: Option<u32>) -> Result<Produced> {
    use TaskKind::*;
    let supports_oracle = matches!(problem.task, Primitive | NagataMember | Relevant | DstarMember);
    if oracle.is_some() && !supports_oracle {
        return Err(Error::usage(
            "--oracle applies to primitive, nagata-member, relevant and dstar-member",
        ));
    }
    let oracle = oracle.map(Oracle::new);
    if problem.model.is_some() && (problem.task.needs_model() || problem.task == Contract) {
        return run_model_task(problem, order, oracle.as_ref());
    }
    let ctx = problem.ctx(order)?;
    let ring = Ring::of(&ctx);
    let table = ring.table.clone();
    let mut checks = Vec::new();
    let result = match problem.task {
        Gb => {
            let p: GensPayload = problem.payload()?;
            let gens = polys(&p.gens, &table, "payload.gens")?;
            let witness = GroebnerWitness::compute(&table, &ring.with_relations(&gens), &ring.order());
            TaskResult::Gb(BasisResult {
                basis: witness.basis.clone(),
                witness,
            })
        }
        Member => {
            let p: MemberPayload = problem.payload()?;
            let f = poly(&p.poly, &table, "payload.poly")?;
            let gens = polys(&p.gens, &table, "payload.gens")?;
            let inclusion = Inclusion::prove(std::slice::from_ref(&f), &gens, &ctx)?;
            TaskResult::Member(MemberResult {
                member: inclusion.holds(),
                inclusion,
            })
        }
        Eliminate => {
            let p: EliminatePayload = problem.payload()?;
            let gens = polys(&p.gens, &table, "payload.gens")?;
            let drop = p
                .eliminate
                .iter()
                .map(|n| index_of(&table, n, "payload.eliminate"))
                .collect::<Result<Vec<_>>>()?;
            let ord = Order::block(table.len(), &drop, order);
            let witness = GroebnerWitness::compute(&table, &ring.with_relations(&gens), &ord);
            let vb = witness
                .check(&table, &ring.with_relations(&gens), &ord)
                .map_err(Error::Consistency)?;
            TaskResult::Eliminate(DerivedResult {
                generators: show(&vb.free_of(&drop, &table).map_err(Error::Consistency)?),
                witness,
            })
        }
        Colon | Saturate => {
            let p: ColonPayload = problem.payload()?;
            let gens = polys(&p.gens, &table, "payload.gens")?;
            let f = poly(&p.by, &table, "payload.by")?;
            nonzero(&f, &ctx, "payload.by")?;
            if problem.task == Colon {
                let (aux, all, ord) = ring.colon_system(&gens, &f);
                let witness = GroebnerWitness::compute(&aux, &all, &ord);
                let q = check_colon(&witness, &ring, &gens, &f).map_err(Error::Consistency)?;
                TaskResult::Colon(DerivedResult {
                    generators: show(&q),
                    witness,
                })
            } else {
                let (aux, all, ord) = ring.saturation_system(&gens, &f);
                let witness = GroebnerWitness::compute(&aux, &all, &ord);
                let vb = witness.check(&aux, &all, &ord).map_err(Error::Consistency)?;
                TaskResult::Saturate(DerivedResult {
                    generators: show(&vb.free_of(&[0], &table).map_err(Error::Consistency)?),
                    witness,
                })
            }
        }
        Intersect => {
            let p: IntersectPayload = problem.payload()?;
            let a = polys(&p.left, &table, "payload.left")?;
            let b = polys(&p.right, &table, "payload.right")?;
            let (aux, all, ord) = ring.intersection_system(&a, &b);
            let witness = GroebnerWitness::compute(&aux, &all, &ord);
            let vb = witness.check(&aux, &all, &ord).map_err(Error::Consistency)?;
            TaskResult::Intersect(DerivedResult {
                generators: show(&vb.free_of(&[0], &table).map_err(Error::Consistency)?),
                witness,
            })
        }
        Primitive => {
            let p: PolyPayload = problem.payload()?;
            let f = poly(&p.poly, &table, "payload.poly")?;
            let witness = Primitivity::prove(&f, &ctx)?;
            let content = match witness {
                Some(_) => None,
                None => {
                    let mut gens = crate::ideal::content_ideal(&f, &ctx)?;
                    gens.extend(ring.relations.iter().cloned());
                    Some(GroebnerWitness::compute(&table, &gens, &ring.order()))
                }
            };
            if let Some(o) = &oracle {
                let found = o.unit_certificate(&f, &ctx)?;
                let criterion = witness.is_some();
                if found.is_some() && !criterion {
                    return Err(Error::Consistency("bounded search shows a non-primitive polynomial primitive".into()));
                }
                checks.push(OracleCheck {
                    chart: None,
                    criterion,
                    oracle: found.is_some(),
                    agrees: found.is_some() == criterion,
                    witness: found.map(|(a, s)| OracleWitness {
                        g: f.to_string(),
                        identity: None,
                        primitivity: Primitivity {
                            poly: f.to_string(),
                            cofactors: show(&a.into_iter().chain(s).collect::<Vec<_>>()),
                        },
                    }),
                });
            }
            TaskResult::Primitive(PrimitiveResult {
                primitive: witness.is_some(),
                witness,
                content,
            })
        }
        NagataMember => {
            let p: ElementPayload = problem.payload()?;
            let u = frac(&p.element, &table, "payload.element")?;
            nonzero(&u.den, &ctx, "payload.element.den")?;
            let w = NagataWitness::prove(&u, &ctx)?;
            if let Some(o) = &oracle {
                checks.push(oracle_membership(o, &u, &ctx, w.is_member(), None)?);
            }
            TaskResult::NagataMember(w)
        }
        Relevant => {
            let p: FracGensPayload = problem.payload()?;
            let gens = fracs(&p.gens, &table, "payload.gens")?;
            for (i, u) in gens.iter().enumerate() {
                nonzero(&u.den, &ctx, &format!("payload.gens[{i}].den"))?;
            }
            let w = RelevanceWitness::prove(&gens, &ctx)?;
            if let Some(o) = &oracle {
                let criterion = w.status == RelevanceStatus::Relevant;
                let found = o.is_relevant(&gens, &ctx).map(|r| r.relevant).unwrap_or(false);
                checks.push(OracleCheck {
                    chart: None,
                    criterion,
                    oracle: found,
                    agrees: found == criterion,
                    witness: None,
                });
            }
            TaskResult::Relevant(w)
        }
        Contract => {
            let p: FracGensPayload = problem.payload()?;
            let gens = fracs(&p.gens, &table, "payload.gens")?;
            let relevance = RelevanceWitness::prove(&gens, &ctx)?;
            let (contraction, witness) = if relevance.status == RelevanceStatus::Relevant {
                let content = parse_all(&relevance.content, &table).map_err(Error::Consistency)?;
                let w = GroebnerWitness::compute(&table, &ring.with_relations(&content), &ring.order());
                (w.basis.clone(), Some(w))
            } else {
                (Vec::new(), None)
            };
            TaskResult::Contract(ContractResult {
                status: relevance.status,
                contraction,
                relevance: Some(relevance),
                witness,
            })
        }
        _ => unreachable!("model tasks are dispatched above"),
    };
    Ok((Vec::new(), result, oracle.map(|o| section(o.bound, checks))))
}

fn run_model_task(problem: &ProblemFile, order: BaseOrder, oracle: Option<&Oracle>) -> Result<Produced> {
    use TaskKind::*;
    let ground = problem.table()?;
    let center = problem.center(&ground)?;
    let model = build_model(&ground, center, order)?;
    let ground = model.ground().clone();
    let charts = prove_charts(&model)?;
    let mut checks = Vec::new();
    let result = match problem.task {
        Charts => {
            let _: EmptyPayload = problem.payload()?;
            TaskResult::Charts(ChartsResult { count: model.len() })
        }
        Glue => {
            let p: SheafPayload = problem.payload()?;
            TaskResult::Glue(GlueWitness::prove(&model, &parse_sheaf(&model, &p.sheaf)?)?)
        }
        Pullback => {
            let p: IdealPayload = problem.payload()?;
            let ideal = polys(&p.ideal, &ground, "payload.ideal")?;
            if ideal.iter().any(|f| f.t_degree() > 0) {
                return Err(Error::schema("payload.ideal", "generators must not involve t"));
            }
            let sheaf = pullback(&model, &ideal)?;
            let equalities = model
                .charts()
                .iter()
                .map(|c| {
                    let lifted = ideal.iter().map(|f| c.lift(f)).collect::<Result<Vec<_>>>()?;
                    Equality::prove(&sheaf.per_chart[c.index()], &lifted, c.ctx())
                })
                .collect::<Result<Vec<_>>>()?;
            TaskResult::Pullback(PullbackResult {
                sheaf: sheaf.per_chart.iter().map(|j| show(j)).collect(),
                equalities,
            })
        }
        Contract => {
            let p: ChartIdealPayload = problem.payload()?;
            let e = chart_number(p.chart, &model, "payload.chart")?;
            let ideal = polys(&p.ideal, model.charts()[e].table(), "payload.ideal")?;
            let (table, all, ord, drop) = chart_elimination(&model, e, &ideal);
            let witness = GroebnerWitness::compute(&table, &all, &ord);
            let vb = witness.check(&table, &all, &ord).map_err(Error::Consistency)?;
            TaskResult::Contract(ContractResult {
                status: RelevanceStatus::Relevant,
                contraction: show(&vb.free_of(&drop, &ground).map_err(Error::Consistency)?),
                relevance: None,
                witness: Some(witness),
            })
        }
        DstarMember => {
            let p: ElementPayload = problem.payload()?;
            let u = frac(&p.element, &ground, "payload.element")?;
            let w = DStarWitness::prove(&model, &u)?;
            if let Some(o) = oracle {
                for (c, nw) in model.charts().iter().zip(&w.per_chart) {
                    checks.push(oracle_membership(o, &c.lift_frac(&u)?, c.ctx(), nw.is_member(), Some(c.index() + 1))?);
                }
            }
            TaskResult::DstarMember(w)
        }
        Theta => {
            let p: ThetaPayload = problem.payload()?;
            let entries = orderings(&p, model.len())?
                .iter()
                .map(|perm| ThetaWitness::prove(&model, perm))
                .collect::<Result<Vec<_>>>()?;
            TaskResult::Theta(ThetaResult {
                passed: entries.iter().all(|e| e.passed),
                entries,
            })
        }
        Phi => {
            let p: PhiPayload = problem.payload()?;
            let alphas = fracs(&p.alphas, &ground, "payload.alphas")?;
            let unit_charts = p
                .unit_charts
                .iter()
                .map(|&k| chart_number(k, &model, "payload.unit_charts"))
                .collect::<Result<Vec<_>>>()?;
            TaskResult::Phi(PhiWitness::prove(&model, &alphas, &unit_charts)?)
        }
        ToRelevant => {
            let p: SheafPayload = problem.payload()?;
            TaskResult::ToRelevant(ToRelevantWitness::prove(&model, &parse_sheaf(&model, &p.sheaf)?)?)
        }
        ToSheaf => {
            let p: FracGensPayload = problem.payload()?;
            let gens = fracs(&p.gens, &ground, "payload.gens")?;
            TaskResult::ToSheaf(ToSheafWitness::prove(&model, &gens)?)
        }
        Roundtrip => {
            let p: SheafPayload = problem.payload()?;
            TaskResult::Roundtrip(RoundTripWitness::prove(&model, &parse_sheaf(&model, &p.sheaf)?)?)
        }
        _ => return Err(Error::schema("model", format!("task `{}` takes no model", problem.task.name()))),
    };
    Ok((charts, result, oracle.map(|o| section(o.bound, checks))))
}

fn check_oracle(section: &Option<OracleSection>, expected: &[(Option<usize>, bool, Option<&TFrac>, &Ring)]) -> Check {
    let Some(s) = section else { return Ok(()) };
    ensure(s.checks.len() == expected.len(), || "oracle section has the wrong number of checks".into())?;
    for (c, (chart, criterion, u, ring)) in s.checks.iter().zip(expected) {
        let at = |m: String| format!("oracle check{}: {m}", chart.map(|k| format!(" in chart {k}")).unwrap_or_default());
        ensure(c.chart == *chart, || at("chart is misstated".into()))?;
        ensure(c.criterion == *criterion, || at("criterion verdict is misstated".into()))?;
        ensure(c.agrees == (c.criterion == c.oracle), || at("agreement flag is wrong".into()))?;
        match (&c.witness, c.oracle) {
            (Some(w), true) => {
                let g = super::witness::parse(&w.g, &ring.table).map_err(at)?;
                w.primitivity.check(&ring.table, &g, &ring.relations).map_err(at)?;
                if let Some(u) = u {
                    let id = w.identity.as_ref().ok_or_else(|| at("missing identity".into()))?;
                    let gens: Vec<Poly> = std::iter::once(u.den.clone()).chain(ring.relations.iter().cloned()).collect();
                    id.check(&ring.table, &(&g * &u.num), &gens).map_err(at)?;
                }
            }
            (None, false) => {}
            (None, true) => {
                // Relevance verdicts of the search carry no witness.
                ensure(u.is_none(), || at("positive search verdict without witness".into()))?;
            }
            (Some(_), false) => return Err(at("witness attached to a negative search verdict".into())),
        }
    }
    ensure(s.agrees == s.checks.iter().all(|c| c.agrees), || "oracle agreement flag is wrong".into())
}

pub(crate) fn verify_task(cert: &Certificate) -> Check<String> {
    use TaskKind::*;
    let problem = &cert.problem;
    ensure(cert.result.task() == problem.task, || "result does not belong to the task".into())?;
    let order = cert.order;
    if problem.model.is_some() && (problem.task.needs_model() || problem.task == Contract) {
        return verify_model_task(cert);
    }
    ensure(cert.charts.is_empty(), || "chart presentations without a model".into())?;
    let ctx = problem.ctx(order)?;
    let ring = Ring::of(&ctx);
    let table = ring.table.clone();
    let verdict = match &cert.result {
        TaskResult::Gb(r) => {
            let p: GensPayload = problem.payload()?;
            let gens = ring.with_relations(&parse_all(&p.gens, &table)?);
            let vb = r.witness.check(&table, &gens, &ring.order())?;
            ensure(same_list(&vb.basis, &r.basis, &table)?, || "stated basis differs from the witness".into())?;
            "basis".into()
        }
        TaskResult::Member(r) => {
            let p: MemberPayload = problem.payload()?;
            let f = poly(&p.poly, &table, "payload.poly")?;
            let gens = parse_all(&p.gens, &table)?;
            let m = r.inclusion.check(&ring, std::slice::from_ref(&f), &gens)?;
            ensure(m == r.member, || "membership flag is misstated".into())?;
            yes_no(m, "member", "non-member")
        }
        TaskResult::Eliminate(r) => {
            let p: EliminatePayload = problem.payload()?;
            let gens = ring.with_relations(&parse_all(&p.gens, &table)?);
            let drop = p
                .eliminate
                .iter()
                .map(|n| index_of(&table, n, "payload.eliminate"))
                .collect::<Result<Vec<_>>>()?;
            let vb = r.witness.check(&table, &gens, &Order::block(table.len(), &drop, order))?;
            let kept = vb.free_of(&drop, &table)?;
            ensure(same_list(&kept, &r.generators, &table)?, || "stated generators differ from the basis".into())?;
            "eliminated".into()
        }
        TaskResult::Colon(r) => {
            let p: ColonPayload = problem.payload()?;
            let gens = parse_all(&p.gens, &table)?;
            let f = poly(&p.by, &table, "payload.by")?;
            let q = check_colon(&r.witness, &ring, &gens, &f)?;
            ensure(same_list(&q, &r.generators, &table)?, || "stated generators differ from the basis".into())?;
            "colon".into()
        }
        TaskResult::Saturate(r) | TaskResult::Intersect(r) => {
            let (aux, all, ord) = if problem.task == Saturate {
                let p: ColonPayload = problem.payload()?;
                let f = poly(&p.by, &table, "payload.by")?;
                ensure(!f.is_zero(), || "saturation by zero".into())?;
                ring.saturation_system(&parse_all(&p.gens, &table)?, &f)
            } else {
                let p: IntersectPayload = problem.payload()?;
                ring.intersection_system(&parse_all(&p.left, &table)?, &parse_all(&p.right, &table)?)
            };
            let vb = r.witness.check(&aux, &all, &ord)?;
            let g = vb.free_of(&[0], &table)?;
            ensure(same_list(&g, &r.generators, &table)?, || "stated generators differ from the basis".into())?;
            cert.result.verdict()
        }
        TaskResult::Primitive(r) => {
            let p: PolyPayload = problem.payload()?;
            let f = poly(&p.poly, &table, "payload.poly")?;
            let prim = match (&r.witness, &r.content) {
                (Some(w), None) => {
                    w.check(&table, &f, &ring.relations)?;
                    true
                }
                (None, Some(c)) => {
                    let mut gens: Vec<Poly> = f.coeffs_in_t()?.into_iter().map(|(_, c)| c).collect();
                    gens.extend(ring.relations.iter().cloned());
                    let vb = c.check(&table, &gens, &ring.order())?;
                    ensure(!vb.is_unit(), || "content ideal is the unit ideal".into())?;
                    false
                }
                _ => return Err("exactly one of witness and content is required".into()),
            };
            ensure(prim == r.primitive, || "primitivity flag is misstated".into())?;
            check_oracle(&cert.oracle, &[(None, prim, None, &ring)])?;
            yes_no(prim, "primitive", "not-primitive")
        }
        TaskResult::NagataMember(w) => {
            let p: ElementPayload = problem.payload()?;
            let u = frac(&p.element, &table, "payload.element")?;
            let m = w.check(&ring, &u)?.is_some();
            check_oracle(&cert.oracle, &[(None, m, Some(&u), &ring)])?;
            yes_no(m, "member", "non-member")
        }
        TaskResult::Relevant(w) => {
            let p: FracGensPayload = problem.payload()?;
            let gens = fracs(&p.gens, &table, "payload.gens")?;
            let r = w.check(&ring, &gens)?;
            check_oracle(&cert.oracle, &[(None, r.status == RelevanceStatus::Relevant, None, &ring)])?;
            kebab(&r.status)
        }
        TaskResult::Contract(r) => {
            let p: FracGensPayload = problem.payload()?;
            let gens = fracs(&p.gens, &table, "payload.gens")?;
            let rel = r.relevance.as_ref().ok_or("missing relevance witness")?.check(&ring, &gens)?;
            ensure(rel.status == r.status, || "status is misstated".into())?;
            if rel.status == RelevanceStatus::Relevant {
                let w = r.witness.as_ref().ok_or("missing contraction basis")?;
                let vb = w.check(&table, &ring.with_relations(&rel.content), &ring.order())?;
                ensure(same_list(&vb.basis, &r.contraction, &table)?, || "contraction is misstated".into())?;
            }
            contract_verdict(rel.status)
        }
        _ => return Err("model task without a model".into()),
    };
    if !matches!(problem.task, Primitive | NagataMember | Relevant) {
        ensure(cert.oracle.is_none(), || "oracle section on a task without one".into())?;
    }
    Ok(verdict)
}

fn verify_model_task(cert: &Certificate) -> Check<String> {
    let problem = &cert.problem;
    let ground = problem.table()?.with_t();
    let center = problem.center(&ground)?;
    let (model, rings) = check_charts(&ground, &center, cert.order, &cert.charts)?;
    let ground = model.ground().clone();
    if problem.task != TaskKind::DstarMember {
        ensure(cert.oracle.is_none(), || "oracle section on a task without one".into())?;
    }
    Ok(match &cert.result {
        TaskResult::Charts(r) => {
            ensure(r.count == model.len(), || "chart count is misstated".into())?;
            "charts".into()
        }
        TaskResult::Glue(w) => {
            let p: SheafPayload = problem.payload()?;
            let sheaf = sheaf_polys(&model, &p.sheaf)?;
            yes_no(w.check(&model, &rings, &sheaf)?, "glued", "not-glued")
        }
        TaskResult::Pullback(r) => {
            let p: IdealPayload = problem.payload()?;
            let ideal = parse_all(&p.ideal, &ground)?;
            let sheaf = sheaf_polys(&model, &r.sheaf)?;
            ensure(r.equalities.len() == model.len(), || "one equality per chart".into())?;
            for (e, c) in model.charts().iter().enumerate() {
                let lifted = ideal.iter().map(|f| c.lift(f)).collect::<Result<Vec<_>>>()?;
                ensure(r.equalities[e].check(&rings[e], &sheaf[e], &lifted)?, || {
                    format!("chart {}: stated ideal is not the extension", e + 1)
                })?;
            }
            "pullback".into()
        }
        TaskResult::Contract(r) => {
            let p: ChartIdealPayload = problem.payload()?;
            let e = chart_number(p.chart, &model, "payload.chart")?;
            let ideal = parse_all(&p.ideal, model.charts()[e].table())?;
            let (table, all, ord, drop) = chart_elimination(&model, e, &ideal);
            let w = r.witness.as_ref().ok_or("missing elimination basis")?;
            let vb = w.check(&table, &all, &ord)?;
            let kept = vb.free_of(&drop, &ground)?;
            ensure(same_list(&kept, &r.contraction, &ground)?, || "contraction is misstated".into())?;
            ensure(r.status == RelevanceStatus::Relevant && r.relevance.is_none(), || "unexpected status".into())?;
            "contraction".into()
        }
        TaskResult::DstarMember(w) => {
            let p: ElementPayload = problem.payload()?;
            let u = frac(&p.element, &ground, "payload.element")?;
            let m = w.check(&model, &rings, &u)?;
            let mut expected = Vec::new();
            let lifted: Vec<TFrac> = model
                .charts()
                .iter()
                .map(|c| {
                    Ok(TFrac {
                        num: c.lift(&u.num)?,
                        den: c.lift(&u.den)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            for (e, (nw, ring)) in w.per_chart.iter().zip(&rings).enumerate() {
                expected.push((Some(e + 1), nw.is_member(), Some(&lifted[e]), ring));
            }
            check_oracle(&cert.oracle, &expected)?;
            yes_no(m.is_some(), "member", "non-member")
        }
        TaskResult::Theta(r) => {
            let p: ThetaPayload = problem.payload()?;
            let perms = orderings(&p, model.len())?;
            ensure(r.entries.len() == perms.len(), || "one entry per ordering".into())?;
            let mut passed = true;
            for (w, perm) in r.entries.iter().zip(&perms) {
                passed &= w.check(&model, &rings, perm)?;
            }
            ensure(passed == r.passed, || "overall theta verdict is misstated".into())?;
            yes_no(passed, "passed", "failed")
        }
        TaskResult::Phi(w) => {
            let p: PhiPayload = problem.payload()?;
            let alphas = fracs(&p.alphas, &ground, "payload.alphas")?;
            yes_no(w.check(&model, &rings, &alphas)?, "unit-everywhere", "not-unit-everywhere")
        }
        TaskResult::ToRelevant(w) => {
            let p: SheafPayload = problem.payload()?;
            w.check(&model, &rings, &sheaf_polys(&model, &p.sheaf)?)?;
            "relevant-ideal".into()
        }
        TaskResult::ToSheaf(w) => {
            let p: FracGensPayload = problem.payload()?;
            let gens = fracs(&p.gens, &ground, "payload.gens")?;
            w.check(&model, &rings, &gens)?;
            kebab(&w.status)
        }
        TaskResult::Roundtrip(w) => {
            let p: SheafPayload = problem.payload()?;
            yes_no(w.check(&model, &rings, &sheaf_polys(&model, &p.sheaf)?)?, "identity", "mismatch")
        }
        _ => return Err("task takes no model".into()),
    })
}
