//! Witnesses for questions posed on a blowup model.

use serde::{Deserialize, Serialize};

use super::problem::FracSpec;
use super::ring::{Equality, NagataWitness, Relevance, RelevanceStatus, RelevanceWitness, Ring};
use super::witness::{ensure, parse, parse_all, same_list, show, Check, Combination, GroebnerWitness, Primitivity};
use crate::blowup::{
    chart_table, glue_check, model_from_presentation, rees_generators, transition, BlowupModel, IdealSheaf,
};
use crate::dstar::{dstar_member, phi_survival, theta as theta_poly, verify_theta};
use crate::error::{Error, Result};
use crate::nagata::TFrac;
use crate::poly::{BaseOrder, Mono, Poly, Rat, VarTable};

use num_traits::One;
use rayon::prelude::*;
use std::sync::Arc;

/// Presentation of one chart, with the saturation that produced its relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartWitness {
    pub chart: usize,
    pub variables: Vec<String>,
    pub relations: Vec<String>,
    pub saturation: Option<GroebnerWitness>,
}

fn free_ring(table: &Arc<VarTable>, base: BaseOrder) -> Ring {
    Ring {
        table: table.clone(),
        relations: Vec::new(),
        base,
    }
}

pub fn prove_charts(model: &BlowupModel) -> Result<Vec<ChartWitness>> {
    let xs = model.ground().without_t().names().to_vec();
    model
        .charts()
        .par_iter()
        .map(|c| {
            let e = c.index();
            let (table, slots) = chart_table(&xs, model.len(), e)?;
            let rees = rees_generators(model.center(), &table, &slots, e)?;
            let saturation = if rees.is_empty() {
                None
            } else {
                let ring = free_ring(&table, c.ctx().base_order());
                let (aux, gens, order) = ring.saturation_system(&rees, &model.center()[e].embed(&table)?);
                Some(GroebnerWitness::compute(&aux, &gens, &order))
            };
            Ok(ChartWitness {
                chart: e + 1,
                variables: table.names().to_vec(),
                relations: show(c.relations()),
                saturation,
            })
        })
        .collect()
}

/// Check chart presentations against the center and rebuild the model from them.
pub fn check_charts(
    ground: &Arc<VarTable>,
    center: &[Poly],
    base: BaseOrder,
    charts: &[ChartWitness],
) -> Check<(BlowupModel, Vec<Ring>)> {
    let n = center.len();
    ensure(charts.len() == n, || format!("{} chart presentations for {n} center generators", charts.len()))?;
    let xs = ground.without_t().names().to_vec();
    let mut relations = Vec::with_capacity(n);
    for (e, cw) in charts.iter().enumerate() {
        let at = |m: String| format!("chart {}: {m}", e + 1);
        ensure(cw.chart == e + 1, || at("charts are out of order".into()))?;
        let (table, slots) = chart_table(&xs, n, e).map_err(|x| at(x.to_string()))?;
        ensure(cw.variables == table.names(), || at("unexpected chart variables".into()))?;
        let rees = rees_generators(center, &table, &slots, e).map_err(|x| at(x.to_string()))?;
        let rel = match (&cw.saturation, rees.is_empty()) {
            (None, true) => Vec::new(),
            (Some(w), false) => {
                let ring = free_ring(&table, base);
                let ae = center[e].embed(&table).map_err(|x| at(x.to_string()))?;
                let (aux, gens, order) = ring.saturation_system(&rees, &ae);
                w.check(&aux, &gens, &order).map_err(at)?.free_of(&[0], &table).map_err(at)?
            }
            _ => return Err(at("saturation witness missing or superfluous".into())),
        };
        ensure(same_list(&rel, &cw.relations, &table).map_err(at)?, || {
            at("stated relations differ from the saturation".into())
        })?;
        relations.push(rel);
    }
    let model = model_from_presentation(ground, center.to_vec(), relations, base).map_err(|e| e.to_string())?;
    let rings = model.charts().iter().map(|c| Ring::of(c.ctx())).collect();
    Ok((model, rings))
}

fn lift_all(model: &BlowupModel, u: &TFrac) -> Check<Vec<TFrac>> {
    model
        .charts()
        .iter()
        .map(|c| {
            Ok(TFrac {
                num: c.lift(&u.num).map_err(|e| e.to_string())?,
                den: c.lift(&u.den).map_err(|e| e.to_string())?,
            })
        })
        .collect()
}

pub fn sheaf_polys(model: &BlowupModel, sheaf: &[Vec<String>]) -> Check<Vec<Vec<Poly>>> {
    ensure(sheaf.len() == model.len(), || format!("sheaf has {} chart ideals, model has {}", sheaf.len(), model.len()))?;
    model
        .charts()
        .iter()
        .zip(sheaf)
        .map(|(c, gens)| parse_all(gens, c.table()))
        .collect()
}

/// Chartwise membership of an element of `K(t)` in `D*`. Chart numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DStarWitness {
    pub member: bool,
    pub failing_chart: Option<usize>,
    pub per_chart: Vec<NagataWitness>,
}

impl DStarWitness {
    pub fn prove(model: &BlowupModel, u: &TFrac) -> Result<DStarWitness> {
        let m = dstar_member(model, u)?;
        let per_chart = model
            .charts()
            .par_iter()
            .zip(m.per_chart())
            .map(|(c, cert)| NagataWitness::from_cert(cert, &c.lift_frac(u)?, c.ctx()))
            .collect::<Result<Vec<_>>>()?;
        let failing_chart = per_chart.iter().position(|w| !w.is_member()).map(|i| i + 1);
        Ok(DStarWitness {
            member: failing_chart.is_none(),
            failing_chart,
            per_chart,
        })
    }

    /// Check against `u`; returns `(f_ε, g_ε)` per chart for members.
    pub fn check(&self, model: &BlowupModel, rings: &[Ring], u: &TFrac) -> Check<Option<Vec<(Poly, Poly)>>> {
        let lifted = lift_all(model, u)?;
        ensure(self.per_chart.len() == rings.len(), || "one membership witness per chart".into())?;
        let mut fg = Vec::new();
        let mut failing = None;
        for (e, ((w, ring), v)) in self.per_chart.iter().zip(rings).zip(&lifted).enumerate() {
            match w.check(ring, v).map_err(|m| format!("chart {}: {m}", e + 1))? {
                Some(p) => fg.push(p),
                None => {
                    failing.get_or_insert(e + 1);
                }
            }
        }
        ensure(failing == self.failing_chart, || "failing chart is misstated".into())?;
        ensure(self.member == failing.is_none(), || "membership verdict is misstated".into())?;
        Ok(failing.is_none().then_some(fg))
    }
}

/// One overlap membership: generator `generator` of `J_target` moved to
/// chart `source` has numerator `num`, and `y_target^power · num ∈ J_source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapWitness {
    pub generator: usize,
    pub num: String,
    pub power: Option<u32>,
    pub combination: Option<Combination>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairWitness {
    pub source: usize,
    pub target: usize,
    pub checks: Vec<OverlapWitness>,
    /// Basis of the saturation `(J_source + P_source) : y_target^∞`, present
    /// when some check fails.
    pub saturation: Option<GroebnerWitness>,
}

/// The gluing test over all ordered pairs of charts (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlueWitness {
    pub glued: bool,
    pub failing_pair: Option<(usize, usize)>,
    pub pairs: Vec<PairWitness>,
}

impl GlueWitness {
    pub fn prove(model: &BlowupModel, sheaf: &IdealSheaf) -> Result<GlueWitness> {
        let report = glue_check(model, sheaf)?;
        let n = model.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
            .collect();
        let pairs = pairs
            .par_iter()
            .map(|&(s, t)| {
                let chart = &model.charts()[s];
                let js = &sheaf.per_chart[s];
                let y = chart.y(t);
                let mut checks = Vec::new();
                let mut failed = false;
                for c in report.checks.iter().filter(|c| c.source == s && c.target == t) {
                    let combination = match c.power {
                        Some(m) => Some(Combination::must(&(&c.num * &y.pow(m)), js, chart.ctx())?),
                        None => {
                            failed = true;
                            None
                        }
                    };
                    checks.push(OverlapWitness {
                        generator: c.generator + 1,
                        num: c.num.to_string(),
                        power: c.power,
                        combination,
                    });
                }
                let saturation = if failed {
                    let (aux, gens, order) = Ring::of(chart.ctx()).saturation_system(js, &y);
                    Some(GroebnerWitness::compute(&aux, &gens, &order))
                } else {
                    None
                };
                Ok(PairWitness {
                    source: s + 1,
                    target: t + 1,
                    checks,
                    saturation,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GlueWitness {
            glued: report.glued,
            failing_pair: report.failing_pair.map(|(s, t)| (s + 1, t + 1)),
            pairs,
        })
    }

    /// Check against the sheaf; returns whether it glues.
    pub fn check(&self, model: &BlowupModel, rings: &[Ring], sheaf: &[Vec<Poly>]) -> Check<bool> {
        let n = model.len();
        let expected: Vec<(usize, usize)> = (0..n)
            .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
            .collect();
        ensure(self.pairs.len() == expected.len(), || "one entry per ordered pair of charts".into())?;
        let mut failing = None;
        for (pw, &(s, t)) in self.pairs.iter().zip(&expected) {
            let at = |m: String| format!("overlap ({}, {}): {m}", s + 1, t + 1);
            ensure(pw.source == s + 1 && pw.target == t + 1, || at("pairs are out of order".into()))?;
            ensure(pw.checks.len() == sheaf[t].len(), || at("one check per generator".into()))?;
            let ring = &rings[s];
            let y = model.charts()[s].y(t);
            let mut sat = None;
            if let Some(w) = &pw.saturation {
                let (aux, gens, order) = ring.saturation_system(&sheaf[s], &y);
                sat = Some((aux.clone(), w.check(&aux, &gens, &order).map_err(at)?));
            }
            for (i, (c, g)) in pw.checks.iter().zip(&sheaf[t]).enumerate() {
                ensure(c.generator == i + 1, || at("checks are out of order".into()))?;
                let num = transition(model, t, s, g).map_err(|e| at(e.to_string()))?.num;
                ensure(parse(&c.num, &ring.table).map_err(at)? == num, || {
                    at(format!("transported generator {} is misstated", i + 1))
                })?;
                match (c.power, &c.combination) {
                    (Some(m), Some(comb)) => {
                        comb.check(&ring.table, &(&num * &y.pow(m)), &ring.with_relations(&sheaf[s]))
                            .map_err(at)?;
                    }
                    (None, None) => {
                        let (aux, vb) = sat.as_ref().ok_or_else(|| at("refuted check without saturation basis".into()))?;
                        let lifted = num.embed(aux).map_err(|e| at(e.to_string()))?;
                        ensure(!vb.normal_form(&lifted).is_zero(), || {
                            at(format!("generator {} does lie in the saturation", i + 1))
                        })?;
                        failing.get_or_insert((s + 1, t + 1));
                    }
                    _ => return Err(at("power and combination must come together".into())),
                }
            }
        }
        ensure(failing == self.failing_pair, || "failing pair is misstated".into())?;
        ensure(self.glued == failing.is_none(), || "glue verdict is misstated".into())?;
        Ok(self.glued)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Localization {
    /// `a_ε q − θ ∈ P_ε` with `q` primitive.
    Primitive {
        q: String,
        identity: Combination,
        primitivity: Primitivity,
    },
    NotPrimitive { q: String, content: GroebnerWitness },
}

/// `θ` for one ordering of the center (1-based positions).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaWitness {
    pub ordering: Vec<usize>,
    pub theta: String,
    pub quotients: Vec<DStarWitness>,
    pub localizations: Vec<Localization>,
    pub passed: bool,
}

fn t_mono(table: &Arc<VarTable>, e: u32) -> Mono {
    Mono::var(table.len(), table.len() - 1, e)
}

fn theta_q(model: &BlowupModel, chart: usize, perm: &[usize]) -> Poly {
    let c = &model.charts()[chart];
    perm.iter().enumerate().fold(Poly::zero(c.table()), |acc, (i, &k)| {
        &acc + &c.y(k).mul_term(&t_mono(c.table(), i as u32), &Rat::one())
    })
}

fn content_basis(p: &Poly, ring: &Ring) -> Result<GroebnerWitness> {
    let mut gens: Vec<Poly> = p.coeffs_in_t()?.into_iter().map(|(_, c)| c).collect();
    gens.extend(ring.relations.iter().cloned());
    Ok(GroebnerWitness::compute(&ring.table, &gens, &ring.order()))
}

impl ThetaWitness {
    pub fn prove(model: &BlowupModel, perm: &[usize]) -> Result<ThetaWitness> {
        let report = verify_theta(model, perm)?;
        let th = report.theta.clone();
        let quotients = model
            .center()
            .iter()
            .map(|a| {
                DStarWitness::prove(
                    model,
                    &TFrac {
                        num: a.clone(),
                        den: th.clone(),
                    },
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let localizations = model
            .charts()
            .iter()
            .map(|c| {
                let q = theta_q(model, c.index(), perm);
                let diff = &(&c.lift(&model.center()[c.index()])? * &q) - &c.lift(&th)?;
                Ok(match Primitivity::prove(&q, c.ctx())? {
                    Some(primitivity) => Localization::Primitive {
                        q: q.to_string(),
                        identity: Combination::must(&diff, &[], c.ctx())?,
                        primitivity,
                    },
                    None => Localization::NotPrimitive {
                        q: q.to_string(),
                        content: content_basis(&q, &Ring::of(c.ctx()))?,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let passed = quotients.iter().all(|q| q.member)
            && localizations.iter().all(|l| matches!(l, Localization::Primitive { .. }));
        if passed != report.passed {
            return Err(Error::Consistency("theta witnesses disagree with the report".into()));
        }
        Ok(ThetaWitness {
            ordering: perm.iter().map(|i| i + 1).collect(),
            theta: th.to_string(),
            quotients,
            localizations,
            passed,
        })
    }

    pub fn check(&self, model: &BlowupModel, rings: &[Ring], perm: &[usize]) -> Check<bool> {
        ensure(self.ordering == perm.iter().map(|i| i + 1).collect::<Vec<_>>(), || "ordering is misstated".into())?;
        let th = theta_poly(model, perm).map_err(|e| e.to_string())?;
        ensure(parse(&self.theta, model.ground())? == th, || "theta is misstated".into())?;
        ensure(self.quotients.len() == model.center().len(), || "one quotient per center generator".into())?;
        let mut passed = true;
        for (i, (w, a)) in self.quotients.iter().zip(model.center()).enumerate() {
            let u = TFrac {
                num: a.clone(),
                den: th.clone(),
            };
            let ok = w.check(model, rings, &u).map_err(|m| format!("quotient {}: {m}", i + 1))?;
            passed &= ok.is_some();
        }
        ensure(self.localizations.len() == model.len(), || "one localization per chart".into())?;
        for (e, (l, ring)) in self.localizations.iter().zip(rings).enumerate() {
            let at = |m: String| format!("localization in chart {}: {m}", e + 1);
            let q = theta_q(model, e, perm);
            match l {
                Localization::Primitive {
                    q: qs,
                    identity,
                    primitivity,
                } => {
                    ensure(parse(qs, &ring.table).map_err(at)? == q, || at("q is misstated".into()))?;
                    let c = &model.charts()[e];
                    let diff = &(&c.lift(&model.center()[e]).map_err(|x| at(x.to_string()))? * &q)
                        - &c.lift(&th).map_err(|x| at(x.to_string()))?;
                    identity.check(&ring.table, &diff, &ring.relations).map_err(at)?;
                    primitivity.check(&ring.table, &q, &ring.relations).map_err(at)?;
                }
                Localization::NotPrimitive { q: qs, content } => {
                    ensure(parse(qs, &ring.table).map_err(at)? == q, || at("q is misstated".into()))?;
                    let mut gens: Vec<Poly> =
                        q.coeffs_in_t().map_err(|x| at(x.to_string()))?.into_iter().map(|(_, c)| c).collect();
                    gens.extend(ring.relations.iter().cloned());
                    let vb = content.check(&ring.table, &gens, &ring.order()).map_err(at)?;
                    ensure(!vb.is_unit(), || at("content of q is the unit ideal".into()))?;
                    passed = false;
                }
            }
        }
        ensure(passed == self.passed, || "theta verdict is misstated".into())?;
        Ok(passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "kebab-case", deny_unknown_fields)]
pub enum UnitProof {
    /// Numerator and denominator of the chart form are both primitive.
    Primitive {
        numerator: Primitivity,
        denominator: Primitivity,
    },
    /// Membership of `φ` and `1/φ` in the chart Nagata ring.
    Memberships { value: NagataWitness, inverse: NagataWitness },
}

/// `φ = N / G` in one chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiChartWitness {
    pub numerator: String,
    pub denominator: String,
    /// `φ.num · G − N · φ.den ∈ P_ε`.
    pub identity: Combination,
    pub unit: bool,
    pub proof: UnitProof,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiWitness {
    pub phi: FracSpec,
    pub spacing: u32,
    pub alphas: Vec<DStarWitness>,
    pub per_chart: Vec<PhiChartWitness>,
    pub unit_everywhere: bool,
}

/// The chart forms `N_ε, G_ε` of `φ` from chart fractions `f_i / g_i`.
fn phi_forms(table: &Arc<VarTable>, fg: &[(Poly, Poly)], spacing: u32) -> (Poly, Poly) {
    let mut num = Poly::zero(table);
    for (i, (f, _)) in fg.iter().enumerate() {
        let mut b = f.clone();
        for (k, (_, g)) in fg.iter().enumerate() {
            if k != i {
                b = &b * g;
            }
        }
        num = &num + &b.mul_term(&t_mono(table, spacing * i as u32), &Rat::one());
    }
    let den = fg.iter().fold(Poly::one(table), |acc, (_, g)| &acc * g);
    (num, den)
}

/// Spacing `1 + max deg_t(f_i Π_{k≠i} g_k)` over all charts.
fn spacing(per_chart: &[Vec<(Poly, Poly)>]) -> u32 {
    let mut c = 1;
    for fg in per_chart {
        for i in 0..fg.len() {
            let b = fg
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .fold(fg[i].0.clone(), |acc, (_, (_, g))| &acc * g);
            c = c.max(1 + b.t_degree());
        }
    }
    c
}

fn phi_value(ground: &Arc<VarTable>, alphas: &[TFrac], spacing: u32) -> TFrac {
    let fg: Vec<(Poly, Poly)> = alphas.iter().map(|a| (a.num.clone(), a.den.clone())).collect();
    let (num, den) = phi_forms(ground, &fg, spacing);
    TFrac { num, den }
}

impl PhiWitness {
    pub fn prove(model: &BlowupModel, alphas: &[TFrac], unit_chart: &[usize]) -> Result<PhiWitness> {
        let report = phi_survival(model, alphas, unit_chart)?;
        let alpha_ws = alphas
            .iter()
            .map(|a| DStarWitness::prove(model, a))
            .collect::<Result<Vec<_>>>()?;
        let per_chart = model
            .charts()
            .par_iter()
            .zip(&report.per_chart)
            .map(|(c, pc)| {
                let ctx = c.ctx();
                let lifted = c.lift_frac(&report.phi)?;
                let diff = &(&lifted.num * &pc.denominator) - &(&pc.numerator * &lifted.den);
                let proof = match (
                    Primitivity::prove(&pc.numerator, ctx)?,
                    Primitivity::prove(&pc.denominator, ctx)?,
                ) {
                    (Some(numerator), Some(denominator)) => UnitProof::Primitive {
                        numerator,
                        denominator,
                    },
                    _ => UnitProof::Memberships {
                        value: NagataWitness::prove(&lifted, ctx)?,
                        inverse: NagataWitness::prove(&lifted.recip(ctx)?, ctx)?,
                    },
                };
                Ok(PhiChartWitness {
                    numerator: pc.numerator.to_string(),
                    denominator: pc.denominator.to_string(),
                    identity: Combination::must(&diff, &[], ctx)?,
                    unit: pc.unit,
                    proof,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PhiWitness {
            phi: FracSpec::Frac(super::problem::FracParts {
                num: report.phi.num.to_string(),
                den: report.phi.den.to_string(),
            }),
            spacing: report.spacing,
            alphas: alpha_ws,
            per_chart,
            unit_everywhere: report.unit_everywhere,
        })
    }

    pub fn check(&self, model: &BlowupModel, rings: &[Ring], alphas: &[TFrac]) -> Check<bool> {
        ensure(self.alphas.len() == alphas.len(), || "one membership witness per element".into())?;
        let mut per_chart_fg: Vec<Vec<(Poly, Poly)>> = vec![Vec::new(); model.len()];
        for (i, (w, a)) in self.alphas.iter().zip(alphas).enumerate() {
            let fg = w
                .check(model, rings, a)
                .map_err(|m| format!("element {}: {m}", i + 1))?
                .ok_or_else(|| format!("element {} is not in D*", i + 1))?;
            for (e, p) in fg.into_iter().enumerate() {
                per_chart_fg[e].push(p);
            }
        }
        let c = spacing(&per_chart_fg);
        ensure(c == self.spacing, || format!("spacing is {c}, not {}", self.spacing))?;
        let phi = phi_value(model.ground(), alphas, c);
        let stated = match &self.phi {
            FracSpec::Frac(p) => TFrac {
                num: parse(&p.num, model.ground())?,
                den: parse(&p.den, model.ground())?,
            },
            FracSpec::Poly(s) => TFrac::from_poly(parse(s, model.ground())?),
        };
        ensure(stated == phi, || "phi is misstated".into())?;
        ensure(self.per_chart.len() == model.len(), || "one entry per chart".into())?;
        let lifted = lift_all(model, &phi)?;
        let mut all = true;
        for (e, ((w, ring), fg)) in self.per_chart.iter().zip(rings).zip(&per_chart_fg).enumerate() {
            let at = |m: String| format!("chart {}: {m}", e + 1);
            let (n, g) = phi_forms(&ring.table, fg, c);
            ensure(parse(&w.numerator, &ring.table).map_err(at)? == n, || at("numerator is misstated".into()))?;
            ensure(parse(&w.denominator, &ring.table).map_err(at)? == g, || at("denominator is misstated".into()))?;
            let v = &lifted[e];
            let diff = &(&v.num * &g) - &(&n * &v.den);
            w.identity.check(&ring.table, &diff, &ring.relations).map_err(at)?;
            let unit = match &w.proof {
                UnitProof::Primitive { numerator, denominator } => {
                    numerator.check(&ring.table, &n, &ring.relations).map_err(at)?;
                    denominator.check(&ring.table, &g, &ring.relations).map_err(at)?;
                    true
                }
                UnitProof::Memberships { value, inverse } => {
                    let inv = TFrac {
                        num: v.den.clone(),
                        den: v.num.clone(),
                    };
                    ensure(!v.num.is_zero(), || at("phi vanishes".into()))?;
                    let a = value.check(ring, v).map_err(at)?.is_some();
                    let b = inverse.check(ring, &inv).map_err(at)?.is_some();
                    a && b
                }
            };
            ensure(unit == w.unit, || at("unit verdict is misstated".into()))?;
            all &= unit;
        }
        ensure(all == self.unit_everywhere, || "overall unit verdict is misstated".into())?;
        Ok(all)
    }
}

/// Chart data of a relevant ideal of `D*`: relevance of the extension and
/// equality of its contraction (the content ideal) with `J_ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelevantChartWitness {
    pub relevance: RelevanceWitness,
    pub contraction: Vec<String>,
    pub equality: Equality,
}

/// Generators of the relevant ideal attached to a glued sheaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToRelevantWitness {
    pub gens: Vec<FracSpec>,
    pub glue: GlueWitness,
    pub per_chart: Vec<RelevantChartWitness>,
}

fn relevance_in_charts(model: &BlowupModel, gens: &[TFrac]) -> Result<Vec<RelevanceWitness>> {
    model
        .charts()
        .par_iter()
        .map(|c| {
            let lifted = gens.iter().map(|u| c.lift_frac(u)).collect::<Result<Vec<_>>>()?;
            RelevanceWitness::prove(&lifted, c.ctx())
        })
        .collect()
}

fn check_relevance_in_charts(
    model: &BlowupModel,
    rings: &[Ring],
    gens: &[TFrac],
    ws: &[&RelevanceWitness],
) -> Check<Vec<Relevance>> {
    ensure(ws.len() == model.len(), || "one relevance witness per chart".into())?;
    let mut out = Vec::new();
    for (e, (w, ring)) in ws.iter().zip(rings).enumerate() {
        let lifted = gens
            .iter()
            .map(|u| lift_all(model, u).map(|mut v| v.swap_remove(e)))
            .collect::<Check<Vec<_>>>()?;
        out.push(w.check(ring, &lifted).map_err(|m| format!("chart {}: {m}", e + 1))?);
    }
    Ok(out)
}

impl ToRelevantWitness {
    pub fn prove(model: &BlowupModel, sheaf: &IdealSheaf) -> Result<ToRelevantWitness> {
        let rep = crate::dstar::sheaf_to_relevant(model, sheaf)?;
        let gens: Vec<TFrac> = rep.gens.iter().map(|g| g.value.clone()).collect();
        let glue = GlueWitness::prove(model, sheaf)?;
        let rel = relevance_in_charts(model, &gens)?;
        let per_chart = model
            .charts()
            .iter()
            .zip(rel)
            .map(|(c, relevance)| {
                let content = parse_all(&relevance.content, c.table()).map_err(Error::Consistency)?;
                Ok(RelevantChartWitness {
                    equality: Equality::prove(&content, &sheaf.per_chart[c.index()], c.ctx())?,
                    contraction: relevance.content.clone(),
                    relevance,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ToRelevantWitness {
            gens: gens.iter().map(FracSpec::of).collect(),
            glue,
            per_chart,
        })
    }

    /// Check against the input sheaf; returns the generators.
    pub fn check(&self, model: &BlowupModel, rings: &[Ring], sheaf: &[Vec<Poly>]) -> Check<Vec<TFrac>> {
        ensure(self.glue.check(model, rings, sheaf)?, || "the input sheaf does not glue".into())?;
        let gens = super::fracs_of(&self.gens, model.ground())?;
        let ws: Vec<&RelevanceWitness> = self.per_chart.iter().map(|c| &c.relevance).collect();
        let rel = check_relevance_in_charts(model, rings, &gens, &ws)?;
        for (e, ((r, w), ring)) in rel.iter().zip(&self.per_chart).zip(rings).enumerate() {
            let at = |m: String| format!("chart {}: {m}", e + 1);
            ensure(r.status == RelevanceStatus::Relevant, || at("extension is not relevant".into()))?;
            ensure(same_list(&r.content, &w.contraction, &ring.table).map_err(at)?, || {
                at("contraction differs from the content ideal".into())
            })?;
            ensure(w.equality.check(ring, &r.content, &sheaf[e]).map_err(at)?, || {
                at("contraction differs from the sheaf".into())
            })?;
        }
        Ok(gens)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SheafStatus {
    Sheaf,
    NotRelevant,
    NotGlued,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafChartWitness {
    pub relevance: RelevanceWitness,
    /// Stated `J_ε` against the content ideal, for relevant extensions.
    pub equality: Option<Equality>,
}

/// The ideal sheaf of a relevant ideal of `D*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToSheafWitness {
    pub status: SheafStatus,
    pub failing_chart: Option<usize>,
    pub sheaf: Vec<Vec<String>>,
    pub per_chart: Vec<SheafChartWitness>,
    pub glue: Option<GlueWitness>,
}

impl ToSheafWitness {
    pub fn prove(model: &BlowupModel, gens: &[TFrac]) -> Result<ToSheafWitness> {
        let rel = relevance_in_charts(model, gens)?;
        if let Some(e) = rel.iter().position(|r| r.status == RelevanceStatus::GeneratorNotInRing) {
            return Err(Error::usage(format!("a generator is not in the Nagata ring of chart {}", e + 1)));
        }
        let failing_chart = rel.iter().position(|r| r.status != RelevanceStatus::Relevant);
        if let Some(e) = failing_chart {
            return Ok(ToSheafWitness {
                status: SheafStatus::NotRelevant,
                failing_chart: Some(e + 1),
                sheaf: Vec::new(),
                per_chart: rel
                    .into_iter()
                    .map(|relevance| SheafChartWitness {
                        relevance,
                        equality: None,
                    })
                    .collect(),
                glue: None,
            });
        }
        let mut per_chart = Vec::new();
        let mut sheaf = Vec::new();
        for (c, relevance) in model.charts().iter().zip(rel) {
            let content = parse_all(&relevance.content, c.table()).map_err(Error::Consistency)?;
            let j = crate::ideal::minimal_generators(&content, c.ctx())?;
            per_chart.push(SheafChartWitness {
                equality: Some(Equality::prove(&j, &content, c.ctx())?),
                relevance,
            });
            sheaf.push(j);
        }
        let is = IdealSheaf::new(model, sheaf)?;
        let glue = GlueWitness::prove(model, &is)?;
        Ok(ToSheafWitness {
            status: if glue.glued {
                SheafStatus::Sheaf
            } else {
                SheafStatus::NotGlued
            },
            failing_chart: None,
            sheaf: is.per_chart.iter().map(|j| show(j)).collect(),
            per_chart,
            glue: Some(glue),
        })
    }

    /// Check against the generators; returns the sheaf when one is produced.
    pub fn check(&self, model: &BlowupModel, rings: &[Ring], gens: &[TFrac]) -> Check<Option<Vec<Vec<Poly>>>> {
        let ws: Vec<&RelevanceWitness> = self.per_chart.iter().map(|c| &c.relevance).collect();
        let rel = check_relevance_in_charts(model, rings, gens, &ws)?;
        let failing = rel.iter().position(|r| r.status != RelevanceStatus::Relevant).map(|e| e + 1);
        ensure(failing == self.failing_chart, || "failing chart is misstated".into())?;
        if failing.is_some() {
            ensure(self.status == SheafStatus::NotRelevant, || "status should be not-relevant".into())?;
            return Ok(None);
        }
        let sheaf = sheaf_polys(model, &self.sheaf)?;
        for (e, ((r, w), ring)) in rel.iter().zip(&self.per_chart).zip(rings).enumerate() {
            let at = |m: String| format!("chart {}: {m}", e + 1);
            let eq = w.equality.as_ref().ok_or_else(|| at("missing equality witness".into()))?;
            ensure(eq.check(ring, &sheaf[e], &r.content).map_err(at)?, || {
                at("stated ideal differs from the content ideal".into())
            })?;
        }
        let glue = self.glue.as_ref().ok_or("missing glue witness")?;
        let glued = glue.check(model, rings, &sheaf)?;
        let status = if glued {
            SheafStatus::Sheaf
        } else {
            SheafStatus::NotGlued
        };
        ensure(status == self.status, || "sheaf status is misstated".into())?;
        Ok(glued.then_some(sheaf))
    }
}

/// `relevant_to_sheaf ∘ sheaf_to_relevant` compared with the input sheaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundTripWitness {
    pub to_relevant: ToRelevantWitness,
    pub to_sheaf: ToSheafWitness,
    pub equalities: Vec<Equality>,
    pub equal: bool,
}

impl RoundTripWitness {
    pub fn prove(model: &BlowupModel, sheaf: &IdealSheaf) -> Result<RoundTripWitness> {
        let to_relevant = ToRelevantWitness::prove(model, sheaf)?;
        let gens = super::fracs_of(&to_relevant.gens, model.ground()).map_err(Error::Consistency)?;
        let to_sheaf = ToSheafWitness::prove(model, &gens)?;
        if to_sheaf.status != SheafStatus::Sheaf {
            return Err(Error::Consistency("the relevant ideal of a glued sheaf gave no sheaf".into()));
        }
        let back = sheaf_polys(model, &to_sheaf.sheaf).map_err(Error::Consistency)?;
        let equalities = model
            .charts()
            .iter()
            .map(|c| Equality::prove(&back[c.index()], &sheaf.per_chart[c.index()], c.ctx()))
            .collect::<Result<Vec<_>>>()?;
        let equal = equalities.iter().all(Equality::holds);
        Ok(RoundTripWitness {
            to_relevant,
            to_sheaf,
            equalities,
            equal,
        })
    }

    pub fn check(&self, model: &BlowupModel, rings: &[Ring], sheaf: &[Vec<Poly>]) -> Check<bool> {
        let gens = self.to_relevant.check(model, rings, sheaf)?;
        let back = self
            .to_sheaf
            .check(model, rings, &gens)?
            .ok_or("the relevant ideal gave no sheaf")?;
        ensure(self.equalities.len() == model.len(), || "one equality per chart".into())?;
        let mut equal = true;
        for (e, ((w, ring), (b, s))) in self.equalities.iter().zip(rings).zip(back.iter().zip(sheaf)).enumerate() {
            equal &= w.check(ring, b, s).map_err(|m| format!("chart {}: {m}", e + 1))?;
        }
        ensure(equal == self.equal, || "round-trip verdict is misstated".into())?;
        Ok(equal)
    }
}
