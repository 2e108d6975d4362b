//! The ring `D* = ⋂_ε D_ε(t)` of a blowup model: membership, the element `θ`,
//! the survival construction `φ`, and the correspondence between ideal
//! sheaves on the model and relevant ideals of `D*`.
//!
//! Ideals of `D*` are handled through their extensions to the chart Nagata
//! rings; two ideals are equal when all chart extensions are.

use rayon::prelude::*;

use crate::blowup::{glue_check, BlowupModel, Chart, IdealSheaf};
use crate::error::{Error, Result};
use crate::ideal::{ideals_equal, member, minimal_generators};
use crate::nagata::{
    is_relevant, nagata_is_unit, nagata_member, primitivity_witness, NagataCert, PrimitivityWitness,
    RelevanceReport, TFrac,
};
use crate::poly::{Mono, Poly, Rat};

use num_traits::One;

/// An element of `K(t)` with a member certificate in every chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DStarElement {
    pub value: TFrac,
    pub per_chart: Vec<NagataCert>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DStarMembership {
    Member(DStarElement),
    /// Certificates for every chart; `failing_chart` is the first non-member (0-based).
    NonMember {
        value: TFrac,
        per_chart: Vec<NagataCert>,
        failing_chart: usize,
    },
}

impl DStarMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, DStarMembership::Member(_))
    }

    pub fn per_chart(&self) -> &[NagataCert] {
        match self {
            DStarMembership::Member(e) => &e.per_chart,
            DStarMembership::NonMember { per_chart, .. } => per_chart,
        }
    }

    pub fn element(self) -> Option<DStarElement> {
        match self {
            DStarMembership::Member(e) => Some(e),
            DStarMembership::NonMember { .. } => None,
        }
    }
}

fn check_ground(model: &BlowupModel, u: &TFrac) -> Result<TFrac> {
    TFrac::new(u.num.embed(model.ground())?, u.den.embed(model.ground())?, model.ground_ctx())
}

/// Membership of `u` (over the ground table) in `D*`, chart by chart.
pub fn dstar_member(model: &BlowupModel, u: &TFrac) -> Result<DStarMembership> {
    let value = check_ground(model, u)?;
    let per_chart = model
        .charts()
        .par_iter()
        .map(|c| nagata_member(&c.lift_frac(&value)?, c.ctx()))
        .collect::<Result<Vec<_>>>()?;
    Ok(match per_chart.iter().position(|c| !c.is_member()) {
        None => DStarMembership::Member(DStarElement { value, per_chart }),
        Some(failing_chart) => DStarMembership::NonMember {
            value,
            per_chart,
            failing_chart,
        },
    })
}

fn check_permutation(model: &BlowupModel, perm: &[usize]) -> Result<()> {
    let n = model.len();
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::usage(format!("ordering has {} entries, center has {n}", perm.len())));
    }
    for &i in perm {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::usage("ordering is not a permutation of the center"));
        }
    }
    Ok(())
}

fn t_power(table: &std::sync::Arc<crate::VarTable>, e: u32) -> Mono {
    Mono::var(table.len(), table.len() - 1, e)
}

/// `θ = Σ_i a_{π(i)} t^i` over the ground table.
pub fn theta(model: &BlowupModel, perm: &[usize]) -> Result<Poly> {
    check_permutation(model, perm)?;
    let g = model.ground();
    let mut acc = Poly::zero(g);
    for (i, &k) in perm.iter().enumerate() {
        acc = &acc + &model.center()[k].mul_term(&t_power(g, i as u32), &Rat::one());
    }
    Ok(acc)
}

/// `θ / a_ε` written in chart `ε` as `q = Σ_i y_{π(i)} t^i`, with
/// `a_ε · q − θ = Σ relation_cofactors · P_ε` and `q` primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationWitness {
    pub chart: usize,
    pub q: Poly,
    pub relation_cofactors: Vec<Poly>,
    pub primitivity: PrimitivityWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaReport {
    pub ordering: Vec<usize>,
    pub theta: Poly,
    /// Membership of `a_i / θ` in `D*`, in center order.
    pub quotients: Vec<DStarMembership>,
    pub localizations: Vec<Option<LocalizationWitness>>,
    pub passed: bool,
}

fn localization_witness(model: &BlowupModel, chart: &Chart, perm: &[usize], theta: &Poly) -> Result<Option<LocalizationWitness>> {
    let tb = chart.table();
    let mut q = Poly::zero(tb);
    for (i, &k) in perm.iter().enumerate() {
        q = &q + &chart.y(k).mul_term(&t_power(tb, i as u32), &Rat::one());
    }
    let ae = chart.lift(&model.center()[chart.index()])?;
    let diff = &(&ae * &q) - &chart.lift(theta)?;
    let Some(relation_cofactors) = chart.ctx().relation_cofactors(&diff) else {
        return Ok(None);
    };
    Ok(primitivity_witness(&q, chart.ctx())?.map(|primitivity| LocalizationWitness {
        chart: chart.index(),
        q,
        relation_cofactors,
        primitivity,
    }))
}

/// Check that `a / θ ∈ D*` for every center generator `a` and that `θ / a_ε`
/// is primitive in every `D_ε[t]`.
pub fn verify_theta(model: &BlowupModel, perm: &[usize]) -> Result<ThetaReport> {
    let th = theta(model, perm)?;
    let quotients = model
        .center()
        .iter()
        .map(|a| {
            dstar_member(
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
        .par_iter()
        .map(|c| localization_witness(model, c, perm, &th))
        .collect::<Result<Vec<_>>>()?;
    let passed = quotients.iter().all(|q| q.is_member()) && localizations.iter().all(|l| l.is_some());
    Ok(ThetaReport {
        ordering: perm.to_vec(),
        theta: th,
        quotients,
        localizations,
        passed,
    })
}

/// `φ = N_ε / G_ε` in chart `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiChart {
    pub numerator: Poly,
    pub denominator: Poly,
    /// `φ.num · G_ε − N_ε · φ.den = Σ relation_cofactors · P_ε`.
    pub relation_cofactors: Vec<Poly>,
    pub numerator_primitivity: Option<PrimitivityWitness>,
    pub denominator_primitivity: Option<PrimitivityWitness>,
    /// Verdict of the independent unit test on `φ`.
    pub unit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    pub phi: TFrac,
    pub spacing: u32,
    pub alphas: Vec<DStarElement>,
    pub per_chart: Vec<PhiChart>,
    pub unit_everywhere: bool,
}

/// Combine elements `α_i ∈ D*`, each a unit in its nominated chart, into
/// `φ = Σ α_i t^{i·c}` and certify in which charts `φ` is a unit.
///
/// With `α_i = f_i / g_i` in chart `ε`, the numerator of `φ` there is
/// `Σ f_i Π_{k≠i} g_k t^{i·c}`; `c` exceeds the `t`-degree of every block, so
/// its content contains that of each block.
pub fn phi_survival(model: &BlowupModel, alphas: &[TFrac], unit_chart: &[usize]) -> Result<PhiReport> {
    if alphas.is_empty() {
        return Err(Error::usage("phi needs at least one element"));
    }
    if alphas.len() != unit_chart.len() {
        return Err(Error::usage("one nominated chart per element is required"));
    }
    let mut elems = Vec::with_capacity(alphas.len());
    for (i, (a, &e)) in alphas.iter().zip(unit_chart).enumerate() {
        let chart = model.chart(e)?;
        let elem = match dstar_member(model, a)? {
            DStarMembership::Member(el) => el,
            DStarMembership::NonMember {
                per_chart,
                failing_chart,
                ..
            } => {
                return Err(Error::NotInNagataRing {
                    chart: Some(failing_chart + 1),
                    cert: Box::new(per_chart[failing_chart].clone()),
                })
            }
        };
        if !nagata_is_unit(&chart.lift_frac(&elem.value)?, chart.ctx())? {
            return Err(Error::usage(format!(
                "element {} is not a unit in chart {}",
                i + 1,
                e + 1
            )));
        }
        elems.push(elem);
    }
    let fg = |el: &DStarElement, c: usize| -> (Poly, Poly) {
        let (f, g) = el.per_chart[c].fraction().expect("member certificate");
        (f.clone(), g.clone())
    };
    let mut blocks: Vec<Vec<Poly>> = Vec::new();
    let mut dens: Vec<Poly> = Vec::new();
    let mut spacing = 1;
    for c in 0..model.len() {
        let pairs: Vec<(Poly, Poly)> = elems.iter().map(|el| fg(el, c)).collect();
        let mut bs = Vec::new();
        for i in 0..pairs.len() {
            let mut b = pairs[i].0.clone();
            for (k, (_, g)) in pairs.iter().enumerate() {
                if k != i {
                    b = &b * g;
                }
            }
            spacing = spacing.max(1 + b.t_degree());
            bs.push(b);
        }
        blocks.push(bs);
        let tb = model.charts()[c].table();
        dens.push(pairs.iter().fold(Poly::one(tb), |acc, (_, g)| &acc * g));
    }

    let g = model.ground();
    let mut num = Poly::zero(g);
    for (i, a) in elems.iter().enumerate() {
        let mut b = a.value.num.clone();
        for (k, other) in elems.iter().enumerate() {
            if k != i {
                b = &b * &other.value.den;
            }
        }
        num = &num + &b.mul_term(&t_power(g, spacing * i as u32), &Rat::one());
    }
    let den = elems.iter().fold(Poly::one(g), |acc, e| &acc * &e.value.den);
    let phi = TFrac { num, den };

    let per_chart = model
        .charts()
        .par_iter()
        .zip(blocks.into_par_iter().zip(dens))
        .map(|(chart, (bs, denominator))| {
            let tb = chart.table();
            let mut numerator = Poly::zero(tb);
            for (i, b) in bs.iter().enumerate() {
                numerator = &numerator + &b.mul_term(&t_power(tb, spacing * i as u32), &Rat::one());
            }
            let lifted = chart.lift_frac(&phi)?;
            let diff = &(&lifted.num * &denominator) - &(&numerator * &lifted.den);
            let relation_cofactors = chart
                .ctx()
                .relation_cofactors(&diff)
                .ok_or_else(|| Error::Consistency(format!("phi does not match its chart {} form", chart.index() + 1)))?;
            Ok(PhiChart {
                numerator_primitivity: primitivity_witness(&numerator, chart.ctx())?,
                denominator_primitivity: primitivity_witness(&denominator, chart.ctx())?,
                unit: nagata_is_unit(&lifted, chart.ctx())?,
                numerator,
                denominator,
                relation_cofactors,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for (c, pc) in per_chart.iter().enumerate() {
        let explicit = pc.numerator_primitivity.is_some() && pc.denominator_primitivity.is_some();
        if explicit && !pc.unit {
            return Err(Error::Consistency(format!("unit tests disagree on chart {}", c + 1)));
        }
    }
    let unit_everywhere = per_chart.iter().all(|c| c.unit);
    Ok(PhiReport {
        phi,
        spacing,
        alphas: elems,
        per_chart,
        unit_everywhere,
    })
}

/// A relevant ideal of `D*`, described by generators and chart data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevantIdealRep {
    pub gens: Vec<DStarElement>,
    /// Normalized generators of `I · D_ε(t)` in `D_ε[t]`.
    pub per_chart_ideal: Vec<Vec<Poly>>,
    pub per_chart_reports: Vec<RelevanceReport>,
    /// `I · D_ε(t) ∩ D_ε`, certified equal to the sheaf's `J_ε`.
    pub per_chart_contraction: Vec<Vec<Poly>>,
}

fn require_glued(model: &BlowupModel, sheaf: &IdealSheaf) -> Result<()> {
    let report = glue_check(model, sheaf)?;
    match report.failing_pair {
        Some((s, t)) => Err(Error::GlueFailure(s + 1, t + 1)),
        None => Ok(()),
    }
}

const MAX_TWIST: u32 = 64;

/// The `D*`-generator attached to the chart-`ε` element `g ∈ J_ε`: with `G`
/// the form of `g` of degree `k`, it is `G(a) a_ε^j / θ^{k+j}` for the least
/// `j` such that `G · y_ε^j` dehomogenizes into `J_ε′` on every other chart.
fn lift_generator(model: &BlowupModel, sheaf: &IdealSheaf, chart: &Chart, g: &Poly, theta: &Poly) -> Result<TFrac> {
    let (form, k) = model.homogenize(chart, g)?;
    let rees = model.rees_table();
    let ye = model.ground().len() - 1 + chart.index();
    let step = Mono::var(rees.len(), ye, 1);
    let mut h = form;
    for j in 0..=MAX_TWIST {
        let mut ok = true;
        for other in model.charts() {
            if other.index() == chart.index() {
                continue;
            }
            let d = model.dehomogenize(other, &h);
            if !member(&d, &sheaf.per_chart[other.index()], other.ctx())? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(TFrac {
                num: model.evaluate_form(&h),
                den: theta.pow(k + j),
            });
        }
        h = h.mul_term(&step, &Rat::one());
    }
    Err(Error::Consistency(format!(
        "no twist up to {MAX_TWIST} carries a chart {} generator to the other charts",
        chart.index() + 1
    )))
}

/// Per-chart relevance of the ideal generated by `gens ⊆ D*`; the chart
/// contractions are the content ideals.
fn chart_relevance(model: &BlowupModel, gens: &[TFrac]) -> Result<Vec<(RelevanceReport, Vec<Poly>)>> {
    model
        .charts()
        .par_iter()
        .map(|c| {
            let lifted = gens.iter().map(|u| c.lift_frac(u)).collect::<Result<Vec<_>>>()?;
            let report = match is_relevant(&lifted, c.ctx()) {
                Ok(r) => r,
                Err(Error::NotInNagataRing { cert, .. }) => {
                    return Err(Error::NotInNagataRing {
                        chart: Some(c.index() + 1),
                        cert,
                    })
                }
                Err(e) => return Err(e),
            };
            if !report.relevant {
                return Err(Error::NotRelevant {
                    chart: Some(c.index() + 1),
                    report: Box::new(report),
                });
            }
            let contraction = minimal_generators(&report.content_gens, c.ctx())?;
            Ok((report, contraction))
        })
        .collect()
}

/// From a glued ideal sheaf to generators of the corresponding relevant
/// ideal of `D*`, with chart data certified against the sheaf.
pub fn sheaf_to_relevant(model: &BlowupModel, sheaf: &IdealSheaf) -> Result<RelevantIdealRep> {
    let sheaf = IdealSheaf::new(model, sheaf.per_chart.clone())?;
    require_glued(model, &sheaf)?;
    let perm: Vec<usize> = (0..model.len()).collect();
    let th = theta(model, &perm)?;
    let lifted = model
        .charts()
        .par_iter()
        .map(|c| {
            minimal_generators(&sheaf.per_chart[c.index()], c.ctx())?
                .iter()
                .map(|g| lift_generator(model, &sheaf, c, g, &th))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut values: Vec<TFrac> = Vec::new();
    for u in lifted.into_iter().flatten() {
        if !values.iter().any(|v| v.equals(&u, model.ground_ctx())) {
            values.push(u);
        }
    }
    let mut gens = Vec::with_capacity(values.len());
    for u in &values {
        match dstar_member(model, u)? {
            DStarMembership::Member(e) => gens.push(e),
            DStarMembership::NonMember { failing_chart, .. } => {
                return Err(Error::Consistency(format!(
                    "generator {u} is not in the Nagata ring of chart {}",
                    failing_chart + 1
                )))
            }
        }
    }
    let per = chart_relevance(model, &values)?;
    let mut per_chart_ideal = Vec::new();
    let mut per_chart_reports = Vec::new();
    let mut per_chart_contraction = Vec::new();
    for (c, (report, contraction)) in model.charts().iter().zip(per) {
        if !ideals_equal(&contraction, &sheaf.per_chart[c.index()], c.ctx())? {
            return Err(Error::Consistency(format!(
                "contraction on chart {} differs from the sheaf",
                c.index() + 1
            )));
        }
        per_chart_ideal.push(report.normalized.clone());
        per_chart_reports.push(report);
        per_chart_contraction.push(contraction);
    }
    Ok(RelevantIdealRep {
        gens,
        per_chart_ideal,
        per_chart_reports,
        per_chart_contraction,
    })
}

/// From generators of a relevant ideal of `D*` to its ideal sheaf: chart by
/// chart, the contraction of the extension is the content ideal.
pub fn relevant_to_sheaf(model: &BlowupModel, gens: &[TFrac]) -> Result<(IdealSheaf, Vec<RelevanceReport>)> {
    let gens = gens.iter().map(|u| check_ground(model, u)).collect::<Result<Vec<_>>>()?;
    let per = chart_relevance(model, &gens)?;
    let (reports, per_chart): (Vec<_>, Vec<_>) = per.into_iter().unzip();
    let sheaf = IdealSheaf { per_chart };
    require_glued(model, &sheaf)?;
    Ok((sheaf, reports))
}

#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub rep: RelevantIdealRep,
    pub back: IdealSheaf,
    pub equal: bool,
}

/// `relevant_to_sheaf ∘ sheaf_to_relevant` against the identity.
pub fn roundtrip_check(model: &BlowupModel, sheaf: &IdealSheaf) -> Result<RoundTrip> {
    let rep = sheaf_to_relevant(model, sheaf)?;
    let values: Vec<TFrac> = rep.gens.iter().map(|g| g.value.clone()).collect();
    let (back, _) = relevant_to_sheaf(model, &values)?;
    let equal = back.equals(sheaf, model)?;
    Ok(RoundTrip { rep, back, equal })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::blowup::{build_model, pullback};
    use crate::poly::{BaseOrder, VarTable};

    fn model_in(vars: &[&str], center: &[&str]) -> BlowupModel {
        let g = VarTable::user(vars).unwrap().with_t();
        let center = center.iter().map(|s| Poly::parse(s, &g).unwrap()).collect();
        build_model(&g, center, BaseOrder::Grevlex).unwrap()
    }

    fn model(center: &[&str]) -> BlowupModel {
        model_in(&["x", "y"], center)
    }

    fn p(t: &Arc<VarTable>, s: &str) -> Poly {
        Poly::parse(s, t).unwrap()
    }

    fn frac(m: &BlowupModel, n: &str, d: &str) -> TFrac {
        TFrac {
            num: p(m.ground(), n),
            den: p(m.ground(), d),
        }
    }

    #[test]
    fn membership_examples() {
        let m = model(&["x", "y"]);
        let r = dstar_member(&m, &frac(&m, "y", "x*t + y")).unwrap();
        let e = r.element().unwrap();
        let (c1, c2) = (&m.charts()[0], &m.charts()[1]);
        assert_eq!(e.per_chart[0].fraction().unwrap().1, &p(c1.table(), "t + y2"));
        assert_eq!(e.per_chart[1].fraction().unwrap().1, &p(c2.table(), "y1*t + 1"));
        assert!(dstar_member(&m, &frac(&m, "1", "1")).unwrap().is_member());
        let r = dstar_member(&m, &frac(&m, "1", "x")).unwrap();
        assert!(!r.is_member());
        assert!(r.per_chart().iter().all(|c| !c.is_member()));
    }

    #[test]
    fn theta_examples() {
        let m = model(&["x", "y"]);
        assert_eq!(theta(&m, &[0, 1]).unwrap(), p(m.ground(), "x + y*t"));
        assert!(verify_theta(&m, &[0, 1]).unwrap().passed);
        assert!(verify_theta(&m, &[1, 0]).unwrap().passed);
        let m = model(&["x^2", "x*y", "y^2"]);
        assert_eq!(theta(&m, &[0, 1, 2]).unwrap(), p(m.ground(), "x^2 + x*y*t + y^2*t^2"));
        assert!(verify_theta(&m, &[0, 1, 2]).unwrap().passed);
        let m = model(&["x + y"]);
        let r = verify_theta(&m, &[0]).unwrap();
        assert!(r.passed);
        assert_eq!(r.theta, p(m.ground(), "x + y"));
        assert!(theta(&m, &[1]).is_err());
    }

    #[test]
    fn phi_examples() {
        let m = model(&["x", "y"]);
        let a = [frac(&m, "x", "x*t + y"), frac(&m, "y", "x*t + y")];
        let r = phi_survival(&m, &a, &[0, 1]).unwrap();
        assert!(r.unit_everywhere);
        assert!(r.phi.equals(&frac(&m, "x + y*t^2", "x*t + y"), m.ground_ctx()));
        let ones = [frac(&m, "1", "1"), frac(&m, "1", "1")];
        let r = phi_survival(&m, &ones, &[0, 1]).unwrap();
        assert!(r.unit_everywhere);
        assert_eq!(r.phi, frac(&m, "1 + t", "1"));
        // x/(xt+y) is not a unit in the y-chart
        assert!(phi_survival(&m, &a, &[1, 1]).is_err());
        let single = model(&["x"]);
        let r = phi_survival(&single, &[frac(&single, "t + x", "1")], &[0]).unwrap();
        assert_eq!(r.phi, frac(&single, "t + x", "1"));
    }

    #[test]
    fn bijection_examples() {
        let m = model(&["x", "y"]);
        let g = m.ground().clone();
        let exc = pullback(&m, &[p(&g, "x"), p(&g, "y")]).unwrap();
        let (s1, _) = relevant_to_sheaf(&m, &[frac(&m, "x*t + y", "1")]).unwrap();
        let (s2, _) = relevant_to_sheaf(&m, &[frac(&m, "x", "1"), frac(&m, "y", "1")]).unwrap();
        assert!(s1.equals(&exc, &m).unwrap());
        assert_eq!(s1, s2);
        let (u, _) = relevant_to_sheaf(&m, &[frac(&m, "1", "1")]).unwrap();
        assert_eq!(u, IdealSheaf::unit(&m));

        let rt = roundtrip_check(&m, &exc).unwrap();
        assert!(rt.equal);
        assert_eq!(rt.rep.per_chart_contraction, exc.per_chart);
        assert!(roundtrip_check(&m, &IdealSheaf::unit(&m)).unwrap().equal);
        let cube = pullback(&m, &[p(&g, "x^3"), p(&g, "x^2*y"), p(&g, "x*y^2"), p(&g, "y^3")]).unwrap();
        assert!(roundtrip_check(&m, &cube).unwrap().equal);
    }

    #[test]
    fn squares_glue_and_round_trip() {
        let m = model(&["x", "y"]);
        let (c1, c2) = (&m.charts()[0], &m.charts()[1]);
        let sq = IdealSheaf::new(&m, vec![vec![p(c1.table(), "x^2")], vec![p(c2.table(), "y^2")]]).unwrap();
        let rep = sheaf_to_relevant(&m, &sq).unwrap();
        assert!(!rep.per_chart_contraction.iter().all(|c| c == &[p(c1.table(), "1")]));
        assert!(roundtrip_check(&m, &sq).unwrap().equal);
        let bad = IdealSheaf::new(&m, vec![vec![p(c1.table(), "x^2")], vec![p(c2.table(), "y")]]).unwrap();
        assert!(matches!(sheaf_to_relevant(&m, &bad), Err(Error::GlueFailure(1, 2))));
    }

    #[test]
    fn relevance_failures_name_the_chart() {
        let m = model(&["x", "y"]);
        match relevant_to_sheaf(&m, &[frac(&m, "1", "x")]) {
            Err(Error::NotInNagataRing { chart: Some(1), .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn three_variable_theta() {
        let m = model_in(&["x", "y", "z"], &["x", "y", "z"]);
        assert!(verify_theta(&m, &[2, 0, 1]).unwrap().passed);
    }
}
