//! Projective models: the charts of the blowup of `Spec D` along a center
//! `(a_1, …, a_n)`, presented as polynomial rings modulo saturated Rees
//! relations, together with chart transitions and ideal sheaves.
//!
//! Chart `ε` has variables `x⃗`, `y_i` for `i ≠ ε` (standing for `a_i / a_ε`;
//! `y_ε = 1` is substituted away), and `t`. Chart indices are 0-based in the
//! API; variable names are 1-based (`y1`, `y2`, …).

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ideal::{
    eliminate, ideal_gb, ideals_equal, member, member_certificate, minimal_generators, saturate,
    MembershipCert, QuotientCtx,
};
use crate::nagata::TFrac;
use crate::poly::{BaseOrder, Mono, Poly, VarTable};

/// One affine chart `D_ε = D[a_1/a_ε, …, a_n/a_ε]`.
#[derive(Clone, Debug)]
pub struct Chart {
    index: usize,
    ctx: QuotientCtx,
    /// Position of `y_i` in the chart table, `None` for `i = ε`.
    y_slots: Vec<Option<usize>>,
}

impl Chart {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn table(&self) -> &Arc<VarTable> {
        self.ctx.table()
    }

    pub fn ctx(&self) -> &QuotientCtx {
        &self.ctx
    }

    /// The relation ideal `P_ε` (reduced Gröbner basis).
    pub fn relations(&self) -> &[Poly] {
        self.ctx.relations()
    }

    /// `y_i` in this chart (the constant 1 for `i = ε`).
    pub fn y(&self, i: usize) -> Poly {
        match self.y_slots[i] {
            Some(j) => Poly::var_at(self.table(), j, 1),
            None => Poly::one(self.table()),
        }
    }

    /// Table positions of the `y` variables.
    pub fn y_indices(&self) -> Vec<usize> {
        self.y_slots.iter().flatten().copied().collect()
    }

    /// Read a ground polynomial (variables `x⃗`, `t`) in this chart.
    pub fn lift(&self, p: &Poly) -> Result<Poly> {
        p.embed(self.table())
    }

    pub fn lift_frac(&self, u: &TFrac) -> Result<TFrac> {
        TFrac::new(self.lift(&u.num)?, self.lift(&u.den)?, &self.ctx)
    }
}

/// The blowup `W(D; a_1, …, a_n)` of `D = Q[x⃗]` along its center.
#[derive(Clone, Debug)]
pub struct BlowupModel {
    ground: Arc<VarTable>,
    ground_ctx: QuotientCtx,
    center: Vec<Poly>,
    charts: Vec<Chart>,
    /// `x⃗, y_1, …, y_n, t`: homogeneous forms in the `y`'s live here.
    rees: Arc<VarTable>,
}

/// Ideal data `J_ε` per chart, in the chart presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSheaf {
    pub per_chart: Vec<Vec<Poly>>,
}

/// One overlap membership tested by [`glue_check`]: generator `generator` of
/// `J_target`, transported to chart `source`, has numerator `num` with
/// `y_target^power · num ∈ J_source + P_source` when `power` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapCheck {
    pub source: usize,
    pub target: usize,
    pub generator: usize,
    pub num: Poly,
    pub power: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueReport {
    pub glued: bool,
    /// First failing ordered pair `(source, target)`, 0-based.
    pub failing_pair: Option<(usize, usize)>,
    pub checks: Vec<OverlapCheck>,
}

fn chart_var_name(i: usize) -> String {
    format!("y{}", i + 1)
}

struct Prepared {
    ground: Arc<VarTable>,
    xs: Vec<String>,
    center: Vec<Poly>,
    rees: Arc<VarTable>,
}

fn prepare(ground: &Arc<VarTable>, center: Vec<Poly>) -> Result<Prepared> {
    if center.is_empty() {
        return Err(Error::usage("center must have at least one generator"));
    }
    let ground = ground.with_t();
    let n = center.len();
    let xs: Vec<String> = ground.without_t().names().to_vec();
    for name in &xs {
        if crate::poly::is_chart_name(name) {
            return Err(Error::usage(format!("ground variable `{name}` clashes with chart variables")));
        }
    }
    let center = center
        .iter()
        .map(|a| a.embed(&ground))
        .collect::<Result<Vec<_>>>()?;
    let ti = ground.t_index().expect("ground has t");
    for (i, a) in center.iter().enumerate() {
        if a.is_zero() {
            return Err(Error::usage(format!("center generator {} is zero", i + 1)));
        }
        if a.involves(ti) {
            return Err(Error::usage(format!("center generator {} involves t", i + 1)));
        }
    }
    let mut rees_names = xs.clone();
    rees_names.extend((0..n).map(chart_var_name));
    rees_names.push(crate::poly::NAGATA_VAR.to_string());
    let rees = VarTable::new(rees_names)?;
    Ok(Prepared {
        ground,
        xs,
        center,
        rees,
    })
}

/// Build the charts of the blowup of `Q[ground]` along `center`.
pub fn build_model(ground: &Arc<VarTable>, center: Vec<Poly>, order: BaseOrder) -> Result<BlowupModel> {
    let Prepared {
        ground,
        xs,
        center,
        rees,
    } = prepare(ground, center)?;
    let charts = (0..center.len())
        .into_par_iter()
        .map(|e| build_chart(&ground, &xs, &center, e, order))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlowupModel {
        ground_ctx: QuotientCtx::free(&ground, order),
        ground,
        center,
        charts,
        rees,
    })
}

/// A model whose chart relations are supplied rather than computed.
pub fn model_from_presentation(
    ground: &Arc<VarTable>,
    center: Vec<Poly>,
    relations: Vec<Vec<Poly>>,
    order: BaseOrder,
) -> Result<BlowupModel> {
    let Prepared {
        ground,
        xs,
        center,
        rees,
    } = prepare(ground, center)?;
    if relations.len() != center.len() {
        return Err(Error::usage("one relation list per chart is required"));
    }
    let charts = relations
        .into_iter()
        .enumerate()
        .map(|(e, rel)| {
            let (table, y_slots) = chart_table(&xs, center.len(), e)?;
            Ok(Chart {
                index: e,
                ctx: QuotientCtx::new(&table, rel, order)?,
                y_slots,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlowupModel {
        ground_ctx: QuotientCtx::free(&ground, order),
        ground,
        center,
        charts,
        rees,
    })
}

/// Table `x⃗, y_i (i ≠ e), t` of chart `e` and the slots of the `y`'s.
pub fn chart_table(xs: &[String], n: usize, e: usize) -> Result<(Arc<VarTable>, Vec<Option<usize>>)> {
    let mut names = xs.to_vec();
    let mut y_slots = Vec::with_capacity(n);
    for i in 0..n {
        if i == e {
            y_slots.push(None);
        } else {
            y_slots.push(Some(names.len()));
            names.push(chart_var_name(i));
        }
    }
    names.push(crate::poly::NAGATA_VAR.to_string());
    Ok((VarTable::new(names)?, y_slots))
}

/// The Rees generators `a_ε y_i − a_i`, `i ≠ ε`, in the chart table.
pub fn rees_generators(center: &[Poly], table: &Arc<VarTable>, y_slots: &[Option<usize>], e: usize) -> Result<Vec<Poly>> {
    let ae = center[e].embed(table)?;
    let mut out = Vec::new();
    for (i, slot) in y_slots.iter().enumerate() {
        if let Some(j) = slot {
            let ai = center[i].embed(table)?;
            out.push(&(&ae * &Poly::var_at(table, *j, 1)) - &ai);
        }
    }
    Ok(out)
}

fn build_chart(ground: &Arc<VarTable>, xs: &[String], center: &[Poly], e: usize, order: BaseOrder) -> Result<Chart> {
    let n = center.len();
    let (table, y_slots) = chart_table(xs, n, e)?;
    let free = QuotientCtx::free(&table, order);
    let ae = center[e].embed(&table)?;
    let rees_gens = rees_generators(center, &table, &y_slots, e)?;
    let relations = if rees_gens.is_empty() {
        Vec::new()
    } else {
        saturate(&rees_gens, &ae, &free)?
    };
    let ys: Vec<usize> = y_slots.iter().flatten().copied().collect();
    if !ys.is_empty() && !eliminate(&relations, &ys, &free)?.is_empty() {
        return Err(Error::usage(format!(
            "chart {} relations meet the ground ring; the center does not define a blowup of {}",
            e + 1,
            ground.without_t()
        )));
    }
    Ok(Chart {
        index: e,
        ctx: QuotientCtx::new(&table, relations, order)?,
        y_slots,
    })
}

impl BlowupModel {
    /// Ground table `x⃗, t`.
    pub fn ground(&self) -> &Arc<VarTable> {
        &self.ground
    }

    pub fn ground_ctx(&self) -> &QuotientCtx {
        &self.ground_ctx
    }

    pub fn center(&self) -> &[Poly] {
        &self.center
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, e: usize) -> Result<&Chart> {
        self.charts
            .get(e)
            .ok_or_else(|| Error::usage(format!("chart {} does not exist (model has {})", e + 1, self.charts.len())))
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn rees_table(&self) -> &Arc<VarTable> {
        &self.rees
    }

    fn rees_y(&self, i: usize) -> usize {
        self.ground.len() - 1 + i
    }

    /// Homogenize a chart element in the `y`'s using `y_ε`: returns the form
    /// `G` over the Rees table and its degree `k`, with `f = G / y_ε^k`.
    pub fn homogenize(&self, chart: &Chart, f: &Poly) -> Result<(Poly, u32)> {
        chart.ctx.check(&[f])?;
        let ys = chart.y_indices();
        let k = f
            .terms()
            .iter()
            .map(|(m, _)| ys.iter().map(|&j| m.exp(j)).sum::<u32>())
            .max()
            .unwrap_or(0);
        let nx = self.ground.len() - 1;
        let terms = f.terms().iter().map(|(m, c)| {
            let mut e = vec![0u32; self.rees.len()];
            e[..nx].copy_from_slice(&m.exps()[..nx]);
            let mut yd = 0;
            for (i, slot) in chart.y_slots.iter().enumerate() {
                if let Some(j) = slot {
                    e[self.rees_y(i)] = m.exp(*j);
                    yd += m.exp(*j);
                }
            }
            e[self.rees_y(chart.index)] = k - yd;
            e[self.rees.len() - 1] = m.exp(chart.table().len() - 1);
            (Mono::new(e), c.clone())
        });
        Ok((Poly::from_terms(&self.rees, terms), k))
    }

    /// Set `y_ε = 1` in a Rees-table form and read it in chart `ε`.
    pub fn dehomogenize(&self, chart: &Chart, form: &Poly) -> Poly {
        let images: Vec<Poly> = (0..self.rees.len())
            .map(|v| {
                let nx = self.ground.len() - 1;
                if v < nx {
                    Poly::var_at(chart.table(), v, 1)
                } else if v == self.rees.len() - 1 {
                    Poly::var_at(chart.table(), chart.table().len() - 1, 1)
                } else {
                    chart.y(v - nx)
                }
            })
            .collect();
        form.compose(&images, chart.table())
    }

    /// Substitute `y_i ↦ a_i` in a Rees-table form, giving a ground polynomial.
    pub fn evaluate_form(&self, form: &Poly) -> Poly {
        let nx = self.ground.len() - 1;
        let images: Vec<Poly> = (0..self.rees.len())
            .map(|v| {
                if v < nx {
                    Poly::var_at(&self.ground, v, 1)
                } else if v == self.rees.len() - 1 {
                    Poly::var_at(&self.ground, nx, 1)
                } else {
                    self.center[v - nx].clone()
                }
            })
            .collect();
        form.compose(&images, &self.ground)
    }

    /// The chart element as a fraction over the ground table (`y_i ↦ a_i / a_ε`).
    pub fn to_ground(&self, chart: &Chart, f: &Poly) -> Result<TFrac> {
        let (form, k) = self.homogenize(chart, f)?;
        Ok(TFrac {
            num: self.evaluate_form(&form),
            den: self.center[chart.index].pow(k),
        })
    }

    /// Does every relation of every chart vanish under `y_i ↦ a_i / a_ε`?
    pub fn embeddings_sound(&self) -> Result<bool> {
        for chart in &self.charts {
            for r in chart.relations() {
                if !self.to_ground(chart, r)?.num.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Rewrite a chart-`source` element in chart `target`: `num / y_source^k` with
/// `k` minimal.
pub fn transition(model: &BlowupModel, source: usize, target: usize, f: &Poly) -> Result<TFrac> {
    let src = model.chart(source)?;
    let dst = model.chart(target)?;
    if source == target {
        return Ok(TFrac::from_poly(f.clone()));
    }
    let (form, mut k) = model.homogenize(src, f)?;
    let mut num = model.dehomogenize(dst, &form);
    let yv = dst.y_slots[source].expect("source variable exists in other charts");
    let m = Mono::var(dst.table().len(), yv, 1);
    while k > 0 {
        match num.div_mono(&m) {
            Some(q) if !num.is_zero() => {
                num = q;
                k -= 1;
            }
            _ => break,
        }
    }
    if num.is_zero() {
        k = 0;
    }
    Ok(TFrac {
        num,
        den: dst.y(source).pow(k),
    })
}

impl IdealSheaf {
    pub fn new(model: &BlowupModel, per_chart: Vec<Vec<Poly>>) -> Result<IdealSheaf> {
        if per_chart.len() != model.len() {
            return Err(Error::usage(format!(
                "sheaf has {} chart ideals, model has {} charts",
                per_chart.len(),
                model.len()
            )));
        }
        for (chart, gens) in model.charts.iter().zip(&per_chart) {
            let refs: Vec<&Poly> = gens.iter().collect();
            chart.ctx.check(&refs)?;
            if gens.iter().any(|g| g.involves(chart.table().len() - 1)) {
                return Err(Error::usage(format!("chart {} ideal involves t", chart.index + 1)));
            }
        }
        Ok(IdealSheaf { per_chart })
    }

    /// The unit sheaf `(1)` on every chart.
    pub fn unit(model: &BlowupModel) -> IdealSheaf {
        IdealSheaf {
            per_chart: model.charts.iter().map(|c| vec![Poly::one(c.table())]).collect(),
        }
    }

    /// Chartwise equality of ideals.
    pub fn equals(&self, other: &IdealSheaf, model: &BlowupModel) -> Result<bool> {
        for (c, (a, b)) in model.charts.iter().zip(self.per_chart.iter().zip(&other.per_chart)) {
            if !ideals_equal(a, b, &c.ctx)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Is the ideal proper in at least one chart?
    pub fn is_proper(&self, model: &BlowupModel) -> Result<bool> {
        for (c, gens) in model.charts.iter().zip(&self.per_chart) {
            if !ideal_gb(gens, &c.ctx)?.is_unit() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Smallest `m` with `y^m · f ∈ gens + relations`, given that `f` lies in the saturation.
pub fn saturation_power(f: &Poly, gens: &[Poly], y: &Poly, ctx: &QuotientCtx) -> Result<u32> {
    let mut g = f.clone();
    for m in 0.. {
        if member(&g, gens, ctx)? {
            return Ok(m);
        }
        g = &g * y;
    }
    unreachable!()
}

/// Cofactors for `y^m · f ∈ gens + relations`.
pub fn saturation_certificate(f: &Poly, m: u32, gens: &[Poly], y: &Poly, ctx: &QuotientCtx) -> Result<MembershipCert> {
    let g = f * &y.pow(m);
    member_certificate(&g, gens, ctx)?.ok_or_else(|| Error::usage("saturation power does not certify membership"))
}

/// Do the chart ideals agree on every overlap? For each ordered pair
/// `(ε, ε′)`, every generator of `J_ε′` moved to chart `ε` must lie in
/// `(J_ε + P_ε) : y_ε′^∞`. Both orders are checked, which gives equality of the
/// extensions to `D_ε[1/y_ε′]`.
pub fn glue_check(model: &BlowupModel, sheaf: &IdealSheaf) -> Result<GlueReport> {
    let sheaf = IdealSheaf::new(model, sheaf.per_chart.clone())?;
    let n = model.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(s, t)| overlap_checks(model, &sheaf, s, t))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    let mut failing_pair = None;
    for ((s, t), cs) in pairs.into_iter().zip(results) {
        if failing_pair.is_none() && cs.iter().any(|c| c.power.is_none()) {
            failing_pair = Some((s, t));
        }
        checks.extend(cs);
    }
    Ok(GlueReport {
        glued: failing_pair.is_none(),
        failing_pair,
        checks,
    })
}

fn overlap_checks(model: &BlowupModel, sheaf: &IdealSheaf, s: usize, t: usize) -> Result<Vec<OverlapCheck>> {
    let src = &model.charts[s];
    let js = &sheaf.per_chart[s];
    let y = src.y(t);
    let sat = saturate(js, &y, &src.ctx)?;
    let sat_gb = ideal_gb(&sat, &src.ctx)?;
    let mut out = Vec::new();
    for (i, g) in sheaf.per_chart[t].iter().enumerate() {
        let num = transition(model, t, s, g)?.num;
        let power = if sat_gb.contains(&num) {
            Some(saturation_power(&num, js, &y, &src.ctx)?)
        } else {
            None
        };
        out.push(OverlapCheck {
            source: s,
            target: t,
            generator: i,
            num,
            power,
        });
    }
    Ok(out)
}

/// `J_ε = I · D_ε` on every chart, written with small generating sets.
pub fn pullback(model: &BlowupModel, ideal: &[Poly]) -> Result<IdealSheaf> {
    let per_chart = model
        .charts
        .par_iter()
        .map(|c| {
            let gens = ideal.iter().map(|p| c.lift(p)).collect::<Result<Vec<_>>>()?;
            minimal_generators(&gens, &c.ctx)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IdealSheaf { per_chart })
}

/// `J ∩ D` for an ideal `J` of chart `chart`, over the ground table.
pub fn contract_to_ground(model: &BlowupModel, chart: usize, ideal: &[Poly]) -> Result<Vec<Poly>> {
    let c = model.chart(chart)?;
    let kept = eliminate(ideal, &c.y_indices(), &c.ctx)?;
    kept.iter().map(|p| p.embed(&model.ground)).collect()
}
