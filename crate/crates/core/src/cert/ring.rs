//! Witnesses for Nagata-ring questions over one presented ring.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::witness::{
    ensure, exact_quotient, fail, parse, same_list, show, Check, Combination, GroebnerWitness, Primitivity,
    VerifiedBasis,
};
use crate::error::{Error, Result};
use crate::ideal::QuotientCtx;
use crate::nagata::{is_relevant, nagata_member, NagataCert, TFrac};
use crate::poly::{BaseOrder, Order, Poly, VarTable};

/// A presented ring as the verifier sees it: a table and relation generators.
#[derive(Clone, Debug)]
pub struct Ring {
    pub table: Arc<VarTable>,
    pub relations: Vec<Poly>,
    pub base: BaseOrder,
}

impl Ring {
    pub fn of(ctx: &QuotientCtx) -> Ring {
        Ring {
            table: ctx.table().clone(),
            relations: ctx.relations().to_vec(),
            base: ctx.base_order(),
        }
    }

    fn aux(&self) -> (Arc<VarTable>, Poly, Order) {
        let aux = self.table.with_aux(&["w"]);
        let w = Poly::var_at(&aux, 0, 1);
        let order = Order::block(aux.len(), &[0], self.base);
        (aux, w, order)
    }

    fn lift(&self, ps: &[Poly], aux: &Arc<VarTable>) -> Vec<Poly> {
        ps.iter().map(|p| p.embed(aux).expect("aux table extends the ring")).collect()
    }

    /// Generators `w·ideal, w·relations, (1 − w)·target` whose `w`-free part
    /// is `(ideal + relations) ∩ (target)`.
    pub fn colon_system(&self, ideal: &[Poly], target: &Poly) -> (Arc<VarTable>, Vec<Poly>, Order) {
        let (aux, w, order) = self.aux();
        let mut gens: Vec<Poly> = self.lift(ideal, &aux).iter().map(|g| &w * g).collect();
        gens.extend(self.lift(&self.relations, &aux).iter().map(|r| &w * r));
        let one_minus_w = &Poly::one(&aux) - &w;
        gens.push(&one_minus_w * &target.embed(&aux).expect("aux"));
        (aux, gens, order)
    }

    /// Generators `ideal, relations, 1 − w·f` whose `w`-free part is the saturation by `f`.
    pub fn saturation_system(&self, ideal: &[Poly], f: &Poly) -> (Arc<VarTable>, Vec<Poly>, Order) {
        let (aux, w, order) = self.aux();
        let mut gens = self.lift(ideal, &aux);
        gens.extend(self.lift(&self.relations, &aux));
        gens.push(&Poly::one(&aux) - &(&w * &f.embed(&aux).expect("aux")));
        (aux, gens, order)
    }

    /// Generators `w·a, (1 − w)·b, relations` whose `w`-free part is the intersection.
    pub fn intersection_system(&self, a: &[Poly], b: &[Poly]) -> (Arc<VarTable>, Vec<Poly>, Order) {
        let (aux, w, order) = self.aux();
        let one_minus_w = &Poly::one(&aux) - &w;
        let mut gens: Vec<Poly> = self.lift(a, &aux).iter().map(|g| &w * g).collect();
        gens.extend(self.lift(b, &aux).iter().map(|g| &one_minus_w * g));
        gens.extend(self.lift(&self.relations, &aux));
        (aux, gens, order)
    }

    pub fn with_relations(&self, gens: &[Poly]) -> Vec<Poly> {
        gens.iter().chain(&self.relations).cloned().collect()
    }

    pub fn order(&self) -> Order {
        Order::Base(self.base)
    }
}

/// The colon ideal `(ideal + relations) : target` and its content ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColonContent {
    pub quotients: Vec<String>,
    pub colon: GroebnerWitness,
    pub content: GroebnerWitness,
}

fn content_list(ps: &[Poly]) -> Result<Vec<Poly>> {
    let mut out: Vec<Poly> = Vec::new();
    for p in ps {
        for (_, c) in p.coeffs_in_t()? {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

impl ColonContent {
    pub fn prove(ring: &Ring, ideal: &[Poly], target: &Poly) -> Result<ColonContent> {
        let (aux, gens, order) = ring.colon_system(ideal, target);
        let colon = GroebnerWitness::compute(&aux, &gens, &order);
        let vb = colon.check(&aux, &gens, &order).map_err(Error::Consistency)?;
        let quotients = colon_quotients(&vb, ring, target).map_err(Error::Consistency)?;
        let content = ring.with_relations(&content_list(&quotients)?);
        Ok(ColonContent {
            quotients: show(&quotients),
            content: GroebnerWitness::compute(&ring.table, &content, &ring.order()),
            colon,
        })
    }

    /// Check the refutation: the content of the colon ideal is proper.
    pub fn check(&self, ring: &Ring, ideal: &[Poly], target: &Poly) -> Check {
        let quotients = check_colon(&self.colon, ring, ideal, target)?;
        ensure(same_list(&quotients, &self.quotients, &ring.table)?, || {
            "colon quotients differ from the stated ones".into()
        })?;
        let content = ring.with_relations(&content_list(&quotients).map_err(|e| e.to_string())?);
        let vb = self.content.check(&ring.table, &content, &ring.order())?;
        ensure(!vb.is_unit(), || "content ideal of the colon is the unit ideal".into())
    }
}

/// Verify a colon-system basis witness and return generators of the colon ideal.
pub fn check_colon(w: &GroebnerWitness, ring: &Ring, ideal: &[Poly], target: &Poly) -> Check<Vec<Poly>> {
    ensure(!target.is_zero(), || "colon by zero".into())?;
    let (aux, gens, order) = ring.colon_system(ideal, target);
    let vb = w.check(&aux, &gens, &order)?;
    colon_quotients(&vb, ring, target)
}

fn colon_quotients(vb: &VerifiedBasis, ring: &Ring, target: &Poly) -> Check<Vec<Poly>> {
    let mut out = Vec::new();
    for h in vb.free_of(&[0], &ring.table)? {
        let q = exact_quotient(&h, target, &ring.order())
            .ok_or_else(|| format!("`{h}` is not a multiple of `{target}`"))?;
        out.push(q);
    }
    Ok(out)
}

/// `gens ⊆ ideal + relations`, shown by combinations, or refuted by a basis
/// of `ideal + relations` that leaves generator `outside` unreduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Inclusion {
    Contained { combinations: Vec<Combination> },
    NotContained { outside: usize, basis: GroebnerWitness },
}

impl Inclusion {
    pub fn prove(gens: &[Poly], ideal: &[Poly], ctx: &QuotientCtx) -> Result<Inclusion> {
        let mut combinations = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            match Combination::prove(g, ideal, ctx)? {
                Some(c) => combinations.push(c),
                None => {
                    let ring = Ring::of(ctx);
                    return Ok(Inclusion::NotContained {
                        outside: i + 1,
                        basis: GroebnerWitness::compute(&ring.table, &ring.with_relations(ideal), &ring.order()),
                    });
                }
            }
        }
        Ok(Inclusion::Contained { combinations })
    }

    pub fn holds(&self) -> bool {
        matches!(self, Inclusion::Contained { .. })
    }

    /// Check and return whether the inclusion holds.
    pub fn check(&self, ring: &Ring, gens: &[Poly], ideal: &[Poly]) -> Check<bool> {
        let all = ring.with_relations(ideal);
        match self {
            Inclusion::Contained { combinations } => {
                ensure(combinations.len() == gens.len(), || "one combination per generator".into())?;
                for (c, g) in combinations.iter().zip(gens) {
                    c.check(&ring.table, g, &all)?;
                }
                Ok(true)
            }
            Inclusion::NotContained { outside, basis } => {
                let g = gens.get(outside.wrapping_sub(1)).ok_or("refuted generator does not exist")?;
                let vb = basis.check(&ring.table, &all, &ring.order())?;
                ensure(!vb.normal_form(g).is_zero(), || format!("`{g}` does lie in the ideal"))?;
                Ok(false)
            }
        }
    }
}

/// Equality of two ideals of a presented ring as two inclusions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Equality {
    pub forward: Inclusion,
    pub backward: Inclusion,
}

impl Equality {
    pub fn prove(a: &[Poly], b: &[Poly], ctx: &QuotientCtx) -> Result<Equality> {
        Ok(Equality {
            forward: Inclusion::prove(a, b, ctx)?,
            backward: Inclusion::prove(b, a, ctx)?,
        })
    }

    pub fn holds(&self) -> bool {
        self.forward.holds() && self.backward.holds()
    }

    pub fn check(&self, ring: &Ring, a: &[Poly], b: &[Poly]) -> Check<bool> {
        let f = self.forward.check(ring, a, b)?;
        let g = self.backward.check(ring, b, a)?;
        Ok(f && g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NagataWitness {
    /// `u = f / g`, `g` primitive, `num·g − f·den ∈ relations`.
    Member {
        f: String,
        g: String,
        primitivity: Primitivity,
        identity: Combination,
    },
    /// The denominator ideal `(den + relations) : num` has proper content.
    NonMember { refutation: ColonContent },
}

impl NagataWitness {
    pub fn from_cert(cert: &NagataCert, u: &TFrac, ctx: &QuotientCtx) -> Result<NagataWitness> {
        let ring = Ring::of(ctx);
        Ok(match cert {
            NagataCert::Member { f, g, .. } => NagataWitness::Member {
                f: f.to_string(),
                g: g.to_string(),
                primitivity: Primitivity::prove(g, ctx)?
                    .ok_or_else(|| Error::Consistency("multiplier is not primitive".into()))?,
                identity: Combination::must(&(&(&u.num * g) - &(f * &u.den)), &[], ctx)?,
            },
            NagataCert::NonMember { .. } => NagataWitness::NonMember {
                refutation: ColonContent::prove(&ring, std::slice::from_ref(&u.den), &u.num)?,
            },
        })
    }

    pub fn prove(u: &TFrac, ctx: &QuotientCtx) -> Result<NagataWitness> {
        NagataWitness::from_cert(&nagata_member(u, ctx)?, u, ctx)
    }

    pub fn is_member(&self) -> bool {
        matches!(self, NagataWitness::Member { .. })
    }

    /// Check against `u`; returns `(f, g)` for members.
    pub fn check(&self, ring: &Ring, u: &TFrac) -> Check<Option<(Poly, Poly)>> {
        match self {
            NagataWitness::Member {
                f,
                g,
                primitivity,
                identity,
            } => {
                let f = parse(f, &ring.table)?;
                let g = parse(g, &ring.table)?;
                primitivity.check(&ring.table, &g, &ring.relations)?;
                let target = &(&u.num * &g) - &(&f * &u.den);
                identity.check(&ring.table, &target, &ring.relations)?;
                Ok(Some((f, g)))
            }
            NagataWitness::NonMember { refutation } => {
                if u.num.is_zero() {
                    return fail("zero is a member of every Nagata ring");
                }
                refutation.check(ring, std::slice::from_ref(&u.den), &u.num)?;
                Ok(None)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelevanceStatus {
    Relevant,
    NotRelevant,
    GeneratorNotInRing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientWitness {
    pub generator: usize,
    pub degree: u32,
    pub coefficient: String,
    pub multiplier: String,
    pub primitivity: Primitivity,
    pub identity: Combination,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailingCoefficient {
    pub generator: usize,
    pub degree: u32,
    pub coefficient: String,
    pub refutation: ColonContent,
}

/// Relevance of the ideal generated by some elements of `R(t)`. Generator
/// numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelevanceWitness {
    pub status: RelevanceStatus,
    pub generators: Vec<NagataWitness>,
    pub normalized: Vec<String>,
    pub content: Vec<String>,
    pub coefficients: Vec<CoefficientWitness>,
    pub failing: Option<FailingCoefficient>,
}

/// Verified relevance data.
pub struct Relevance {
    pub status: RelevanceStatus,
    pub normalized: Vec<Poly>,
    pub content: Vec<Poly>,
}

impl RelevanceWitness {
    pub fn prove(gens: &[TFrac], ctx: &QuotientCtx) -> Result<RelevanceWitness> {
        let ring = Ring::of(ctx);
        let generators = gens
            .iter()
            .map(|u| NagataWitness::prove(u, ctx))
            .collect::<Result<Vec<_>>>()?;
        if generators.iter().any(|w| !w.is_member()) {
            return Ok(RelevanceWitness {
                status: RelevanceStatus::GeneratorNotInRing,
                generators,
                normalized: Vec::new(),
                content: Vec::new(),
                coefficients: Vec::new(),
                failing: None,
            });
        }
        let report = is_relevant(gens, ctx)?;
        let normalized = report.normalized.clone();
        let content = content_list(&normalized)?;
        let mut coefficients = Vec::new();
        let mut failing = None;
        for (i, f) in normalized.iter().enumerate() {
            for (d, c) in f.coeffs_in_t()?.into_iter().rev() {
                let found = report
                    .witnesses
                    .iter()
                    .find(|w| w.generator == i && w.degree == d)
                    .map(|w| w.multiplier.g.clone());
                let g = match found {
                    Some(g) => g,
                    None if ctx.is_zero(&c) => Poly::one(ctx.table()),
                    None => {
                        if report.failing_coefficient.as_ref() == Some(&c) && failing.is_none() {
                            failing = Some(FailingCoefficient {
                                generator: i + 1,
                                degree: d,
                                coefficient: c.to_string(),
                                refutation: ColonContent::prove(&ring, &normalized, &c)?,
                            });
                        }
                        continue;
                    }
                };
                coefficients.push(CoefficientWitness {
                    generator: i + 1,
                    degree: d,
                    coefficient: c.to_string(),
                    multiplier: g.to_string(),
                    primitivity: Primitivity::prove(&g, ctx)?
                        .ok_or_else(|| Error::Consistency("coefficient multiplier is not primitive".into()))?,
                    identity: Combination::must(&(&g * &c), &normalized, ctx)?,
                });
            }
        }
        let status = if report.relevant {
            RelevanceStatus::Relevant
        } else {
            RelevanceStatus::NotRelevant
        };
        if !report.relevant && failing.is_none() {
            return Err(Error::Consistency("not-relevant verdict without a failing coefficient".into()));
        }
        Ok(RelevanceWitness {
            status,
            generators,
            normalized: show(&normalized),
            content: show(&content),
            coefficients,
            failing,
        })
    }

    pub fn check(&self, ring: &Ring, gens: &[TFrac]) -> Check<Relevance> {
        ensure(self.generators.len() == gens.len(), || "one membership witness per generator".into())?;
        let mut normalized = Vec::new();
        for (i, (w, u)) in self.generators.iter().zip(gens).enumerate() {
            match w.check(ring, u).map_err(|e| format!("generator {}: {e}", i + 1))? {
                Some((f, _)) => normalized.push(f),
                None => {
                    ensure(self.status == RelevanceStatus::GeneratorNotInRing, || {
                        format!("generator {} is not in the Nagata ring", i + 1)
                    })?;
                    return Ok(Relevance {
                        status: self.status,
                        normalized: Vec::new(),
                        content: Vec::new(),
                    });
                }
            }
        }
        ensure(self.status != RelevanceStatus::GeneratorNotInRing, || {
            "all generators are members".into()
        })?;
        ensure(same_list(&normalized, &self.normalized, &ring.table)?, || {
            "normalized generators differ from the membership witnesses".into()
        })?;
        let content = content_list(&normalized).map_err(|e| e.to_string())?;
        ensure(same_list(&content, &self.content, &ring.table)?, || "content list is wrong".into())?;
        let ideal = ring.with_relations(&normalized);
        match self.status {
            RelevanceStatus::Relevant => {
                for (i, f) in normalized.iter().enumerate() {
                    for (d, c) in f.coeffs_in_t().map_err(|e| e.to_string())? {
                        let w = self
                            .coefficients
                            .iter()
                            .find(|w| w.generator == i + 1 && w.degree == d)
                            .ok_or_else(|| format!("no witness for coefficient of t^{d} in generator {}", i + 1))?;
                        ensure(parse(&w.coefficient, &ring.table)? == c, || {
                            format!("coefficient of t^{d} in generator {} is misstated", i + 1)
                        })?;
                        let g = parse(&w.multiplier, &ring.table)?;
                        w.primitivity.check(&ring.table, &g, &ring.relations)?;
                        w.identity.check(&ring.table, &(&g * &c), &ideal)?;
                    }
                }
            }
            RelevanceStatus::NotRelevant => {
                let fc = self.failing.as_ref().ok_or("not-relevant verdict without a failing coefficient")?;
                let f = normalized
                    .get(fc.generator.wrapping_sub(1))
                    .ok_or("failing coefficient names a missing generator")?;
                let c = f
                    .coeffs_in_t()
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .find(|(d, _)| *d == fc.degree)
                    .map(|(_, c)| c)
                    .ok_or("failing coefficient names a missing degree")?;
                ensure(parse(&fc.coefficient, &ring.table)? == c, || "failing coefficient is misstated".into())?;
                fc.refutation.check(ring, &normalized, &c)?;
            }
            RelevanceStatus::GeneratorNotInRing => unreachable!(),
        }
        Ok(Relevance {
            status: self.status,
            normalized,
            content,
        })
    }
}
