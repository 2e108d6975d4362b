//! The Nagata function ring `R(t)` of a presented ring `R`: primitivity,
//! the spacing construction, membership with certificates, units, and the
//! relevance test for finitely generated ideals.
//!
//! Every decision reduces to one question: does an ideal `J ⊆ R[t]` contain a
//! primitive polynomial? It does exactly when the coefficients of its
//! generators generate the unit ideal, because spacing the generators out in
//! `t` produces an element of `J` whose coefficients are all of them.

use crate::error::{Error, Result};
use crate::ideal::{
    colon, content_of, ideal_gb, is_unit_ideal, member_certificate, MembershipCert, QuotientCtx,
};
use crate::poly::{Mono, Poly, Rat};

use num_traits::One;

/// An element `num / den` of `K(t)`, `K` the fraction field of `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TFrac {
    pub num: Poly,
    pub den: Poly,
}

impl TFrac {
    /// Checked constructor: same table as `ctx`, and `den` nonzero in `R`.
    pub fn new(num: Poly, den: Poly, ctx: &QuotientCtx) -> Result<TFrac> {
        ctx.check(&[&num, &den])?;
        if ctx.is_zero(&den) {
            return Err(Error::usage(format!("denominator `{den}` is zero in the ring")));
        }
        Ok(TFrac { num, den })
    }

    pub fn from_poly(p: Poly) -> TFrac {
        let den = Poly::one(p.table());
        TFrac { num: p, den }
    }

    pub fn is_zero(&self, ctx: &QuotientCtx) -> bool {
        ctx.is_zero(&self.num)
    }

    pub fn recip(&self, ctx: &QuotientCtx) -> Result<TFrac> {
        TFrac::new(self.den.clone(), self.num.clone(), ctx)
    }

    /// Equality in `K(t)` by cross-multiplication modulo the relations.
    pub fn equals(&self, other: &TFrac, ctx: &QuotientCtx) -> bool {
        ctx.is_zero(&(&(&self.num * &other.den) - &(&other.num * &self.den)))
    }

    pub fn add(&self, other: &TFrac) -> TFrac {
        TFrac {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn mul(&self, other: &TFrac) -> TFrac {
        TFrac {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> TFrac {
        TFrac {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    pub fn embed(&self, table: &std::sync::Arc<crate::VarTable>) -> Result<TFrac> {
        Ok(TFrac {
            num: self.num.embed(table)?,
            den: self.den.embed(table)?,
        })
    }
}

impl std::fmt::Display for TFrac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `1 ∈ content(g) + relations`, with `g`'s coefficients taken in ascending
/// `t`-degree order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityWitness {
    pub cert: MembershipCert,
}

/// A primitive `g` with `g · target ∈ ideal + relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplier {
    pub g: Poly,
    /// `g · target = Σ cofactors[i] · ideal[i] + Σ rel[k] · relations[k]`
    pub combination: MembershipCert,
    pub primitivity: PrimitivityWitness,
}

/// Outcome of searching `(ideal + relations) : target` for a primitive element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultiplierSearch {
    Found(Multiplier),
    /// The colon ideal and the reduced basis of its content ideal, which is proper.
    Refuted { colon: Vec<Poly>, content_gb: Vec<Poly> },
}

/// Membership verdict for `R(t)` with its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NagataCert {
    /// `u = f / g` with `g` primitive: `num · g − f · den = Σ rel[k] · relations[k]`.
    Member {
        f: Poly,
        g: Poly,
        primitivity: PrimitivityWitness,
        relation_cofactors: Vec<Poly>,
    },
    /// The denominator ideal `(den) : num` has a proper content ideal.
    NonMember {
        denominator_ideal: Vec<Poly>,
        content_gb: Vec<Poly>,
    },
}

impl NagataCert {
    pub fn is_member(&self) -> bool {
        matches!(self, NagataCert::Member { .. })
    }

    /// `(f, g)` of a member verdict.
    pub fn fraction(&self) -> Option<(&Poly, &Poly)> {
        match self {
            NagataCert::Member { f, g, .. } => Some((f, g)),
            NagataCert::NonMember { .. } => None,
        }
    }
}

/// Is `f ∈ R[t]` primitive (coefficients generate the unit ideal of `R`)?
pub fn is_primitive(f: &Poly, ctx: &QuotientCtx) -> Result<bool> {
    let coeffs = crate::ideal::content_ideal(f, ctx)?;
    if coeffs.is_empty() {
        return Ok(false);
    }
    is_unit_ideal(&coeffs, ctx)
}

/// Cofactors for `1 ∈ content(g) + relations`, if `g` is primitive.
pub fn primitivity_witness(g: &Poly, ctx: &QuotientCtx) -> Result<Option<PrimitivityWitness>> {
    let coeffs = crate::ideal::content_ideal(g, ctx)?;
    if coeffs.is_empty() {
        return Ok(None);
    }
    let one = Poly::one(ctx.table());
    Ok(member_certificate(&one, &coeffs, ctx)?.map(|cert| PrimitivityWitness { cert }))
}

/// `Σ fs[i] · t^{i·c}` with `c = 1 + max deg_t`; the coefficient blocks do not
/// overlap, so the content of the result is the sum of the inputs' contents.
pub fn spaced_combination(fs: &[Poly], ctx: &QuotientCtx) -> Result<Poly> {
    let first = fs
        .first()
        .ok_or_else(|| Error::usage("spaced combination of an empty list"))?;
    let refs: Vec<&Poly> = fs.iter().collect();
    ctx.check(&refs)?;
    let ti = ctx
        .table()
        .t_index()
        .ok_or_else(|| Error::usage("ring has no Nagata variable t"))?;
    let c = 1 + fs.iter().map(|f| f.t_degree()).max().unwrap_or(0);
    let mut acc = Poly::zero(first.table());
    for (i, f) in fs.iter().enumerate() {
        let shift = Mono::var(ctx.table().len(), ti, c * i as u32);
        acc = &acc + &f.mul_term(&shift, &Rat::one());
    }
    Ok(acc)
}

fn search_key(p: &Poly) -> (u32, usize) {
    (p.t_degree(), p.len())
}

/// Pick a primitive element of the ideal generated by `cands` (whose content
/// is known to be the unit ideal): a single primitive generator if one exists,
/// otherwise the spaced combination of a greedily minimized subset.
fn choose_primitive(cands: &[Poly], ctx: &QuotientCtx) -> Result<Poly> {
    let mut sorted: Vec<&Poly> = cands.iter().collect();
    sorted.sort_by_key(|p| search_key(p));
    for p in &sorted {
        if is_primitive(p, ctx)? {
            return Ok((*p).clone());
        }
    }
    let mut keep: Vec<Poly> = sorted.into_iter().cloned().collect();
    let mut i = 0;
    while i < keep.len() {
        let mut rest = keep.clone();
        rest.remove(i);
        if !rest.is_empty() && is_unit_ideal(&content_of(&rest, ctx)?, ctx)? {
            keep = rest;
        } else {
            i += 1;
        }
    }
    spaced_combination(&keep, ctx)
}

/// Decide whether `(ideal + relations) : target` contains a primitive
/// polynomial, and produce one with its certificates when it does.
pub fn primitive_multiplier(target: &Poly, ideal: &[Poly], ctx: &QuotientCtx) -> Result<MultiplierSearch> {
    let j = colon(ideal, target, ctx)?;
    let cands: Vec<Poly> = j.iter().filter(|p| !ctx.is_zero(p)).cloned().collect();
    let content = content_of(&cands, ctx)?;
    let content_gb = ideal_gb(&content, ctx)?;
    if cands.is_empty() || !content_gb.is_unit() {
        return Ok(MultiplierSearch::Refuted {
            colon: j,
            content_gb: content_gb.basis().to_vec(),
        });
    }
    let g = choose_primitive(&cands, ctx)?;
    let combination = member_certificate(&(&g * target), ideal, ctx)?
        .expect("a colon element times the target lies in the ideal");
    let primitivity = primitivity_witness(&g, ctx)?.expect("chosen multiplier is primitive");
    Ok(MultiplierSearch::Found(Multiplier {
        g,
        combination,
        primitivity,
    }))
}

/// Membership of `u` in `R(t)`.
pub fn nagata_member(u: &TFrac, ctx: &QuotientCtx) -> Result<NagataCert> {
    ctx.check(&[&u.num, &u.den])?;
    if ctx.is_zero(&u.den) {
        return Err(Error::usage("denominator is zero in the ring"));
    }
    if ctx.is_zero(&u.num) {
        let one = Poly::one(ctx.table());
        return member_with(u, Poly::zero(ctx.table()), one, ctx);
    }
    match primitive_multiplier(&u.num, std::slice::from_ref(&u.den), ctx)? {
        MultiplierSearch::Found(m) => {
            let f = ctx.normal_form(&m.combination.cofactors[0]);
            member_with(u, f, m.g, ctx)
        }
        MultiplierSearch::Refuted { colon, content_gb } => Ok(NagataCert::NonMember {
            denominator_ideal: colon,
            content_gb,
        }),
    }
}

fn member_with(u: &TFrac, f: Poly, g: Poly, ctx: &QuotientCtx) -> Result<NagataCert> {
    let primitivity = primitivity_witness(&g, ctx)?.expect("multiplier is primitive");
    let diff = &(&u.num * &g) - &(&f * &u.den);
    let relation_cofactors = ctx
        .relation_cofactors(&diff)
        .expect("u·g = f holds modulo the relations");
    Ok(NagataCert::Member {
        f,
        g,
        primitivity,
        relation_cofactors,
    })
}

/// Is `u` a unit of `R(t)`? Both `u` and `1/u` must be members.
pub fn nagata_is_unit(u: &TFrac, ctx: &QuotientCtx) -> Result<bool> {
    Ok(nagata_unit_certs(u, ctx)?.is_some())
}

/// Membership certificates for `u` and `1/u` when `u` is a unit.
pub fn nagata_unit_certs(u: &TFrac, ctx: &QuotientCtx) -> Result<Option<(NagataCert, NagataCert)>> {
    if u.is_zero(ctx) {
        return Ok(None);
    }
    let a = nagata_member(u, ctx)?;
    if !a.is_member() {
        return Ok(None);
    }
    let b = nagata_member(&u.recip(ctx)?, ctx)?;
    Ok(b.is_member().then_some((a, b)))
}

/// Evidence that one coefficient `c` of a normalized generator lies in `I·R(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientWitness {
    pub generator: usize,
    pub degree: u32,
    pub multiplier: Multiplier,
}

/// Result of the relevance test for `I = (gens) R(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevanceReport {
    pub relevant: bool,
    /// Membership certificates normalizing each generator to `f_i ∈ R[t]`.
    pub generator_certs: Vec<NagataCert>,
    /// `f_i = u_i · g_i`, generating the same ideal of `R(t)`.
    pub normalized: Vec<Poly>,
    /// All coefficients of the normalized generators: the ideal `C` with `I ⊆ C·R(t)`.
    pub content_gens: Vec<Poly>,
    pub witnesses: Vec<CoefficientWitness>,
    pub failing_coefficient: Option<Poly>,
    /// Colon ideal `I₀ : c` and its proper content basis, for the failing coefficient.
    pub failure: Option<(Vec<Poly>, Vec<Poly>)>,
}

/// Normalize generators of an ideal of `R(t)` into `R[t]`.
pub fn normalize_generators(gens: &[TFrac], ctx: &QuotientCtx) -> Result<(Vec<NagataCert>, Vec<Poly>)> {
    let mut certs = Vec::with_capacity(gens.len());
    let mut fs = Vec::with_capacity(gens.len());
    for u in gens {
        let cert = nagata_member(u, ctx)?;
        match cert.fraction() {
            Some((f, _)) => fs.push(f.clone()),
            None => {
                return Err(Error::NotInNagataRing {
                    chart: None,
                    cert: Box::new(cert),
                })
            }
        }
        certs.push(cert);
    }
    Ok((certs, fs))
}

/// Is the ideal of `R(t)` generated by `gens` relevant, i.e. generated by
/// elements of `R`? With `f_i` the normalized generators and `C` their
/// coefficients, `I ⊆ C·R(t)` always holds, and `I` is relevant exactly when
/// every coefficient lies in `I·R(t)`.
pub fn is_relevant(gens: &[TFrac], ctx: &QuotientCtx) -> Result<RelevanceReport> {
    let (generator_certs, normalized) = normalize_generators(gens, ctx)?;
    let content_gens = content_of(&normalized, ctx)?;
    let mut witnesses = Vec::new();
    for (i, f) in normalized.iter().enumerate() {
        for (d, c) in f.coeffs_in_t()?.into_iter().rev() {
            if ctx.is_zero(&c) {
                continue;
            }
            match primitive_multiplier(&c, &normalized, ctx)? {
                MultiplierSearch::Found(multiplier) => witnesses.push(CoefficientWitness {
                    generator: i,
                    degree: d,
                    multiplier,
                }),
                MultiplierSearch::Refuted { colon, content_gb } => {
                    return Ok(RelevanceReport {
                        relevant: false,
                        generator_certs,
                        normalized,
                        content_gens,
                        witnesses,
                        failing_coefficient: Some(c),
                        failure: Some((colon, content_gb)),
                    })
                }
            }
        }
    }
    Ok(RelevanceReport {
        relevant: true,
        generator_certs,
        normalized,
        content_gens,
        witnesses,
        failing_coefficient: None,
        failure: None,
    })
}

/// Is `h ∈ (gens)·R(t)` for `h, gens ⊆ R[t]`?
pub fn member_of_extension(h: &Poly, gens: &[Poly], ctx: &QuotientCtx) -> Result<bool> {
    if ctx.is_zero(h) {
        return Ok(true);
    }
    Ok(matches!(
        primitive_multiplier(h, gens, ctx)?,
        MultiplierSearch::Found(_)
    ))
}

/// `I·R(t) ∩ R` for a relevant ideal: the content ideal of its normalized
/// generators. Not-relevant ideals are rejected with their report.
pub fn contract_extension(gens: &[TFrac], ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    let report = is_relevant(gens, ctx)?;
    if !report.relevant {
        return Err(Error::NotRelevant {
            chart: None,
            report: Box::new(report),
        });
    }
    Ok(ideal_gb(&report.content_gens, ctx)?.basis().to_vec())
}
