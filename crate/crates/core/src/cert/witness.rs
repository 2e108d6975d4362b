//! Primitive witnesses and their independent checks.
//!
//! Checks use only polynomial arithmetic and a plain division algorithm
//! written here; they never run a Gröbner basis computation.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ideal::{member_certificate, GroebnerBasis, QuotientCtx};
use crate::nagata::primitivity_witness;
use crate::poly::{BaseOrder, Order, Poly, VarTable};

/// Outcome of a check: `Err` names the first failing condition.
pub type Check<T = ()> = std::result::Result<T, String>;

pub fn fail<T>(msg: impl Into<String>) -> Check<T> {
    Err(msg.into())
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn table_of(names: &[String]) -> Check<Arc<VarTable>> {
    VarTable::new(names.to_vec()).map_err(|e| format!("variable table: {e}"))
}

pub fn parse(s: &str, table: &Arc<VarTable>) -> Check<Poly> {
    Poly::parse(s, table).map_err(|e| format!("polynomial `{s}`: {e}"))
}

pub fn parse_all(ss: &[String], table: &Arc<VarTable>) -> Check<Vec<Poly>> {
    ss.iter().map(|s| parse(s, table)).collect()
}

pub fn show(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

pub fn names(table: &VarTable) -> Vec<String> {
    table.names().to_vec()
}

/// Are two lists of polynomials equal entry by entry?
pub fn same_list(a: &[Poly], b: &[String], table: &Arc<VarTable>) -> Check<bool> {
    let b = parse_all(b, table)?;
    Ok(a == b.as_slice())
}

/// Monomial order in files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum OrderSpec {
    Lex,
    Grevlex,
    Block { eliminate: Vec<String>, inner: BaseOrder },
}

impl OrderSpec {
    pub fn of(order: &Order, table: &VarTable) -> OrderSpec {
        match order {
            Order::Base(BaseOrder::Lex) => OrderSpec::Lex,
            Order::Base(BaseOrder::Grevlex) => OrderSpec::Grevlex,
            Order::Block { eliminated, inner } => OrderSpec::Block {
                eliminate: eliminated
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e)
                    .map(|(i, _)| table.name(i).to_string())
                    .collect(),
                inner: *inner,
            },
        }
    }

    pub fn to_order(&self, table: &VarTable) -> Check<Order> {
        Ok(match self {
            OrderSpec::Lex => Order::LEX,
            OrderSpec::Grevlex => Order::GREVLEX,
            OrderSpec::Block { eliminate, inner } => {
                let idx = eliminate
                    .iter()
                    .map(|n| table.index_of(n).ok_or_else(|| format!("order names unknown variable `{n}`")))
                    .collect::<Check<Vec<_>>>()?;
                Order::block(table.len(), &idx, *inner)
            }
        })
    }
}

/// `target = Σ cofactors[i] · gens[i]` as an identity of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Combination {
    pub target: String,
    pub gens: Vec<String>,
    pub cofactors: Vec<String>,
}

impl Combination {
    pub fn new(target: &Poly, gens: &[Poly], cofactors: &[Poly]) -> Combination {
        Combination {
            target: target.to_string(),
            gens: show(gens),
            cofactors: show(cofactors),
        }
    }

    /// Membership of `target` in `gens + relations` with cofactors, if it holds.
    pub fn prove(target: &Poly, gens: &[Poly], ctx: &QuotientCtx) -> crate::Result<Option<Combination>> {
        Ok(member_certificate(target, gens, ctx)?.map(|cert| {
            let all: Vec<Poly> = gens.iter().chain(ctx.relations()).cloned().collect();
            let cofs: Vec<Poly> = cert.cofactors.into_iter().chain(cert.relation_cofactors).collect();
            Combination::new(target, &all, &cofs)
        }))
    }

    /// Like [`Combination::prove`], for a membership known to hold.
    pub fn must(target: &Poly, gens: &[Poly], ctx: &QuotientCtx) -> crate::Result<Combination> {
        Combination::prove(target, gens, ctx)?
            .ok_or_else(|| crate::Error::Consistency(format!("`{target}` was expected in the ideal")))
    }

    /// Check the identity and that target and generators are the expected ones.
    pub fn check(&self, table: &Arc<VarTable>, target: &Poly, gens: &[Poly]) -> Check {
        ensure(parse(&self.target, table)? == *target, || {
            format!("combination proves `{}` instead of `{target}`", self.target)
        })?;
        ensure(same_list(gens, &self.gens, table)?, || "combination uses unexpected generators".into())?;
        ensure(self.cofactors.len() == gens.len(), || "combination has the wrong number of cofactors".into())?;
        let cofs = parse_all(&self.cofactors, table)?;
        let mut sum = Poly::zero(table);
        for (c, g) in cofs.iter().zip(gens) {
            sum = &sum + &(c * g);
        }
        ensure(sum == *target, || format!("cofactors do not reproduce `{target}`"))
    }
}

/// `1 = Σ cofactors · (t-coefficients of poly, ascending) + Σ cofactors · relations`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Primitivity {
    pub poly: String,
    pub cofactors: Vec<String>,
}

impl Primitivity {
    pub fn prove(p: &Poly, ctx: &QuotientCtx) -> crate::Result<Option<Primitivity>> {
        Ok(primitivity_witness(p, ctx)?.map(|w| {
            let cofs: Vec<Poly> = w.cert.cofactors.into_iter().chain(w.cert.relation_cofactors).collect();
            Primitivity {
                poly: p.to_string(),
                cofactors: show(&cofs),
            }
        }))
    }

    pub fn check(&self, table: &Arc<VarTable>, p: &Poly, relations: &[Poly]) -> Check {
        ensure(parse(&self.poly, table)? == *p, || {
            format!("primitivity witness is for `{}`, not `{p}`", self.poly)
        })?;
        let coeffs: Vec<Poly> = p
            .coeffs_in_t()
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        let gens: Vec<&Poly> = coeffs.iter().chain(relations).collect();
        ensure(self.cofactors.len() == gens.len(), || {
            format!("primitivity witness for `{p}` has the wrong number of cofactors")
        })?;
        let cofs = parse_all(&self.cofactors, table)?;
        let mut sum = Poly::zero(table);
        for (c, g) in cofs.iter().zip(gens) {
            sum = &sum + &(c * g);
        }
        ensure(sum.is_one(), || format!("`{p}` is not shown primitive: cofactors do not give 1"))
    }
}

/// A reduced Gröbner basis of `gens` under `order`, with the cofactors
/// expressing each basis element in the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroebnerWitness {
    pub variables: Vec<String>,
    pub order: OrderSpec,
    pub gens: Vec<String>,
    pub basis: Vec<String>,
    pub cofactors: Vec<Vec<String>>,
}

impl GroebnerWitness {
    pub fn compute(table: &Arc<VarTable>, gens: &[Poly], order: &Order) -> GroebnerWitness {
        let gb = GroebnerBasis::compute_tracked(table, gens, order);
        GroebnerWitness {
            variables: names(table),
            order: OrderSpec::of(order, table),
            gens: show(gens),
            basis: show(gb.basis()),
            cofactors: gb
                .cofactors()
                .expect("tracked")
                .iter()
                .map(|c| show(c))
                .collect(),
        }
    }

    /// Verify the witness for the expected table, generators and order.
    pub fn check(&self, table: &Arc<VarTable>, gens: &[Poly], order: &Order) -> Check<VerifiedBasis> {
        ensure(self.variables == names(table), || {
            format!("basis witness is over [{}], expected {table}", self.variables.join(", "))
        })?;
        ensure(self.order == OrderSpec::of(order, table), || "basis witness uses an unexpected monomial order".into())?;
        let table = table.clone();
        let order = order.clone();
        let gens_expected: Vec<Poly> = gens
            .iter()
            .map(|g| g.embed(&table).map_err(|e| e.to_string()))
            .collect::<Check<_>>()?;
        ensure(same_list(&gens_expected, &self.gens, &table)?, || "basis witness has unexpected generators".into())?;
        let basis = parse_all(&self.basis, &table)?;
        ensure(self.cofactors.len() == basis.len(), || "basis witness: one cofactor list per element".into())?;
        for (b, cofs) in basis.iter().zip(&self.cofactors) {
            ensure(cofs.len() == gens_expected.len(), || "basis witness: cofactor count".into())?;
            let cofs = parse_all(cofs, &table)?;
            let mut sum = Poly::zero(&table);
            for (c, g) in cofs.iter().zip(&gens_expected) {
                sum = &sum + &(c * g);
            }
            ensure(sum == *b, || format!("basis element `{b}` is not the stated combination"))?;
        }
        let vb = VerifiedBasis { table, order, basis };
        for b in &vb.basis {
            let (lm, lc) = b.leading_term(&vb.order).ok_or("zero basis element")?;
            ensure(lc == &crate::Rat::from_integer(1.into()), || format!("basis element `{b}` is not monic"))?;
            for other in &vb.basis {
                if std::ptr::eq(other, b) {
                    continue;
                }
                ensure(!other.terms().iter().any(|(m, _)| lm.divides(m)), || {
                    format!("basis is not reduced: `{other}` has a term divisible by the leading term of `{b}`")
                })?;
            }
        }
        for g in &gens_expected {
            ensure(vb.normal_form(g).is_zero(), || format!("generator `{g}` does not reduce to zero"))?;
        }
        for (i, a) in vb.basis.iter().enumerate() {
            for b in &vb.basis[i + 1..] {
                let la = a.leading_term(&vb.order).unwrap().0;
                let lb = b.leading_term(&vb.order).unwrap().0;
                if la.is_coprime(lb) {
                    continue;
                }
                let s = spoly(a, b, &vb.order);
                ensure(vb.normal_form(&s).is_zero(), || {
                    format!("S-polynomial of `{a}` and `{b}` does not reduce to zero")
                })?;
            }
        }
        Ok(vb)
    }
}

/// A basis whose Gröbner property has been checked.
pub struct VerifiedBasis {
    pub table: Arc<VarTable>,
    pub order: Order,
    pub basis: Vec<Poly>,
}

impl VerifiedBasis {
    /// Remainder of `f` under repeated leading-term division.
    pub fn normal_form(&self, f: &Poly) -> Poly {
        let lead: Vec<_> = self
            .basis
            .iter()
            .map(|b| {
                let (m, c) = b.leading_term(&self.order).expect("nonzero");
                (m.clone(), c.clone())
            })
            .collect();
        let mut p = f.clone();
        let mut rem = Poly::zero(&self.table);
        while let Some((m, c)) = p.leading_term(&self.order).map(|(m, c)| (m.clone(), c.clone())) {
            match lead.iter().position(|(lm, _)| lm.divides(&m)) {
                Some(k) => {
                    let q = m.div(&lead[k].0).unwrap();
                    let coef = &c / &lead[k].1;
                    p = &p - &self.basis[k].mul_term(&q, &coef);
                }
                None => {
                    let term = Poly::monomial(&self.table, m, c);
                    rem = &rem + &term;
                    p = &p - &term;
                }
            }
        }
        rem
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    /// Basis elements not involving the variables `drop`, moved to `target`.
    pub fn free_of(&self, drop: &[usize], target: &Arc<VarTable>) -> Check<Vec<Poly>> {
        self.basis
            .iter()
            .filter(|p| drop.iter().all(|&i| !p.involves(i)))
            .map(|p| p.embed(target).map_err(|e| e.to_string()))
            .collect()
    }
}

fn spoly(a: &Poly, b: &Poly, order: &Order) -> Poly {
    let (la, ca) = a.leading_term(order).unwrap();
    let (lb, cb) = b.leading_term(order).unwrap();
    let l = la.lcm(lb);
    &a.mul_term(&l.div(la).unwrap(), &ca.recip()) - &b.mul_term(&l.div(lb).unwrap(), &cb.recip())
}

/// Exact quotient `h / f` by long division under `order`.
pub fn exact_quotient(h: &Poly, f: &Poly, order: &Order) -> Option<Poly> {
    let (lf, cf) = f.leading_term(order)?;
    let (lf, cf) = (lf.clone(), cf.clone());
    let mut p = h.clone();
    let mut q = Poly::zero(h.table());
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        let d = m.div(&lf)?;
        let coef = &c / &cf;
        q = &q + &Poly::monomial(h.table(), d.clone(), coef.clone());
        p = &p - &f.mul_term(&d, &coef);
    }
    Some(q)
}
