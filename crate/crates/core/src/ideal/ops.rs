use std::sync::{Arc, OnceLock};

use super::groebner::{reduce_terms, sorted_terms, GroebnerBasis};
use crate::error::{Error, Result};
use crate::poly::{BaseOrder, Order, Poly, VarTable};

/// A finitely generated ideal with a lazily computed reduced Gröbner basis.
#[derive(Debug)]
pub struct Ideal {
    table: Arc<VarTable>,
    gens: Vec<Poly>,
    order: Order,
    gb: OnceLock<GroebnerBasis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Ideal {
            table: self.table.clone(),
            gens: self.gens.clone(),
            order: self.order.clone(),
            gb,
        }
    }
}

impl Ideal {
    pub fn new(table: &Arc<VarTable>, gens: Vec<Poly>, order: Order) -> Result<Ideal> {
        check_tables(table, &gens)?;
        Ok(Ideal {
            table: table.clone(),
            gens,
            order,
            gb: OnceLock::new(),
        })
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    /// The cached reduced Gröbner basis, computed on first use.
    pub fn groebner(&self) -> &GroebnerBasis {
        self.gb
            .get_or_init(|| GroebnerBasis::compute(&self.table, &self.gens, &self.order))
    }

    pub fn has_gb(&self) -> bool {
        self.gb.get().is_some()
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.groebner().contains(f)
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().is_unit()
    }
}

/// Reduced Gröbner basis of `ideal` (cached on the ideal).
pub fn groebner(ideal: &Ideal) -> &GroebnerBasis {
    ideal.groebner()
}

fn check_tables(table: &Arc<VarTable>, gens: &[Poly]) -> Result<()> {
    for g in gens {
        if **g.table() != **table {
            return Err(Error::TableMismatch {
                left: table.to_string(),
                right: g.table().to_string(),
            });
        }
    }
    Ok(())
}

/// A ring presented as `Q[table] / (relations)`. Every ideal computation in
/// the quotient is done in the ambient ring with the relations adjoined.
#[derive(Debug)]
pub struct QuotientCtx {
    table: Arc<VarTable>,
    relations: Vec<Poly>,
    order: BaseOrder,
    rel_gb: OnceLock<GroebnerBasis>,
}

impl Clone for QuotientCtx {
    fn clone(&self) -> Self {
        QuotientCtx {
            table: self.table.clone(),
            relations: self.relations.clone(),
            order: self.order,
            rel_gb: OnceLock::new(),
        }
    }
}

impl QuotientCtx {
    pub fn new(table: &Arc<VarTable>, relations: Vec<Poly>, order: BaseOrder) -> Result<Self> {
        check_tables(table, &relations)?;
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(QuotientCtx {
            table: table.clone(),
            relations,
            order,
            rel_gb: OnceLock::new(),
        })
    }

    /// The polynomial ring itself.
    pub fn free(table: &Arc<VarTable>, order: BaseOrder) -> Self {
        QuotientCtx::new(table, Vec::new(), order).expect("no relations")
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn base_order(&self) -> BaseOrder {
        self.order
    }

    pub fn order(&self) -> Order {
        Order::Base(self.order)
    }

    pub fn check(&self, polys: &[&Poly]) -> Result<()> {
        for p in polys {
            if **p.table() != *self.table {
                return Err(Error::TableMismatch {
                    left: self.table.to_string(),
                    right: p.table().to_string(),
                });
            }
        }
        Ok(())
    }

    /// Tracked Gröbner basis of the relation ideal.
    pub fn relations_gb(&self) -> &GroebnerBasis {
        self.rel_gb.get_or_init(|| {
            GroebnerBasis::compute_tracked(&self.table, &self.relations, &self.order())
        })
    }

    /// Canonical representative modulo the relations.
    pub fn normal_form(&self, f: &Poly) -> Poly {
        if self.relations.is_empty() {
            return f.clone();
        }
        self.relations_gb().reduce(f)
    }

    /// Is `f` zero in the quotient ring?
    pub fn is_zero(&self, f: &Poly) -> bool {
        f.is_zero() || (!self.relations.is_empty() && self.relations_gb().contains(f))
    }

    /// Cofactors expressing `f` as a combination of the relations.
    pub fn relation_cofactors(&self, f: &Poly) -> Option<Vec<Poly>> {
        if f.is_zero() {
            return Some(vec![Poly::zero(&self.table); self.relations.len()]);
        }
        if self.relations.is_empty() {
            return None;
        }
        self.relations_gb().lift(f)
    }

    /// `gens` followed by the relations.
    pub fn adjoin(&self, gens: &[Poly]) -> Vec<Poly> {
        let mut all = gens.to_vec();
        all.extend(self.relations.iter().cloned());
        all
    }

    /// The ideal `gens + relations` in the ambient ring.
    pub fn ideal(&self, gens: &[Poly]) -> Ideal {
        Ideal {
            table: self.table.clone(),
            gens: self.adjoin(gens),
            order: self.order(),
            gb: OnceLock::new(),
        }
    }

    pub fn with_order(&self, order: BaseOrder) -> QuotientCtx {
        QuotientCtx {
            order,
            ..self.clone()
        }
    }
}

/// Reduced Gröbner basis of `gens + relations`.
pub fn ideal_gb(gens: &[Poly], ctx: &QuotientCtx) -> Result<GroebnerBasis> {
    check_tables(ctx.table(), gens)?;
    Ok(GroebnerBasis::compute(ctx.table(), &ctx.adjoin(gens), &ctx.order()))
}

/// Membership of `f` in `gens + relations`.
pub fn member(f: &Poly, gens: &[Poly], ctx: &QuotientCtx) -> Result<bool> {
    ctx.check(&[f])?;
    if f.is_zero() {
        return Ok(true);
    }
    Ok(ideal_gb(gens, ctx)?.contains(f))
}

/// Cofactors witnessing `f = Σ cofactors[i]·gens[i] + Σ relation_cofactors[k]·relations[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCert {
    pub cofactors: Vec<Poly>,
    pub relation_cofactors: Vec<Poly>,
}

impl MembershipCert {
    /// Re-evaluate the combination and compare with `f`.
    pub fn reconstructs(&self, f: &Poly, gens: &[Poly], ctx: &QuotientCtx) -> bool {
        if self.cofactors.len() != gens.len() || self.relation_cofactors.len() != ctx.relations().len() {
            return false;
        }
        let mut acc = Poly::zero(ctx.table());
        for (c, g) in self.cofactors.iter().zip(gens) {
            acc = &acc + &(c * g);
        }
        for (c, g) in self.relation_cofactors.iter().zip(ctx.relations()) {
            acc = &acc + &(c * g);
        }
        &acc == f
    }
}

/// Membership with a cofactor certificate; `None` when `f` is not a member.
pub fn member_certificate(f: &Poly, gens: &[Poly], ctx: &QuotientCtx) -> Result<Option<MembershipCert>> {
    ctx.check(&[f])?;
    check_tables(ctx.table(), gens)?;
    let all = ctx.adjoin(gens);
    let gb = GroebnerBasis::compute_tracked(ctx.table(), &all, &ctx.order());
    Ok(gb.lift(f).map(|mut cof| {
        let rel = cof.split_off(gens.len());
        MembershipCert {
            cofactors: cof,
            relation_cofactors: rel,
        }
    }))
}

/// Run a computation in `table` extended by one leading auxiliary variable
/// `_w` and return the Gröbner basis under the block order eliminating `_w`.
pub(crate) fn aux_gb(
    ctx: &QuotientCtx,
    build: impl FnOnce(&Arc<VarTable>, &Poly) -> Vec<Poly>,
    weight_relations: bool,
    tracked: bool,
) -> GroebnerBasis {
    let aux = ctx.table().with_aux(&["w"]);
    let w = Poly::var_at(&aux, 0, 1);
    let mut gens = build(&aux, &w);
    for r in ctx.relations() {
        let r = r.embed(&aux).expect("relations embed");
        gens.push(if weight_relations { &w * &r } else { r });
    }
    let order = Order::block(aux.len(), &[0], ctx.base_order());
    if tracked {
        GroebnerBasis::compute_tracked(&aux, &gens, &order)
    } else {
        GroebnerBasis::compute(&aux, &gens, &order)
    }
}

/// Basis elements free of the auxiliary variable, moved back to `ctx`'s table.
pub(crate) fn aux_free(gb: &GroebnerBasis, ctx: &QuotientCtx) -> Vec<Poly> {
    gb.basis()
        .iter()
        .filter(|p| !p.involves(0))
        .map(|p| p.embed(ctx.table()).expect("aux-free"))
        .collect()
}

fn embed_all(ps: &[Poly], table: &Arc<VarTable>) -> Vec<Poly> {
    ps.iter().map(|p| p.embed(table).expect("same variables")).collect()
}

/// Gröbner basis of `gens + relations` under the block order eliminating `drop`.
pub fn elimination_gb(gens: &[Poly], drop: &[usize], ctx: &QuotientCtx, tracked: bool) -> Result<GroebnerBasis> {
    check_tables(ctx.table(), gens)?;
    let n = ctx.table().len();
    if let Some(&bad) = drop.iter().find(|&&i| i >= n) {
        return Err(Error::usage(format!("variable index {bad} out of range")));
    }
    let order = if drop.is_empty() {
        ctx.order()
    } else {
        Order::block(n, drop, ctx.base_order())
    };
    let all = ctx.adjoin(gens);
    Ok(if tracked {
        GroebnerBasis::compute_tracked(ctx.table(), &all, &order)
    } else {
        GroebnerBasis::compute(ctx.table(), &all, &order)
    })
}

/// Generators of `(gens + relations) ∩ Q[table ∖ drop]`.
pub fn eliminate(gens: &[Poly], drop: &[usize], ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    let gb = elimination_gb(gens, drop, ctx, false)?;
    Ok(gb
        .basis()
        .iter()
        .filter(|p| drop.iter().all(|&i| !p.involves(i)))
        .cloned()
        .collect())
}

/// [`eliminate`] with variables given by name.
pub fn eliminate_vars(gens: &[Poly], drop: &[&str], ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    let idx = drop
        .iter()
        .map(|n| {
            ctx.table()
                .index_of(n)
                .ok_or_else(|| Error::usage(format!("unknown variable `{n}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    eliminate(gens, &idx, ctx)
}

/// Exact quotient `h / f` in the polynomial ring, if `f` divides `h`.
pub fn divide_exact(h: &Poly, f: &Poly) -> Option<Poly> {
    assert!(!f.is_zero());
    let order = Order::GREVLEX;
    let g = sorted_terms(f, &order);
    let mut quot = vec![Vec::new()];
    let rem = reduce_terms(sorted_terms(h, &order), &[&g], &order, Some(&mut quot));
    rem.is_empty()
        .then(|| Poly::from_terms(h.table(), quot.pop().unwrap()))
}

fn nonzero_in_ring(f: &Poly, ctx: &QuotientCtx) -> Result<()> {
    if ctx.is_zero(f) {
        Err(Error::usage(format!("`{f}` is zero in the ring")))
    } else {
        Ok(())
    }
}

/// Gröbner basis of `w·(gens + relations) + (1 − w)·(f)` in the auxiliary
/// table; its `w`-free part is `(gens + relations) ∩ (f)`.
pub fn colon_gb(gens: &[Poly], f: &Poly, ctx: &QuotientCtx, tracked: bool) -> Result<GroebnerBasis> {
    ctx.check(&[f])?;
    check_tables(ctx.table(), gens)?;
    nonzero_in_ring(f, ctx)?;
    Ok(aux_gb(
        ctx,
        |aux, w| {
            let one_minus_w = &Poly::one(aux) - w;
            let mut out: Vec<Poly> = embed_all(gens, aux).iter().map(|g| w * g).collect();
            out.push(&one_minus_w * &f.embed(aux).unwrap());
            out
        },
        true,
        tracked,
    ))
}

/// `(gens + relations) : f`.
pub fn colon(gens: &[Poly], f: &Poly, ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    let gb = colon_gb(gens, f, ctx, false)?;
    let inter = aux_free(&gb, ctx);
    let quot: Vec<Poly> = inter
        .iter()
        .map(|h| divide_exact(h, f).expect("elements of I ∩ (f) are multiples of f"))
        .collect();
    Ok(ideal_gb(&quot, ctx)?.basis().to_vec())
}

/// Gröbner basis of `gens + relations + (1 − w·f)` eliminating `w`.
pub fn saturation_gb(gens: &[Poly], f: &Poly, ctx: &QuotientCtx, tracked: bool) -> Result<GroebnerBasis> {
    ctx.check(&[f])?;
    check_tables(ctx.table(), gens)?;
    nonzero_in_ring(f, ctx)?;
    Ok(aux_gb(
        ctx,
        |aux, w| {
            let mut out = embed_all(gens, aux);
            out.push(&Poly::one(aux) - &(w * &f.embed(aux).unwrap()));
            out
        },
        false,
        tracked,
    ))
}

/// `(gens + relations) : f^∞` by the auxiliary-variable method.
pub fn saturate(gens: &[Poly], f: &Poly, ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    Ok(aux_free(&saturation_gb(gens, f, ctx, false)?, ctx))
}

/// `(gens + relations) : f^∞` by iterating the colon until it stabilizes.
pub fn saturate_iterated(gens: &[Poly], f: &Poly, ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    let mut cur = ideal_gb(gens, ctx)?.basis().to_vec();
    loop {
        let next = colon(&cur, f, ctx)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Gröbner basis of `w·(a + relations) + (1 − w)·(b + relations)` eliminating `w`.
pub fn intersection_gb(a: &[Poly], b: &[Poly], ctx: &QuotientCtx, tracked: bool) -> Result<GroebnerBasis> {
    check_tables(ctx.table(), a)?;
    check_tables(ctx.table(), b)?;
    Ok(aux_gb(
        ctx,
        |aux, w| {
            let one_minus_w = &Poly::one(aux) - w;
            let mut out: Vec<Poly> = embed_all(a, aux).iter().map(|g| w * g).collect();
            out.extend(embed_all(b, aux).iter().map(|g| &one_minus_w * g));
            out
        },
        false,
        tracked,
    ))
}

/// `(a + relations) ∩ (b + relations)`.
pub fn intersect(a: &[Poly], b: &[Poly], ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    Ok(aux_free(&intersection_gb(a, b, ctx, false)?, ctx))
}

/// The `t`-coefficients of `f`: generators of its content ideal (relations not included).
pub fn content_ideal(f: &Poly, ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    ctx.check(&[f])?;
    Ok(f.coeffs_in_t()?.into_iter().map(|(_, c)| c).collect())
}

/// Content of an ideal of `R[t]`: all `t`-coefficients of all generators.
pub fn content_of(gens: &[Poly], ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for g in gens {
        for c in content_ideal(g, ctx)? {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Is `gens + relations` the unit ideal?
pub fn is_unit_ideal(gens: &[Poly], ctx: &QuotientCtx) -> Result<bool> {
    check_tables(ctx.table(), gens)?;
    if gens.iter().any(|g| g.is_nonzero_constant()) {
        return Ok(true);
    }
    Ok(ideal_gb(gens, ctx)?.is_unit())
}

/// `small + relations ⊆ big + relations`?
pub fn contains_ideal(big: &[Poly], small: &[Poly], ctx: &QuotientCtx) -> Result<bool> {
    let gb = ideal_gb(big, ctx)?;
    check_tables(ctx.table(), small)?;
    Ok(small.iter().all(|p| gb.contains(p)))
}

/// Equality of `a + relations` and `b + relations`.
pub fn ideals_equal(a: &[Poly], b: &[Poly], ctx: &QuotientCtx) -> Result<bool> {
    Ok(ideal_gb(a, ctx)?.basis() == ideal_gb(b, ctx)?.basis())
}

/// A small generating set of `gens + relations` modulo the relations: start
/// from the reduced basis, greedily drop redundant elements (largest first),
/// then reduce the survivors modulo the relations.
pub fn minimal_generators(gens: &[Poly], ctx: &QuotientCtx) -> Result<Vec<Poly>> {
    let gb = ideal_gb(gens, ctx)?;
    let mut keep: Vec<Poly> = gb
        .basis()
        .iter()
        .filter(|p| !ctx.is_zero(p))
        .cloned()
        .collect();
    let mut i = 0;
    while i < keep.len() {
        let mut rest = keep.clone();
        let cand = rest.remove(i);
        if member(&cand, &rest, ctx)? {
            keep = rest;
        } else {
            i += 1;
        }
    }
    Ok(keep
        .iter()
        .map(|p| ctx.normal_form(p))
        .filter(|p| !p.is_zero())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(names: &[&str]) -> (Arc<VarTable>, QuotientCtx) {
        let t = VarTable::user(names).unwrap();
        let ctx = QuotientCtx::free(&t, BaseOrder::Grevlex);
        (t, ctx)
    }

    fn ps(t: &Arc<VarTable>, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|s| Poly::parse(s, t).unwrap()).collect()
    }

    fn p(t: &Arc<VarTable>, s: &str) -> Poly {
        Poly::parse(s, t).unwrap()
    }

    #[test]
    fn membership_examples() {
        let (t, ctx) = setup(&["x", "y", "t"]);
        assert!(member(&p(&t, "y"), &ps(&t, &["x", "x + y"]), &ctx).unwrap());
        assert!(!member(&p(&t, "x"), &ps(&t, &["x*t + y"]), &ctx).unwrap());
        assert!(member(&p(&t, "x^3*y - 7"), &ps(&t, &["1"]), &ctx).unwrap());
        let f = p(&t, "x*y + y^2*t");
        let gens = ps(&t, &["x", "y*t"]);
        let cert = member_certificate(&f, &gens, &ctx).unwrap().unwrap();
        assert!(cert.reconstructs(&f, &gens, &ctx));
        assert!(member_certificate(&p(&t, "t"), &gens, &ctx).unwrap().is_none());
    }

    #[test]
    fn elimination_examples() {
        let (t, ctx) = setup(&["x", "y", "t"]);
        assert!(eliminate_vars(&ps(&t, &["x*t + y"]), &["t"], &ctx).unwrap().is_empty());
        let (t2, ctx2) = setup(&["v", "x", "y"]);
        assert_eq!(
            eliminate_vars(&ps(&t2, &["x*v - y", "v - 1"]), &["v"], &ctx2).unwrap(),
            ps(&t2, &["x - y"])
        );
        let gens = ps(&t, &["x^2 + y", "x*y"]);
        assert_eq!(eliminate(&gens, &[], &ctx).unwrap(), ideal_gb(&gens, &ctx).unwrap().basis());
    }

    #[test]
    fn colon_and_saturation_examples() {
        let (t, ctx) = setup(&["x", "y", "z"]);
        assert_eq!(colon(&ps(&t, &["x*y"]), &p(&t, "x"), &ctx).unwrap(), ps(&t, &["y"]));
        let i = ps(&t, &["x^2*y", "x*z"]);
        let sat = saturate(&i, &p(&t, "x"), &ctx).unwrap();
        assert!(ideals_equal(&sat, &ps(&t, &["y", "z"]), &ctx).unwrap());
        assert_eq!(sat, saturate_iterated(&i, &p(&t, "x"), &ctx).unwrap());
        assert!(ideals_equal(&colon(&i, &p(&t, "1"), &ctx).unwrap(), &i, &ctx).unwrap());
        assert!(matches!(colon(&i, &p(&t, "0"), &ctx), Err(Error::Usage(_))));
        assert!(saturate(&i, &p(&t, "0"), &ctx).is_err());
    }

    #[test]
    fn intersection_examples() {
        let (t, ctx) = setup(&["x", "y"]);
        assert_eq!(intersect(&ps(&t, &["x"]), &ps(&t, &["y"]), &ctx).unwrap(), ps(&t, &["x*y"]));
        let i = ps(&t, &["x^2", "y^3 - x"]);
        assert!(ideals_equal(&intersect(&i, &ps(&t, &["1"]), &ctx).unwrap(), &i, &ctx).unwrap());
        assert!(ideals_equal(
            &intersect(&ps(&t, &["x", "y"]), &ps(&t, &["x"]), &ctx).unwrap(),
            &ps(&t, &["x"]),
            &ctx
        )
        .unwrap());
    }

    #[test]
    fn content_examples() {
        let (t, ctx) = setup(&["x", "y", "t"]);
        let c = content_ideal(&p(&t, "x*t + y"), &ctx).unwrap();
        assert!(ideals_equal(&c, &ps(&t, &["x", "y"]), &ctx).unwrap());
        assert!(!is_unit_ideal(&c, &ctx).unwrap());
        assert!(content_ideal(&p(&t, "0"), &ctx).unwrap().is_empty());
        let (tv, ctxv) = setup(&["x", "v", "t"]);
        let c = content_ideal(&p(&tv, "t^2 + v"), &ctxv).unwrap();
        assert!(is_unit_ideal(&c, &ctxv).unwrap());
        assert!(is_unit_ideal(&ps(&t, &["x", "x - 1"]), &ctx).unwrap());
        assert!(is_unit_ideal(&ps(&t, &["1"]), &ctx).unwrap());
    }

    #[test]
    fn quotient_ring_computations() {
        // chart ring Q[x, y, v]/(x*v - y)
        let t = VarTable::new(vec!["x".into(), "y".into(), "y2".into(), "t".into()]).unwrap();
        let ctx = QuotientCtx::new(&t, ps(&t, &["x*y2 - y"]), BaseOrder::Grevlex).unwrap();
        assert!(member(&p(&t, "y"), &ps(&t, &["x"]), &ctx).unwrap());
        assert!(ctx.is_zero(&p(&t, "x*y2 - y")));
        let mg = minimal_generators(&ps(&t, &["x", "y"]), &ctx).unwrap();
        assert_eq!(mg, ps(&t, &["x"]));
        let sat = saturate(&ps(&t, &["y"]), &p(&t, "y2"), &ctx).unwrap();
        assert!(ideals_equal(&sat, &ps(&t, &["x"]), &ctx).unwrap());
        let rel = ctx.relation_cofactors(&p(&t, "t*x*y2 - t*y")).unwrap();
        assert_eq!(rel, ps(&t, &["t"]));
    }

    #[test]
    fn order_independence_of_membership() {
        let t = VarTable::user(&["x", "y", "t"]).unwrap();
        let corpus = [
            (vec!["x*t + y"], "x*y*t + y^2"),
            (vec!["x^2 - y", "x*y - 1"], "x^3 - 1"),
            (vec!["x^2 - y", "x*y - 1"], "x - y^2"),
            (vec!["x*t + y", "y*t - x"], "x^2 + y^2"),
            (vec!["x*t + y"], "x"),
        ];
        for (gens, f) in corpus {
            let gens = ps(&t, &gens);
            let f = p(&t, f);
            let lex = QuotientCtx::free(&t, BaseOrder::Lex);
            let grev = QuotientCtx::free(&t, BaseOrder::Grevlex);
            assert_eq!(member(&f, &gens, &lex).unwrap(), member(&f, &gens, &grev).unwrap());
        }
    }
}
