//! Buchberger's algorithm with the Gebauer–Möller pair criteria, the normal
//! selection strategy, and optional tracking of how each basis element is
//! built from the input generators.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::poly::{Mono, Order, Poly, Rat, VarTable};

pub(crate) type Terms = Vec<(Mono, Rat)>;

pub(crate) fn sorted_terms(p: &Poly, order: &Order) -> Terms {
    let mut t = p.terms().to_vec();
    if *order != Order::GREVLEX {
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    }
    t
}

fn to_poly(table: &Arc<VarTable>, t: Terms) -> Poly {
    Poly::from_unsorted_unique(table, t)
}

/// `p - c * m * g` with both operands sorted descending under `order`.
pub(crate) fn sub_mul(p: &[(Mono, Rat)], c: &Rat, m: &Mono, g: &[(Mono, Rat)], order: &Order) -> Terms {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gj: Option<(Mono, Rat)> = g.first().map(|(n, d)| (n.mul(m), d * c));
    while i < p.len() || gj.is_some() {
        let ord = match (&gj, p.get(i)) {
            (None, _) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some((gm, _)), Some((pm, _))) => order.cmp(pm, gm),
        };
        match ord {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (gm, gc) = gj.take().unwrap();
                out.push((gm, -gc));
                j += 1;
                gj = g.get(j).map(|(n, d)| (n.mul(m), d * c));
            }
            Ordering::Equal => {
                let (gm, gc) = gj.take().unwrap();
                let v = &p[i].1 - gc;
                if !v.is_zero() {
                    out.push((gm, v));
                }
                i += 1;
                j += 1;
                gj = g.get(j).map(|(n, d)| (n.mul(m), d * c));
            }
        }
    }
    out
}

/// Full reduction of `p` by the polynomials `basis` (each nonempty and sorted).
/// When `quot` is given, the quotient terms for basis element `k` are pushed
/// to `quot[k]`; monomials pushed for one `k` are pairwise distinct.
pub(crate) fn reduce_terms(
    mut p: Terms,
    basis: &[&Terms],
    order: &Order,
    mut quot: Option<&mut Vec<Terms>>,
) -> Terms {
    let mut rem = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let hit = basis.iter().position(|g| g[0].0.divides(&p[start].0));
        match hit {
            Some(k) => {
                let g = basis[k];
                let q = p[start].0.div(&g[0].0).expect("divisible");
                let c = &p[start].1 / &g[0].1;
                p = sub_mul(&p[start + 1..], &c, &q, &g[1..], order);
                start = 0;
                if let Some(qs) = quot.as_deref_mut() {
                    qs[k].push((q, c));
                }
            }
            None => {
                let t = std::mem::replace(&mut p[start], (Mono::new(Vec::new()), Rat::zero()));
                rem.push(t);
                start += 1;
            }
        }
    }
    rem
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    table: Arc<VarTable>,
    order: Order,
    gens: Vec<Poly>,
    basis: Vec<Poly>,
    sorted: Vec<Terms>,
    /// `basis[i] = Σ_j cofactors[i][j] * gens[j]`
    cofactors: Option<Vec<Vec<Poly>>>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

struct Builder<'a> {
    table: Arc<VarTable>,
    order: &'a Order,
    track: bool,
    polys: Vec<Terms>,
    cofs: Vec<Vec<Poly>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<'a> Builder<'a> {
    fn lm(&self, k: usize) -> &Mono {
        &self.polys[k][0].0
    }

    fn push(&mut self, t: Terms, cof: Vec<Poly>) -> usize {
        self.polys.push(t);
        if self.track {
            self.cofs.push(cof);
        }
        self.polys.len() - 1
    }

    /// Gebauer–Möller installation of the new element `h`.
    fn update(&mut self, h: usize) {
        let lh = self.lm(h).clone();
        let mut c: Vec<(usize, Mono)> = self
            .active
            .iter()
            .map(|&g| (g, lh.lcm(self.lm(g))))
            .collect();
        let mut d: Vec<(usize, Mono)> = Vec::new();
        while let Some((g1, l1)) = (!c.is_empty()).then(|| c.remove(0)) {
            let coprime = lh.is_coprime(self.lm(g1));
            if coprime || !c.iter().chain(d.iter()).any(|(_, l2)| l2.divides(&l1)) {
                d.push((g1, l1));
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|(g, _)| !lh.is_coprime(self.lm(*g)))
            .map(|(g, lcm)| Pair { i: g, j: h, lcm })
            .collect();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && polys[p.i][0].0.lcm(&lh) != p.lcm
                && polys[p.j][0].0.lcm(&lh) != p.lcm)
        });
        self.pairs.extend(e);
        let active = std::mem::take(&mut self.active);
        self.active = active
            .into_iter()
            .filter(|&g| !lh.divides(&self.polys[g][0].0))
            .collect();
        self.active.push(h);
    }

    fn select(&mut self) -> Pair {
        let order = self.order;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                order
                    .cmp(&pa.lcm, &pb.lcm)
                    .then((pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .expect("nonempty pair list");
        self.pairs.swap_remove(best)
    }

    fn reduce(&self, p: Terms, cof: Option<Vec<Poly>>, among: &[usize]) -> (Terms, Vec<Poly>) {
        let basis: Vec<&Terms> = among.iter().map(|&k| &self.polys[k]).collect();
        if !self.track {
            return (reduce_terms(p, &basis, self.order, None), Vec::new());
        }
        let mut quot = vec![Vec::new(); basis.len()];
        let rem = reduce_terms(p, &basis, self.order, Some(&mut quot));
        let mut cof = cof.expect("tracked cofactors");
        for (q, &k) in quot.into_iter().zip(among) {
            if q.is_empty() {
                continue;
            }
            let q = to_poly(&self.table, q);
            for (c, ck) in cof.iter_mut().zip(&self.cofs[k]) {
                if !ck.is_zero() {
                    *c = &*c - &(&q * ck);
                }
            }
        }
        (rem, cof)
    }

    fn spoly(&self, pair: &Pair) -> (Terms, Option<Vec<Poly>>) {
        let (f, g) = (&self.polys[pair.i], &self.polys[pair.j]);
        let mf = pair.lcm.div(&f[0].0).unwrap();
        let mg = pair.lcm.div(&g[0].0).unwrap();
        let cf = f[0].1.recip();
        let cg = g[0].1.recip();
        // cf*mf*f - cg*mg*g, leading terms cancel
        let a: Terms = f[1..].iter().map(|(m, c)| (m.mul(&mf), c * &cf)).collect();
        let s = sub_mul(&a, &cg, &mg, &g[1..], self.order);
        let cof = self.track.then(|| {
            self.cofs[pair.i]
                .iter()
                .zip(&self.cofs[pair.j])
                .map(|(a, b)| &a.mul_term(&mf, &cf) - &b.mul_term(&mg, &cg))
                .collect()
        });
        (s, cof)
    }

    fn unit(&self, gens: &[Poly], t: Terms, cof: Vec<Poly>) -> GroebnerBasis {
        let inv = t[0].1.recip();
        GroebnerBasis {
            table: self.table.clone(),
            order: self.order.clone(),
            gens: gens.to_vec(),
            basis: vec![Poly::one(&self.table)],
            sorted: vec![vec![(Mono::one(self.table.len()), Rat::one())]],
            cofactors: self
                .track
                .then(|| vec![cof.iter().map(|c| c.scale(&inv)).collect()]),
        }
    }
}

fn unit_vec(table: &Arc<VarTable>, n: usize, k: usize) -> Vec<Poly> {
    (0..n)
        .map(|i| if i == k { Poly::one(table) } else { Poly::zero(table) })
        .collect()
}

fn buchberger(table: &Arc<VarTable>, gens: &[Poly], order: &Order, track: bool) -> GroebnerBasis {
    let mut b = Builder {
        table: table.clone(),
        order,
        track,
        polys: Vec::new(),
        cofs: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for (k, g) in gens.iter().enumerate() {
        assert!(**g.table() == **table, "generator table mismatch");
        if g.is_zero() {
            continue;
        }
        let t = sorted_terms(g, order);
        let cof = if track { unit_vec(table, gens.len(), k) } else { Vec::new() };
        if g.is_nonzero_constant() {
            return b.unit(gens, t, cof);
        }
        let h = b.push(t, cof);
        b.update(h);
    }
    while !b.pairs.is_empty() {
        let pair = b.select();
        let (s, cof) = b.spoly(&pair);
        let active = b.active.clone();
        let (h, cof) = b.reduce(s, cof, &active);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return b.unit(gens, h, cof);
        }
        let k = b.push(h, cof);
        b.update(k);
    }

    // minimalize, interreduce and normalize
    let act = &b.active;
    let mut g: Vec<usize> = act
        .iter()
        .enumerate()
        .filter(|&(pos, &k)| {
            !act.iter().enumerate().any(|(pos2, &o)| {
                pos2 != pos && b.lm(o).divides(b.lm(k)) && (b.lm(o) != b.lm(k) || pos2 < pos)
            })
        })
        .map(|(_, &k)| k)
        .collect();
    g.sort_by(|&x, &y| order.cmp(b.lm(y), b.lm(x)));
    let mut out: Vec<(Terms, Vec<Poly>)> = Vec::with_capacity(g.len());
    for (pos, &k) in g.iter().enumerate() {
        let others: Vec<usize> = g.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &o)| o).collect();
        let cof = track.then(|| b.cofs[k].clone());
        let (mut r, mut cof) = b.reduce(b.polys[k].clone(), cof, &others);
        let inv = r[0].1.recip();
        for t in r.iter_mut() {
            t.1 *= &inv;
        }
        for c in cof.iter_mut() {
            *c = c.scale(&inv);
        }
        out.push((r, cof));
    }
    let basis = out.iter().map(|(t, _)| to_poly(table, t.clone())).collect();
    let cofactors = track.then(|| out.iter().map(|(_, c)| c.clone()).collect());
    GroebnerBasis {
        table: table.clone(),
        order: order.clone(),
        gens: gens.to_vec(),
        basis,
        sorted: out.into_iter().map(|(t, _)| t).collect(),
        cofactors,
    }
}

impl GroebnerBasis {
    /// Reduced Gröbner basis of `gens` (all in `table`) under `order`.
    pub fn compute(table: &Arc<VarTable>, gens: &[Poly], order: &Order) -> GroebnerBasis {
        buchberger(table, gens, order, false)
    }

    /// Same as [`GroebnerBasis::compute`], also recording how every basis
    /// element is combined from the generators, so members can be lifted.
    pub fn compute_tracked(table: &Arc<VarTable>, gens: &[Poly], order: &Order) -> GroebnerBasis {
        buchberger(table, gens, order, true)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Monic elements, sorted by leading monomial (descending).
    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn cofactors(&self) -> Option<&[Vec<Poly>]> {
        self.cofactors.as_deref()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Mono> {
        self.sorted.iter().map(|t| t[0].0.clone()).collect()
    }

    /// Normal form of `f`.
    pub fn reduce(&self, f: &Poly) -> Poly {
        let basis: Vec<&Terms> = self.sorted.iter().collect();
        to_poly(&self.table, reduce_terms(sorted_terms(f, &self.order), &basis, &self.order, None))
    }

    /// Quotients by the basis elements and the remainder.
    pub fn divide(&self, f: &Poly) -> (Vec<Poly>, Poly) {
        let basis: Vec<&Terms> = self.sorted.iter().collect();
        let mut quot = vec![Vec::new(); basis.len()];
        let rem = reduce_terms(sorted_terms(f, &self.order), &basis, &self.order, Some(&mut quot));
        (
            quot.into_iter().map(|q| to_poly(&self.table, q)).collect(),
            to_poly(&self.table, rem),
        )
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Cofactors `c` with `f = Σ c_j * gens[j]`, or `None` if `f` is not in the
    /// ideal. Requires a tracked basis.
    pub fn lift(&self, f: &Poly) -> Option<Vec<Poly>> {
        let cofs = self
            .cofactors
            .as_ref()
            .expect("lift requires a basis computed with compute_tracked");
        let (q, r) = self.divide(f);
        if !r.is_zero() {
            return None;
        }
        let mut out = vec![Poly::zero(&self.table); self.gens.len()];
        for (qi, ci) in q.iter().zip(cofs) {
            if qi.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(ci) {
                if !c.is_zero() {
                    *o = &*o + &(qi * c);
                }
            }
        }
        Some(out)
    }

    /// Same ideal (reduced bases coincide); orders must agree.
    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        self.order == other.order && self.basis == other.basis
    }
}

/// Leading-coefficient-normalized S-polynomial of two polynomials.
pub fn s_polynomial(f: &Poly, g: &Poly, order: &Order) -> Poly {
    let (lf, cf) = f.leading_term(order).expect("nonzero");
    let (lg, cg) = g.leading_term(order).expect("nonzero");
    let l = lf.lcm(lg);
    let a = f.mul_term(&l.div(lf).unwrap(), &cf.recip());
    let b = g.mul_term(&l.div(lg).unwrap(), &cg.recip());
    &a - &b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    fn tab(names: &[&str]) -> Arc<VarTable> {
        VarTable::user(names).unwrap()
    }

    fn ps(t: &Arc<VarTable>, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|s| Poly::parse(s, t).unwrap()).collect()
    }

    fn check_self_certifying(gb: &GroebnerBasis) {
        let o = gb.order().clone();
        for (i, f) in gb.basis().iter().enumerate() {
            assert!(f.leading_term(&o).unwrap().1.is_one(), "not monic: {f}");
            for g in &gb.basis()[i + 1..] {
                assert!(gb.reduce(&s_polynomial(f, g, &o)).is_zero());
            }
        }
        for g in gb.gens() {
            assert!(gb.contains(g));
        }
        // reduced: no term divisible by another element's leading monomial
        let lms = gb.leading_monomials();
        for (i, f) in gb.basis().iter().enumerate() {
            for (m, _) in f.terms() {
                for (j, l) in lms.iter().enumerate() {
                    if i != j {
                        assert!(!l.divides(m));
                    }
                }
            }
        }
    }

    #[test]
    fn worked_examples() {
        let t = tab(&["x", "y"]);
        let gb = GroebnerBasis::compute(&t, &ps(&t, &["x^2", "x"]), &Order::LEX);
        assert_eq!(gb.basis(), ps(&t, &["x"]).as_slice());
        let gb = GroebnerBasis::compute(&t, &ps(&t, &["x + y", "x - y"]), &Order::LEX);
        assert_eq!(gb.basis(), ps(&t, &["x", "y"]).as_slice());
        let gb = GroebnerBasis::compute(&t, &ps(&t, &["1"]), &Order::LEX);
        assert!(gb.is_unit());
        let gb = GroebnerBasis::compute(&t, &[], &Order::LEX);
        assert!(gb.is_zero_ideal());
    }

    #[test]
    fn cyclic_three_is_self_certifying() {
        let t = tab(&["a", "b", "c"]);
        let gens = ps(&t, &["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]);
        for o in [Order::LEX, Order::GREVLEX] {
            let gb = GroebnerBasis::compute_tracked(&t, &gens, &o);
            check_self_certifying(&gb);
            for (b, cof) in gb.basis().iter().zip(gb.cofactors().unwrap()) {
                let mut acc = Poly::zero(&t);
                for (c, g) in cof.iter().zip(&gens) {
                    acc = &acc + &(c * g);
                }
                assert_eq!(&acc, b);
            }
        }
        let lex = GroebnerBasis::compute(&t, &gens, &Order::LEX);
        assert_eq!(lex.basis().last().unwrap().to_string(), "c^3 - 1");
    }

    #[test]
    fn lift_reconstructs_members() {
        let t = tab(&["x", "y", "z"]);
        let gens = ps(&t, &["x*y - z", "y^2 - x", "z^2 - x*y*z"]);
        let gb = GroebnerBasis::compute_tracked(&t, &gens, &Order::GREVLEX);
        check_self_certifying(&gb);
        let f = &(&gens[0] * &Poly::parse("x + 3*z", &t).unwrap())
            - &(&gens[2] * &Poly::parse("y^2", &t).unwrap());
        let cof = gb.lift(&f).unwrap();
        let mut acc = Poly::zero(&t);
        for (c, g) in cof.iter().zip(&gens) {
            acc = &acc + &(c * g);
        }
        assert_eq!(acc, f);
        assert!(gb.lift(&Poly::parse("x", &t).unwrap()).is_none());
    }

    #[test]
    fn block_order_eliminates() {
        let t = VarTable::new(vec!["v".into(), "x".into(), "y".into()]).unwrap();
        let gens = ps(&t, &["x*v - y", "v - 1"]);
        let o = Order::block(3, &[0], crate::poly::BaseOrder::Grevlex);
        let gb = GroebnerBasis::compute(&t, &gens, &o);
        let free: Vec<_> = gb.basis().iter().filter(|p| !p.involves(0)).cloned().collect();
        assert_eq!(free, ps(&t, &["x - y"]));
    }
}
