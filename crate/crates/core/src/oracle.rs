//! Brute-force cross-check for Nagata-ring questions: bounded-degree search
//! for primitive multipliers by linear algebra over `Q`.
//!
//! No Gröbner bases are used. Multipliers `g` of degree at most `bound` with
//! `g · target ∈ ideal + relations` (cofactors bounded too) form a vector
//! space; its basis vectors and a few seeded random combinations are tested
//! for primitivity, again by solving for bounded-degree unit cofactors. A
//! negative answer therefore only means "nothing within the bound".

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ideal::QuotientCtx;
use crate::linalg::{nullspace, rref, solve};
use crate::nagata::TFrac;
use crate::poly::{Mono, Poly, Rat};

/// `g · target = Σ cofactors · ideal + Σ relation_cofactors · relations`, and
/// `1 = Σ unit_cofactors · coeffs_t(g) + Σ unit_relation_cofactors · relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleMultiplier {
    pub g: Poly,
    pub cofactors: Vec<Poly>,
    pub relation_cofactors: Vec<Poly>,
    pub unit_cofactors: Vec<Poly>,
    pub unit_relation_cofactors: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Found(OracleMultiplier),
    NotFound,
}

impl OracleVerdict {
    pub fn found(&self) -> bool {
        matches!(self, OracleVerdict::Found(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRelevance {
    pub relevant: bool,
    pub normalized: Vec<Poly>,
    pub failing_coefficient: Option<Poly>,
}

#[derive(Clone, Debug)]
pub struct Oracle {
    pub bound: u32,
    pub seed: u64,
    pub random_trials: usize,
    pub max_basis_trials: usize,
}

/// All monomials in `n` variables of total degree at most `d`, by degree.
fn monomials_upto(n: usize, d: u32) -> Vec<Mono> {
    let mut out = vec![Mono::one(n)];
    let mut layer = vec![Mono::one(n)];
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &layer {
            let last = m.exps().iter().rposition(|&e| e > 0).unwrap_or(0);
            for v in last..n {
                next.push(m.mul(&Mono::var(n, v, 1)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Unknown polynomials `U_k` of bounded degree, each multiplying a known `K_k`.
struct LinearSystem {
    n: usize,
    blocks: Vec<Vec<Mono>>,
    rows: HashMap<Mono, usize>,
    entries: Vec<(usize, usize, Rat)>,
}

impl LinearSystem {
    fn new(n: usize) -> Self {
        LinearSystem {
            n,
            blocks: Vec::new(),
            rows: HashMap::new(),
            entries: Vec::new(),
        }
    }

    fn cols(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Add the unknown `U` (degree ≤ `d`, or absent if `d < 0`) times `known`.
    fn add_block(&mut self, known: &Poly, d: i64) {
        let basis = if d < 0 { Vec::new() } else { monomials_upto(self.n, d as u32) };
        self.add_basis(known, basis);
    }

    /// Add the unknown `U` supported on `basis` times `known`.
    fn add_basis(&mut self, known: &Poly, basis: Vec<Mono>) {
        let base = self.cols();
        for (j, m) in basis.iter().enumerate() {
            for (km, kc) in known.terms() {
                let mono = m.mul(km);
                let next = self.rows.len();
                let r = *self.rows.entry(mono).or_insert(next);
                self.entries.push((r, base + j, kc.clone()));
            }
        }
        self.blocks.push(basis);
    }

    fn dense(&self) -> Vec<Vec<Rat>> {
        let cols = self.cols();
        let mut rows = vec![vec![Rat::zero(); cols]; self.rows.len()];
        for (r, c, v) in &self.entries {
            rows[*r][*c] += v;
        }
        rows
    }

    /// Some solution of `Σ U_k K_k = rhs`, one polynomial per block.
    fn solve_for(&mut self, rhs: &Poly, table: &std::sync::Arc<crate::VarTable>) -> Option<Vec<Poly>> {
        for (m, _) in rhs.terms() {
            let next = self.rows.len();
            self.rows.entry(m.clone()).or_insert(next);
        }
        let mut b = vec![Rat::zero(); self.rows.len()];
        for (m, c) in rhs.terms() {
            b[self.rows[m]] = c.clone();
        }
        let cols = self.cols();
        solve(self.dense(), b, cols).map(|z| self.unpack(&z, table))
    }

    /// Split a solution vector into one polynomial per block.
    fn unpack(&self, z: &[Rat], table: &std::sync::Arc<crate::VarTable>) -> Vec<Poly> {
        let mut out = Vec::new();
        let mut k = 0;
        for basis in &self.blocks {
            let terms = basis
                .iter()
                .zip(&z[k..k + basis.len()])
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m.clone(), c.clone()));
            out.push(Poly::from_terms(table, terms));
            k += basis.len();
        }
        out
    }
}

fn deg(p: &Poly) -> i64 {
    p.degree().map(i64::from).unwrap_or(0)
}

impl Oracle {
    pub fn new(bound: u32) -> Oracle {
        Oracle {
            bound,
            seed: 0x5eed,
            random_trials: 8,
            max_basis_trials: 16,
        }
    }

    /// Bounded search for `1 = Σ a_j c_j + Σ s_k p_k` over the `t`-coefficients of `g`.
    pub fn unit_certificate(&self, g: &Poly, ctx: &QuotientCtx) -> Result<Option<(Vec<Poly>, Vec<Poly>)>> {
        let coeffs: Vec<Poly> = g.coeffs_in_t()?.into_iter().map(|(_, c)| c).collect();
        let table = ctx.table();
        let rels = ctx.relations();
        if let Some(i) = coeffs.iter().position(|c| c.is_nonzero_constant()) {
            let mut a: Vec<Poly> = coeffs.iter().map(|_| Poly::zero(table)).collect();
            a[i] = Poly::constant(table, Rat::one() / coeffs[i].constant_term());
            return Ok(Some((a, rels.iter().map(|_| Poly::zero(table)).collect())));
        }
        if coeffs.is_empty() {
            return Ok(None);
        }
        let top = self.bound as i64 + coeffs.iter().map(deg).max().unwrap_or(0);
        let mut sys = LinearSystem::new(table.len());
        for c in &coeffs {
            sys.add_block(c, self.bound as i64);
        }
        for r in rels {
            sys.add_block(r, top - deg(r));
        }
        Ok(sys.solve_for(&Poly::one(table), table).map(|mut parts| {
            let s = parts.split_off(coeffs.len());
            (parts, s)
        }))
    }

    /// Search for a primitive `g` of degree ≤ `bound` with `g · target ∈ ideal + relations`.
    ///
    /// `g` ranges over monomials standard with respect to the relations'
    /// leading terms, so that multiples of the relations (zero in `R`) do not
    /// crowd the solution space.
    pub fn multiplier(&self, target: &Poly, ideal: &[Poly], ctx: &QuotientCtx) -> Result<OracleVerdict> {
        let refs: Vec<&Poly> = std::iter::once(target).chain(ideal).collect();
        ctx.check(&refs)?;
        let table = ctx.table();
        let n = table.len();
        let lms = ctx.relations_gb().leading_monomials();
        let standard: Vec<Mono> = monomials_upto(n, self.bound)
            .into_iter()
            .filter(|m| !lms.iter().any(|l| l.divides(m)))
            .collect();
        let glen = standard.len();
        let mut sys = LinearSystem::new(n);
        sys.add_basis(target, standard.clone());
        let top = self.bound as i64 + deg(target);
        let neg = |p: &Poly| -> Poly { p.scale(&-Rat::one()) };
        for f in ideal.iter().chain(ctx.relations()) {
            sys.add_block(&neg(f), top - deg(f));
        }
        let cols = sys.cols();
        let basis = nullspace(sys.dense(), cols);
        // Echelonize the g-parts with high-degree monomials as pivots.
        let mut rows: Vec<Vec<Rat>> = basis.iter().map(|z| z[..glen].iter().rev().cloned().collect()).collect();
        rref(&mut rows, glen);
        let mut cands: Vec<Poly> = rows
            .iter()
            .map(|r| {
                let terms = standard
                    .iter()
                    .rev()
                    .zip(r)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m.clone(), c.clone()));
                Poly::from_terms(table, terms)
            })
            .filter(|g| !g.is_zero())
            .collect();
        if cands.is_empty() {
            return Ok(OracleVerdict::NotFound);
        }
        cands.sort_by_key(|g| (g.t_degree(), g.len(), g.degree()));
        let mut trials: Vec<Poly> = cands.iter().take(self.max_basis_trials).cloned().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        if cands.len() > 1 {
            for _ in 0..self.random_trials {
                let k = rng.gen_range(2..=cands.len().min(3));
                let mut g = Poly::zero(table);
                for h in cands.choose_multiple(&mut rng, k) {
                    let mut c = 0i64;
                    while c == 0 {
                        c = rng.gen_range(-3..=3);
                    }
                    g = &g + &h.scale(&Rat::from_integer(c.into()));
                }
                trials.push(g);
            }
        }
        for g in trials {
            if g.is_zero() {
                continue;
            }
            let Some((unit_cofactors, unit_relation_cofactors)) = self.unit_certificate(&g, ctx)? else {
                continue;
            };
            let mut parts = self
                .cofactors(&(&g * target), ideal, ctx, top)
                .expect("g lies in the solution space");
            let relation_cofactors = parts.split_off(ideal.len());
            return Ok(OracleVerdict::Found(OracleMultiplier {
                g,
                cofactors: parts,
                relation_cofactors,
                unit_cofactors,
                unit_relation_cofactors,
            }));
        }
        Ok(OracleVerdict::NotFound)
    }

    /// Cofactors `c_i, s_k` of degree bounded by `top` with `rhs = Σ c_i f_i + Σ s_k p_k`.
    fn cofactors(&self, rhs: &Poly, gens: &[Poly], ctx: &QuotientCtx, top: i64) -> Option<Vec<Poly>> {
        let mut sys = LinearSystem::new(ctx.table().len());
        for f in gens.iter().chain(ctx.relations()) {
            sys.add_block(f, top - deg(f));
        }
        sys.solve_for(rhs, ctx.table())
    }

    /// Is `u ∈ R(t)`? Found multipliers give `u = cofactors[0] / g`.
    pub fn nagata_member(&self, u: &TFrac, ctx: &QuotientCtx) -> Result<OracleVerdict> {
        self.multiplier(&u.num, std::slice::from_ref(&u.den), ctx)
    }

    /// Relevance of `(gens) R(t)`: normalize each generator with a found
    /// multiplier, then search a multiplier for every coefficient.
    pub fn is_relevant(&self, gens: &[TFrac], ctx: &QuotientCtx) -> Result<OracleRelevance> {
        let mut normalized = Vec::new();
        for (i, u) in gens.iter().enumerate() {
            match self.nagata_member(u, ctx)? {
                OracleVerdict::Found(m) => normalized.push(m.cofactors[0].clone()),
                OracleVerdict::NotFound => {
                    return Err(Error::usage(format!(
                        "oracle found no primitive multiplier for generator {} within degree {}",
                        i + 1,
                        self.bound
                    )))
                }
            }
        }
        for f in &normalized {
            for (_, c) in f.coeffs_in_t()?.into_iter().rev() {
                if !self.multiplier(&c, &normalized, ctx)?.found() {
                    return Ok(OracleRelevance {
                        relevant: false,
                        normalized,
                        failing_coefficient: Some(c),
                    });
                }
            }
        }
        Ok(OracleRelevance {
            relevant: true,
            normalized,
            failing_coefficient: None,
        })
    }
}

/// Does an oracle multiplier satisfy its two identities exactly?
pub fn check_multiplier(m: &OracleMultiplier, target: &Poly, ideal: &[Poly], ctx: &QuotientCtx) -> Result<bool> {
    let table = ctx.table();
    let rels = ctx.relations();
    if m.cofactors.len() != ideal.len() || m.relation_cofactors.len() != rels.len() {
        return Ok(false);
    }
    let mut rhs = Poly::zero(table);
    for (c, f) in m.cofactors.iter().zip(ideal).chain(m.relation_cofactors.iter().zip(rels)) {
        rhs = &rhs + &(c * f);
    }
    if &m.g * target != rhs {
        return Ok(false);
    }
    let coeffs: Vec<Poly> = m.g.coeffs_in_t()?.into_iter().map(|(_, c)| c).collect();
    if m.unit_cofactors.len() != coeffs.len() || m.unit_relation_cofactors.len() != rels.len() {
        return Ok(false);
    }
    let mut one = Poly::zero(table);
    for (a, c) in m.unit_cofactors.iter().zip(&coeffs).chain(m.unit_relation_cofactors.iter().zip(rels)) {
        one = &one + &(a * c);
    }
    Ok(one.is_one())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::poly::{BaseOrder, VarTable};

    fn p(t: &Arc<VarTable>, s: &str) -> Poly {
        Poly::parse(s, t).unwrap()
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_upto(3, 2).len(), 10);
        assert_eq!(monomials_upto(3, 4).len(), 35);
        assert_eq!(monomials_upto(1, 0).len(), 1);
    }

    #[test]
    fn ground_ring_refutes_and_chart_finds() {
        let t = VarTable::user(&["x", "y", "t"]).unwrap();
        let ctx = QuotientCtx::free(&t, BaseOrder::Grevlex);
        let o = Oracle::new(3);
        let u = TFrac {
            num: p(&t, "y"),
            den: p(&t, "x*t + y"),
        };
        assert!(!o.nagata_member(&u, &ctx).unwrap().found());

        let ty = VarTable::new(vec!["x".into(), "y".into(), "y1".into(), "t".into()]).unwrap();
        let cy = QuotientCtx::new(&ty, vec![p(&ty, "y*y1 - x")], BaseOrder::Grevlex).unwrap();
        let u = TFrac {
            num: p(&ty, "y"),
            den: p(&ty, "x*t + y"),
        };
        match o.nagata_member(&u, &cy).unwrap() {
            OracleVerdict::Found(m) => {
                assert!(check_multiplier(&m, &u.num, std::slice::from_ref(&u.den), &cy).unwrap());
            }
            OracleVerdict::NotFound => panic!("expected a multiplier"),
        }
    }

    #[test]
    fn oracle_relevance() {
        let t = VarTable::user(&["x", "y", "t"]).unwrap();
        let ctx = QuotientCtx::free(&t, BaseOrder::Grevlex);
        let o = Oracle::new(3);
        let r = o.is_relevant(&[TFrac::from_poly(p(&t, "x*t + y"))], &ctx).unwrap();
        assert!(!r.relevant);
        let r = o
            .is_relevant(&[TFrac::from_poly(p(&t, "x")), TFrac::from_poly(p(&t, "y*(t + 1)"))], &ctx)
            .unwrap();
        assert!(r.relevant);
    }
}
