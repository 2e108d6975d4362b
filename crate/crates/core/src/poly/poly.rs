use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::vars::same_table;
use super::{Mono, Order, Rat, VarTable};
use crate::error::{Error, Result};

/// Exact multivariate polynomial over Q.
///
/// Terms are kept sorted descending under grevlex over the whole table, with
/// no zero coefficients, so structural equality is polynomial equality.
#[derive(Clone)]
pub struct Poly {
    table: Arc<VarTable>,
    terms: Vec<(Mono, Rat)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn sort_canonical(terms: &mut [(Mono, Rat)]) {
    terms.sort_by(|a, b| Order::GREVLEX.cmp(&b.0, &a.0));
}

impl Poly {
    pub fn zero(table: &Arc<VarTable>) -> Poly {
        Poly {
            table: table.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(table: &Arc<VarTable>, c: Rat) -> Poly {
        let mut p = Poly::zero(table);
        if !c.is_zero() {
            p.terms.push((Mono::one(table.len()), c));
        }
        p
    }

    pub fn one(table: &Arc<VarTable>) -> Poly {
        Poly::constant(table, Rat::one())
    }

    pub fn from_int(table: &Arc<VarTable>, c: i64) -> Poly {
        Poly::constant(table, Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<Poly> {
        let i = table
            .index_of(name)
            .ok_or_else(|| Error::usage(format!("unknown variable `{name}` in {table}")))?;
        Ok(Poly::var_at(table, i, 1))
    }

    pub fn var_at(table: &Arc<VarTable>, i: usize, e: u32) -> Poly {
        Poly::monomial(table, Mono::var(table.len(), i, e), Rat::one())
    }

    pub fn monomial(table: &Arc<VarTable>, m: Mono, c: Rat) -> Poly {
        assert_eq!(m.len(), table.len());
        let mut p = Poly::zero(table);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Build from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(table: &Arc<VarTable>, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Poly {
        let mut acc: HashMap<Mono, Rat> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), table.len(), "monomial length does not match table");
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_canonical(&mut terms);
        Poly {
            table: table.clone(),
            terms,
        }
    }

    /// Trusted constructor for terms already sorted canonically with no zeros.
    pub(crate) fn from_sorted(table: &Arc<VarTable>, terms: Vec<(Mono, Rat)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| Order::GREVLEX.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly {
            table: table.clone(),
            terms,
        }
    }

    /// Distinct, nonzero terms in any order.
    pub(crate) fn from_unsorted_unique(table: &Arc<VarTable>, mut terms: Vec<(Mono, Rat)>) -> Poly {
        sort_canonical(&mut terms);
        Poly::from_sorted(table, terms)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant?
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_nonzero_constant() && self.terms[0].1.is_one()
    }

    pub fn constant_term(&self) -> Rat {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rat::zero(),
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    /// Degree in the Nagata variable (0 when the table has none).
    pub fn t_degree(&self) -> u32 {
        self.table.t_index().map_or(0, |i| self.degree_in(i))
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(var) > 0)
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: &Order) -> Option<(&Mono, &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    fn check_table(&self, other: &Poly) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch {
                left: self.table.to_string(),
                right: other.table.to_string(),
            })
        }
    }

    /// Ring operation with a table-compatibility check.
    pub fn arith(&self, other: &Poly, op: ArithOp) -> Result<Poly> {
        self.check_table(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other, false),
            ArithOp::Sub => self.add_unchecked(other, true),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                Order::GREVLEX.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly::from_sorted(&self.table, out)
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.table);
        }
        let mut acc: HashMap<Mono, Rat> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        let terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Poly::from_unsorted_unique(&self.table, terms)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.table);
        }
        Poly::from_sorted(
            &self.table,
            self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        )
    }

    /// `c * m * self`
    pub fn mul_term(&self, m: &Mono, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.table);
        }
        // multiplication by a monomial preserves any monomial order
        Poly::from_sorted(
            &self.table,
            self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.table);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Divide by the leading coefficient under `order`.
    pub fn monic(&self, order: &Order) -> Poly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Make the integer content positive-primitive: integral coefficients with
    /// gcd 1 and positive leading (grevlex) coefficient.
    pub fn primitive_integer_part(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for (_, c) in &self.terms {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .terms
            .iter()
            .map(|(_, c)| (c * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for i in &ints {
            g = g.gcd(i);
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        Poly::from_sorted(
            &self.table,
            self.terms
                .iter()
                .zip(ints)
                .map(|((m, _), i)| (m.clone(), Rat::from_integer(i / &g)))
                .collect(),
        )
    }

    /// Express the polynomial in another table, mapping variables by name.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<Poly> {
        if same_table(&self.table, target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.table.len());
        for (i, name) in self.table.names().iter().enumerate() {
            let j = target.index_of(name);
            if j.is_none() && self.involves(i) {
                return Err(Error::usage(format!(
                    "variable `{name}` does not exist in {target}"
                )));
            }
            map.push(j);
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target.len()];
            for (i, j) in map.iter().enumerate() {
                if let Some(j) = j {
                    e[*j] = m.exp(i);
                }
            }
            (Mono::new(e), c.clone())
        });
        Ok(Poly::from_terms(target, terms))
    }

    /// Coefficients of powers of `t`, ascending by degree, zero coefficients omitted.
    pub fn coeffs_in_t(&self) -> Result<Vec<(u32, Poly)>> {
        let ti = self
            .table
            .t_index()
            .ok_or_else(|| Error::usage(format!("{} has no Nagata variable t", self.table)))?;
        Ok(self.coeffs_in_var(ti))
    }

    /// Coefficients with respect to variable `var` (the coefficients keep the
    /// same table and do not involve `var`).
    pub fn coeffs_in_var(&self, var: usize) -> Vec<(u32, Poly)> {
        let mut by_deg: std::collections::BTreeMap<u32, Vec<(Mono, Rat)>> = Default::default();
        for (m, c) in &self.terms {
            let mut e = m.clone().into_inner();
            let d = std::mem::replace(&mut e[var], 0);
            by_deg.entry(d).or_default().push((Mono::new(e), c.clone()));
        }
        by_deg
            .into_iter()
            .map(|(d, ts)| (d, Poly::from_unsorted_unique(&self.table, ts)))
            .collect()
    }

    /// Inverse of [`Poly::coeffs_in_t`].
    pub fn from_t_coeffs(table: &Arc<VarTable>, coeffs: &[(u32, Poly)]) -> Result<Poly> {
        let ti = table
            .t_index()
            .ok_or_else(|| Error::usage(format!("{table} has no Nagata variable t")))?;
        let mut acc = Poly::zero(table);
        for (d, c) in coeffs {
            if c.involves(ti) {
                return Err(Error::usage("coefficient involves t"));
            }
            acc = &acc + &c.mul_term(&Mono::var(table.len(), ti, *d), &Rat::one());
        }
        Ok(acc)
    }

    /// Substitute `value` for variable `var`.
    pub fn substitute(&self, var: usize, value: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.table);
        let mut powers: Vec<Poly> = vec![Poly::one(&self.table)];
        for (d, c) in self.coeffs_in_var(var) {
            while powers.len() <= d as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            acc = &acc + &(&c * &powers[d as usize]);
        }
        acc
    }

    /// Ring map into `target` sending variable `i` to `images[i]`.
    pub fn compose(&self, images: &[Poly], target: &Arc<VarTable>) -> Poly {
        assert_eq!(images.len(), self.table.len(), "one image per variable");
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(target)]; images.len()];
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Exact quotient by a monomial if every term is divisible by it.
    pub fn div_mono(&self, m: &Mono) -> Option<Poly> {
        let terms = self
            .terms
            .iter()
            .map(|(n, c)| n.div(m).map(|q| (q, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(Poly::from_sorted(&self.table, terms))
    }

    /// Largest power of `var` dividing every term.
    pub fn var_valuation(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(var)).min().unwrap_or(0)
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.arith(rhs, ArithOp::Add).expect("table mismatch in +")
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.arith(rhs, ArithOp::Sub).expect("table mismatch in -")
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.arith(rhs, ArithOp::Mul).expect("table mismatch in *")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

/// `a op b` for polynomials in the same table.
pub fn poly_arith(a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly> {
    a.arith(b, op)
}

fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if m.is_one() || !abs.is_one() {
                factors.push(fmt_rat(&abs));
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.table.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.table.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
