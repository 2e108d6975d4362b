//! Seeded generators of small random problems, shared by property tests and
//! the acceptance suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::nagata::TFrac;
use crate::poly::{Mono, Poly, Rat, VarTable};

/// A polynomial in the variables `vars` with at most `max_terms` terms of
/// total degree at most `max_deg` and integer coefficients in `[-3, 3]`.
pub fn random_poly<R: Rng>(rng: &mut R, table: &Arc<VarTable>, vars: &[usize], max_deg: u32, max_terms: usize) -> Poly {
    let nterms = rng.gen_range(1..=max_terms);
    let terms = (0..nterms).map(|_| {
        let mut e = vec![0u32; table.len()];
        let d = rng.gen_range(0..=max_deg);
        for _ in 0..d {
            e[*vars.choose(rng).expect("at least one variable")] += 1;
        }
        let mut c = 0i64;
        while c == 0 {
            c = rng.gen_range(-3..=3);
        }
        (Mono::new(e), Rat::from_integer(c.into()))
    });
    Poly::from_terms(table, terms)
}

/// A nonzero random ideal of `Q[x, y]` inside `table`: 1 to `max_gens`
/// generators of degree at most `max_deg`.
pub fn random_ideal<R: Rng>(rng: &mut R, table: &Arc<VarTable>, vars: &[usize], max_gens: usize, max_deg: u32) -> Vec<Poly> {
    let n = rng.gen_range(1..=max_gens);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = random_poly(rng, table, vars, max_deg, 3);
        if !p.is_zero() {
            out.push(p);
        }
    }
    out
}

/// A random element `num / den` of `K(t)` over `x` (and `y` when present):
/// the denominator is a product of one or two factors drawn from a pool of
/// primitive and non-primitive polynomials, and the numerator sometimes
/// absorbs one of its factors.
pub fn random_fraction<R: Rng>(rng: &mut R, table: &Arc<VarTable>) -> TFrac {
    let two = table.index_of("y").is_some();
    let pool: &[&str] = if two {
        &["t + x", "x*t + 1", "t - y", "y*t + x + 1", "x", "y", "x*t + y", "x + y", "x*t", "x - 1"]
    } else {
        &["t + x", "x*t + 1", "t^2 + x", "x", "x*t", "x - 1", "x^2*t + x"]
    };
    let parse = |s: &str| Poly::parse(s, table).expect("pool polynomial");
    let nf = rng.gen_range(1..=2);
    let factors: Vec<Poly> = (0..nf).map(|_| parse(pool.choose(rng).unwrap())).collect();
    let den = factors.iter().fold(Poly::one(table), |acc, f| &acc * f);
    let vars: Vec<usize> = (0..table.len() - 1).collect();
    let mut num = random_poly(rng, table, &vars, 1, 2);
    if rng.gen_bool(0.5) {
        num = &num * factors.choose(rng).unwrap();
    }
    if rng.gen_bool(0.3) {
        num = &num * &parse("t + 1");
    }
    TFrac { num, den }
}
