//! Exact rationals, variable tables, monomials, monomial orders and
//! multivariate polynomials.

mod mono;
mod order;
mod parse;
#[allow(clippy::module_inception)]
mod poly;
mod vars;

pub use mono::Mono;
pub use order::{compare, BaseOrder, Order};
pub use parse::parse_poly;
pub use poly::{poly_arith, ArithOp, Poly};
pub use vars::{is_chart_name, VarTable, CHART_PREFIX, NAGATA_VAR};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = num_rational::BigRational;

/// Parse a rational literal such as `-3/4` or `5`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d == num_bigint::BigInt::from(0) {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    use super::*;

    fn table() -> Arc<VarTable> {
        VarTable::user(&["x", "y", "z", "t"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, &table()).unwrap()
    }

    fn arb_poly(nvars: usize, maxdeg: u32) -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            (prop::collection::vec(0..=maxdeg, nvars), -5i64..=5, 1i64..=3),
            0..5,
        )
        .prop_map(move |terms| {
            let tab = VarTable::user(&["x", "y", "z"]).unwrap();
            let terms = terms.into_iter().map(|(mut e, n, d)| {
                // keep the total degree within bound
                while e.iter().sum::<u32>() > maxdeg {
                    let k = e.iter().position(|&v| v > 0).unwrap();
                    e[k] -= 1;
                }
                (Mono::new(e), Rat::new(BigInt::from(n), BigInt::from(d)))
            });
            Poly::from_terms(&tab, terms)
        })
    }

    #[test]
    fn ring_identity_examples() {
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        assert_eq!(&p("x*t + y") + &p("0"), p("x*t + y"));
    }

    #[test]
    fn mismatched_tables_are_usage_errors() {
        let other = VarTable::user(&["x", "y"]).unwrap();
        let a = Poly::parse("x", &other).unwrap();
        assert!(matches!(
            poly_arith(&a, &p("x"), ArithOp::Add),
            Err(crate::Error::TableMismatch { .. })
        ));
    }

    #[test]
    fn coeffs_in_t_examples() {
        let c = p("x*t + y").coeffs_in_t().unwrap();
        assert_eq!(c, vec![(0, p("y")), (1, p("x"))]);
        assert_eq!(p("7").coeffs_in_t().unwrap(), vec![(0, p("7"))]);
        let c = p("x*t^3 + x*t^3 - x*t^3 + y").coeffs_in_t().unwrap();
        assert_eq!(c, vec![(0, p("y")), (3, p("x"))]);
        assert!(p("0").coeffs_in_t().unwrap().is_empty());
        let no_t = VarTable::user(&["x"]).unwrap();
        assert!(Poly::parse("x", &no_t).unwrap().coeffs_in_t().is_err());
    }

    #[test]
    fn reconstruct_from_t_coeffs() {
        for s in ["x*t + y", "7", "x*t^3 + y", "t^2 + z", "x^2*t^2 - 3*y*t + 1/2", "0"] {
            let f = p(s);
            let c = f.coeffs_in_t().unwrap();
            assert!(c.iter().all(|(_, q)| q.t_degree() == 0));
            assert_eq!(Poly::from_t_coeffs(&table(), &c).unwrap(), f);
        }
    }

    #[test]
    fn embed_and_substitute() {
        let small = VarTable::user(&["x", "t"]).unwrap();
        let f = Poly::parse("x*t + 1", &small).unwrap();
        assert_eq!(f.embed(&table()).unwrap(), p("x*t + 1"));
        assert!(p("y").embed(&small).is_err());
        let tab = table();
        let g = p("x^2 + x*y").substitute(0, &p("y + 1"));
        assert_eq!(g, p("2*y^2 + 3*y + 1"));
        assert_eq!(p("x*y^2 + y^3").var_valuation(1), 2);
        let _ = tab;
    }

    #[test]
    fn parse_rat_literals() {
        assert_eq!(parse_rat("-6/4"), Some(Rat::new((-3).into(), 2.into())));
        assert_eq!(parse_rat("1/0"), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn rat_agrees_with_cross_multiplication(a in -1000i64..1000, b in 1i64..1000,
                                                c in -1000i64..1000, d in 1i64..1000) {
            let x = Rat::new(a.into(), b.into());
            let y = Rat::new(c.into(), d.into());
            let sum = &x + &y;
            let prod = &x * &y;
            prop_assert_eq!(sum.numer() * BigInt::from(b * d), BigInt::from(a * d + c * b) * sum.denom());
            prop_assert_eq!(prod.numer() * BigInt::from(b * d), BigInt::from(a * c) * prod.denom());
            prop_assert!(sum.denom().is_positive());
            prop_assert_eq!(num_integer::Integer::gcd(sum.numer(), sum.denom()) == BigInt::from(1) || sum.is_zero(), true);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn ring_axioms(a in arb_poly(3, 4), b in arb_poly(3, 4), c in arb_poly(3, 4)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn text_round_trip(a in arb_poly(3, 4)) {
            let s = a.to_string();
            let back = Poly::parse(&s, a.table()).unwrap();
            prop_assert_eq!(back.to_string(), s);
            prop_assert_eq!(back, a);
        }
    }
}
