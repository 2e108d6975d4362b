//! The principal ideals generated by xt+y and xt²+y in D* for the blowup of
//! the origin in Q[x, y]: the relevance verdict in each chart is decided by
//! the content criterion and by the bounded oracle, and the two must agree.
//! Neither verdict is fixed in advance.

use dstar_core::blowup::build_model;
use dstar_core::nagata::{is_relevant, TFrac};
use dstar_core::oracle::Oracle;
use dstar_core::{BaseOrder, Poly, VarTable};

fn verdicts(generator: &str) -> Vec<(bool, bool)> {
    let g = VarTable::user(&["x", "y", "t"]).unwrap();
    let center = vec![Poly::parse("x", &g).unwrap(), Poly::parse("y", &g).unwrap()];
    let model = build_model(&g, center, BaseOrder::Grevlex).unwrap();
    let u = TFrac::from_poly(Poly::parse(generator, &g).unwrap());
    let oracle = Oracle::new(4);
    model
        .charts()
        .iter()
        .map(|c| {
            let v = c.lift_frac(&u).unwrap();
            let criterion = is_relevant(std::slice::from_ref(&v), c.ctx()).unwrap().relevant;
            let brute = oracle.is_relevant(std::slice::from_ref(&v), c.ctx()).unwrap().relevant;
            (criterion, brute)
        })
        .collect()
}

#[test]
fn linear_generator_is_relevant_in_every_chart() {
    let v = verdicts("x*t + y");
    println!("x*t + y: {v:?}");
    assert!(v.iter().all(|&(c, o)| c == o));
    assert!(v.iter().all(|&(c, _)| c));
}

#[test]
fn quadratic_generator_verdicts_agree() {
    let v = verdicts("x*t^2 + y");
    println!("x*t^2 + y: {v:?}");
    assert!(v.iter().all(|&(c, o)| c == o));
}
