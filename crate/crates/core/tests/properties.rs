//! Randomized invariants. Each case draws a seed and builds its inputs with
//! the seeded generators in `dstar_core::random`.

use std::sync::Arc;

use dstar_core::blowup::{build_model, glue_check, pullback, transition, BlowupModel, IdealSheaf};
use dstar_core::dstar::{dstar_member, roundtrip_check, sheaf_to_relevant};
use dstar_core::ideal::{
    colon, contains_ideal, content_of, divide_exact, eliminate, ideals_equal, intersect, is_unit_ideal, member,
    s_polynomial, saturate, saturate_iterated, GroebnerBasis, QuotientCtx,
};
use dstar_core::nagata::{
    contract_extension, is_primitive, is_relevant, member_of_extension, nagata_member, spaced_combination, NagataCert,
    TFrac,
};
use dstar_core::random::{random_fraction, random_ideal, random_poly};
use dstar_core::{BaseOrder, Mono, Poly, Rat, VarTable};
use num_traits::One;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn table(vars: &[&str]) -> Arc<VarTable> {
    VarTable::user(vars).unwrap()
}

fn free(t: &Arc<VarTable>) -> QuotientCtx {
    QuotientCtx::free(t, BaseOrder::Grevlex)
}

fn parse(s: &str, t: &Arc<VarTable>) -> Poly {
    Poly::parse(s, t).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn xy_center_model(center: &[&str]) -> (Arc<VarTable>, BlowupModel) {
    let g = table(&["x", "y", "t"]);
    let c = center.iter().map(|s| parse(s, &g)).collect();
    let m = build_model(&g, c, BaseOrder::Grevlex).unwrap();
    (g, m)
}

/// The chart data of `sheaf` on `model`, renamed onto `permuted`, whose
/// center is `model`'s center reordered by `perm` (new generator `k` is old
/// generator `perm[k]`).
fn transport(model: &BlowupModel, permuted: &BlowupModel, perm: &[usize], sheaf: &IdealSheaf) -> IdealSheaf {
    let mut inv = vec![0; perm.len()];
    for (k, &old) in perm.iter().enumerate() {
        inv[old] = k;
    }
    let per_chart = (0..perm.len())
        .map(|k| {
            let (src, dst) = (&model.charts()[perm[k]], &permuted.charts()[k]);
            let images: Vec<Poly> = src
                .table()
                .names()
                .iter()
                .map(|name| {
                    let renamed = match name.strip_prefix('y').and_then(|d| d.parse::<usize>().ok()) {
                        Some(i) => format!("y{}", inv[i - 1] + 1),
                        None => name.clone(),
                    };
                    Poly::var(dst.table(), &renamed).unwrap()
                })
                .collect();
            sheaf.per_chart[perm[k]].iter().map(|f| f.compose(&images, dst.table())).collect()
        })
        .collect();
    IdealSheaf::new(permuted, per_chart).unwrap()
}

fn random_monomials<R: Rng>(rng: &mut R, t: &Arc<VarTable>, n: usize, max_deg: u32) -> Vec<Mono> {
    (0..n)
        .map(|_| {
            let mut e = vec![0u32; t.len()];
            for _ in 0..rng.gen_range(0..=max_deg) {
                e[rng.gen_range(0..2)] += 1;
            }
            Mono::new(e)
        })
        .collect()
}

fn mono_poly(t: &Arc<VarTable>, m: &Mono) -> Poly {
    Poly::monomial(t, m.clone(), Rat::from_integer(1.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn groebner_bases_certify_themselves(seed in any::<u64>()) {
        let t = table(&["x", "y", "z"]);
        let ctx = free(&t);
        let gens = random_ideal(&mut rng(seed), &t, &[0, 1, 2], 3, 3);
        let order = ctx.order();
        let gb = GroebnerBasis::compute(&t, &gens, &order);
        for g in &gens {
            prop_assert!(gb.reduce(g).is_zero());
        }
        let basis = gb.basis();
        for (i, a) in basis.iter().enumerate() {
            prop_assert!(a.leading_term(&order).unwrap().1.is_one());
            for b in &basis[i + 1..] {
                prop_assert!(gb.reduce(&s_polynomial(a, b, &order)).is_zero());
            }
            for (j, b) in basis.iter().enumerate() {
                let lead = a.leading_term(&order).unwrap().0;
                prop_assert!(i == j || b.terms().iter().all(|(m, _)| !lead.divides(m)));
            }
        }
    }

    #[test]
    fn membership_is_order_independent(seed in any::<u64>()) {
        let t = table(&["x", "y", "z"]);
        let mut r = rng(seed);
        let gens = random_ideal(&mut r, &t, &[0, 1, 2], 3, 2);
        let mut f = random_poly(&mut r, &t, &[0, 1, 2], 2, 3);
        if r.gen_bool(0.5) {
            f = gens.iter().fold(Poly::zero(&t), |acc, g| &acc + &(g * &random_poly(&mut r, &t, &[0, 1, 2], 1, 2)));
        }
        let lex = QuotientCtx::free(&t, BaseOrder::Lex);
        prop_assert_eq!(member(&f, &gens, &lex).unwrap(), member(&f, &gens, &free(&t)).unwrap());
    }

    #[test]
    fn colon_and_saturation_galois(seed in any::<u64>()) {
        let t = table(&["x", "y"]);
        let ctx = free(&t);
        let mut r = rng(seed);
        let gens = random_ideal(&mut r, &t, &[0, 1], 3, 3);
        let f = random_poly(&mut r, &t, &[0, 1], 2, 2);
        prop_assume!(!f.is_zero());
        let q = colon(&gens, &f, &ctx).unwrap();
        let fq: Vec<Poly> = q.iter().map(|g| g * &f).collect();
        prop_assert!(contains_ideal(&gens, &fq, &ctx).unwrap());
        prop_assert!(contains_ideal(&q, &gens, &ctx).unwrap());
        let sat = saturate(&gens, &f, &ctx).unwrap();
        prop_assert!(ideals_equal(&colon(&sat, &f, &ctx).unwrap(), &sat, &ctx).unwrap());
        prop_assert!(ideals_equal(&saturate_iterated(&gens, &f, &ctx).unwrap(), &sat, &ctx).unwrap());
    }

    #[test]
    fn monomial_intersection_is_generated_by_lcms(seed in any::<u64>()) {
        let t = table(&["x", "y"]);
        let ctx = free(&t);
        let mut r = rng(seed);
        let na = r.gen_range(1..=4);
        let nb = r.gen_range(1..=4);
        let a = random_monomials(&mut r, &t, na, 3);
        let b = random_monomials(&mut r, &t, nb, 3);
        let lcms: Vec<Poly> = a.iter().flat_map(|m| b.iter().map(move |n| m.lcm(n))).map(|m| mono_poly(&t, &m)).collect();
        let pa: Vec<Poly> = a.iter().map(|m| mono_poly(&t, m)).collect();
        let pb: Vec<Poly> = b.iter().map(|m| mono_poly(&t, m)).collect();
        prop_assert!(ideals_equal(&intersect(&pa, &pb, &ctx).unwrap(), &lcms, &ctx).unwrap());
    }

    #[test]
    fn faithfully_flat_contraction(seed in any::<u64>()) {
        let t = table(&["x", "y", "t"]);
        let ctx = free(&t);
        let j = random_ideal(&mut rng(seed), &t, &[0, 1], 3, 2);
        let fr: Vec<TFrac> = j.iter().cloned().map(TFrac::from_poly).collect();
        prop_assert!(ideals_equal(&contract_extension(&fr, &ctx).unwrap(), &j, &ctx).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spaced_combination_adds_contents(seed in any::<u64>()) {
        let t = table(&["x", "y", "t"]);
        let ctx = free(&t);
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let fs: Vec<Poly> = (0..n)
            .map(|_| {
                let coeffs: Vec<(u32, Poly)> = (0..=r.gen_range(0..=2u32))
                    .map(|d| (d, random_poly(&mut r, &t, &[0, 1], 2, 2)))
                    .collect();
                Poly::from_t_coeffs(&t, &coeffs).unwrap()
            })
            .collect();
        let h = spaced_combination(&fs, &ctx).unwrap();
        let lhs = content_of(std::slice::from_ref(&h), &ctx).unwrap();
        let rhs = content_of(&fs, &ctx).unwrap();
        prop_assert!(ideals_equal(&lhs, &rhs, &ctx).unwrap());
    }

    #[test]
    fn nagata_verdicts_are_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars: &[&str] = if r.gen_bool(0.5) { &["x", "t"] } else { &["x", "y", "t"] };
        let t = table(vars);
        let ctx = free(&t);
        let u = random_fraction(&mut r, &t);
        match nagata_member(&u, &ctx).unwrap() {
            NagataCert::Member { f, g, .. } => {
                prop_assert!(is_primitive(&g, &ctx).unwrap());
                prop_assert!(ctx.is_zero(&(&(&u.num * &g) - &(&f * &u.den))));
            }
            NagataCert::NonMember { content_gb, .. } => {
                prop_assert!(!is_unit_ideal(&content_gb, &ctx).unwrap());
                for s in ["1", "t + x", "x*t + 1", "t^2 + x*t + 1", "x"] {
                    let g = &parse(s, &t) * &u.den;
                    let candidate = divide_exact(&(&u.num * &g), &u.den);
                    prop_assert!(candidate.is_none() || !is_primitive(&g, &ctx).unwrap());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relevance_inclusions_hold(seed in any::<u64>()) {
        let t = table(&["x", "y", "t"]);
        let ctx = free(&t);
        let mut r = rng(seed);
        let mut gens: Vec<TFrac> = (0..r.gen_range(1..=3))
            .map(|_| random_fraction(&mut r, &t))
            .filter(|u| nagata_member(u, &ctx).unwrap().is_member())
            .collect();
        if gens.is_empty() || r.gen_bool(0.5) {
            gens.push(TFrac::from_poly(random_poly(&mut r, &t, &[0, 1], 2, 2)));
        }
        prop_assume!(gens.iter().all(|g| !g.num.is_zero()));
        let report = is_relevant(&gens, &ctx).unwrap();
        if report.relevant {
            for f in &report.normalized {
                prop_assert!(member_of_extension(f, &report.content_gens, &ctx).unwrap());
            }
            for c in &report.content_gens {
                prop_assert!(member_of_extension(c, &report.normalized, &ctx).unwrap());
            }
        } else {
            prop_assert!(report.failing_coefficient.is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn chart_rings_embed_in_the_fraction_field(seed in any::<u64>()) {
        let g = table(&["x", "y", "t"]);
        let mut r = rng(seed);
        let center = random_ideal(&mut r, &g, &[0, 1], 3, 2);
        let model = build_model(&g, center, BaseOrder::Grevlex).unwrap();
        prop_assert!(model.embeddings_sound().unwrap());
        let gctx = model.ground_ctx().clone();
        for chart in model.charts() {
            let ys: Vec<&str> = chart.table().names().iter().filter(|n| n.starts_with('y')).map(|s| s.as_str()).collect();
            let drop: Vec<usize> = ys.iter().map(|n| chart.table().index_of(n).unwrap()).collect();
            prop_assert!(eliminate(chart.relations(), &drop, chart.ctx()).unwrap().iter().all(|p| p.is_zero()));
        }
        for (s, src) in model.charts().iter().enumerate() {
            let vars: Vec<usize> = (0..src.table().len() - 1).collect();
            let f = random_poly(&mut r, src.table(), &vars, 2, 3);
            let here = model.to_ground(src, &f).unwrap();
            for e in 0..model.len() {
                let moved = transition(&model, s, e, &f).unwrap();
                if e == s {
                    prop_assert!(moved.num == f && moved.den.is_one());
                }
                let dst = &model.charts()[e];
                let a = model.to_ground(dst, &moved.num).unwrap();
                let b = model.to_ground(dst, &moved.den).unwrap();
                let there = TFrac { num: &a.num * &b.den, den: &a.den * &b.num };
                prop_assert!(there.equals(&here, &gctx), "chart {s} -> {e}: {f}");
            }
        }
    }

    #[test]
    fn pullbacks_glue_and_round_trip(seed in any::<u64>()) {
        let (g, model) = xy_center_model(&["x", "y"]);
        let j = random_ideal(&mut rng(seed), &g, &[0, 1], 3, 2);
        let sheaf = pullback(&model, &j).unwrap();
        prop_assert!(glue_check(&model, &sheaf).unwrap().glued);
        prop_assert!(roundtrip_check(&model, &sheaf).unwrap().equal);
        if sheaf.is_proper(&model).unwrap() {
            let rep = sheaf_to_relevant(&model, &sheaf).unwrap();
            let mut proper = false;
            for (c, gens) in model.charts().iter().zip(&rep.per_chart_contraction) {
                proper |= !is_unit_ideal(gens, c.ctx()).unwrap();
            }
            prop_assert!(proper);
        }
    }

    #[test]
    fn glue_verdicts_survive_center_permutation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let center = ["x", "y", "x + y"];
        let (_, model) = xy_center_model(&center[..2 + r.gen_range(0..=1)]);
        let n = model.len();
        let per_chart: Vec<Vec<Poly>> = model
            .charts()
            .iter()
            .map(|c| {
                let vars: Vec<usize> = (0..c.table().len() - 1).collect();
                if r.gen_bool(0.5) {
                    vec![Poly::var(c.table(), "x").unwrap().pow(r.gen_range(1..=2))]
                } else {
                    random_ideal(&mut r, c.table(), &vars, 2, 1)
                }
            })
            .collect();
        let sheaf = IdealSheaf::new(&model, per_chart).unwrap();
        let verdict = glue_check(&model, &sheaf).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let names: Vec<String> = model.center().iter().map(|c| c.to_string()).collect();
        let reordered: Vec<&str> = perm.iter().map(|&i| names[i].as_str()).collect();
        let (_, permuted) = xy_center_model(&reordered);
        let moved = transport(&model, &permuted, &perm, &sheaf);
        prop_assert_eq!(glue_check(&permuted, &moved).unwrap().glued, verdict.glued);
    }

    #[test]
    fn dstar_membership_survives_center_permutation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, model) = xy_center_model(&["x", "y", "x + y"]);
        let u = random_fraction(&mut r, &g);
        let base = dstar_member(&model, &u).unwrap().is_member();
        let mut perm = vec!["x", "y", "x + y"];
        perm.shuffle(&mut r);
        let (_, permuted) = xy_center_model(&perm);
        prop_assert_eq!(dstar_member(&permuted, &u).unwrap().is_member(), base);
    }
}
