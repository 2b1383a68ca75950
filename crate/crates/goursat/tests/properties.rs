use goursat::contact::{prolong, solve_first_order, verify_prolongation};
use goursat::flags::{dual, growth_vector_of, undual, DualSeq, GrowthVector};
use goursat::krforms::{build, KRStep, KRWord};
use goursat::sigtype::{
    delta_of_word, growth_from_sigtype, jacquard_enum, sigtype_from_growth, STWord,
};
use goursat::symcore::{origin, q, qf, Monomial, Poly, PolyVF, RatFn, Rational};
use proptest::prelude::*;

fn growth_strategy() -> impl Strategy<Value = GrowthVector> {
    proptest::collection::vec(any::<bool>(), 0..14).prop_map(|steps| {
        let mut dims = vec![2usize];
        for s in steps {
            let last = *dims.last().unwrap();
            dims.push(last + s as usize);
        }
        let last = *dims.last().unwrap();
        dims.push(last + 1);
        GrowthVector::new(dims).unwrap()
    })
}

fn dual_strategy() -> impl Strategy<Value = DualSeq> {
    proptest::collection::vec(1usize..4, 0..10).prop_map(|gaps| {
        let mut e = vec![1usize];
        for g in gaps {
            let last = *e.last().unwrap();
            e.push(last + g);
        }
        DualSeq::new(e).unwrap()
    })
}

fn step_strategy() -> impl Strategy<Value = KRStep> {
    prop_oneof![
        Just(KRStep::Singular),
        (-3i64..=3, 1i64..=3).prop_map(|(a, b)| KRStep::Regular(qf(a, b))),
    ]
}

fn word_strategy(max: usize) -> impl Strategy<Value = KRWord> {
    proptest::collection::vec(step_strategy(), 1..=max).prop_map(KRWord::new)
}

fn poly_strategy(n: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((proptest::collection::vec(0u32..3, n), -4i64..=4), 0..5).prop_map(move |terms| {
        Poly::from_terms(n, terms.into_iter().map(|(e, c)| (Monomial(e), q(c))))
    })
}

fn field_strategy(n: usize) -> impl Strategy<Value = PolyVF> {
    proptest::collection::vec(poly_strategy(n), n).prop_map(|c| PolyVF::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dual_undual_round_trip(g in growth_strategy()) {
        let n = g.ambient_dim();
        prop_assert_eq!(undual(&dual(&g), n).unwrap(), g);
    }

    #[test]
    fn undual_dual_round_trip(ds in dual_strategy()) {
        let n = ds.entries().len() + 1;
        let g = undual(&ds, n).unwrap();
        prop_assert_eq!(dual(&g), ds);
    }

    #[test]
    fn kr_word_text_round_trip(w in word_strategy(6)) {
        let back: KRWord = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn delta_is_jacquard_and_inverts(w in word_strategy(6)) {
        let st = delta_of_word(&w).unwrap();
        prop_assert!(st.is_jacquard());
        let back: STWord = st.to_string().parse().unwrap();
        prop_assert_eq!(&back, &st);
        let g = growth_from_sigtype(&st, w.dim()).unwrap();
        prop_assert_eq!(sigtype_from_growth(&g).unwrap(), st);
    }

    #[test]
    fn growth_depends_only_on_vanishing_of_constants(w in word_strategy(4)) {
        // Replace every nonzero constant by 1: the growth vector is unchanged.
        let flat = KRWord::new(w.steps.iter().map(|s| match s {
            KRStep::Regular(c) if *c != q(0) => KRStep::Regular(q(1)),
            other => other.clone(),
        }).collect());
        let z = origin(w.dim());
        prop_assert_eq!(growth_vector_of(&build(&w), &z).unwrap(), growth_vector_of(&build(&flat), &z).unwrap());
        let st = delta_of_word(&w).unwrap();
        prop_assert_eq!(growth_vector_of(&build(&w), &z).unwrap(), growth_from_sigtype(&st, w.dim()).unwrap());
    }

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(
        f in field_strategy(3), g in field_strategy(3), h in field_strategy(3)
    ) {
        let fg = f.lie_bracket(&g).unwrap();
        let gf = g.lie_bracket(&f).unwrap();
        prop_assert!(fg.add(&gf).unwrap().is_zero());
        let a = f.lie_bracket(&g.lie_bracket(&h).unwrap()).unwrap();
        let b = g.lie_bracket(&h.lie_bracket(&f).unwrap()).unwrap();
        let c = h.lie_bracket(&f.lie_bracket(&g).unwrap()).unwrap();
        prop_assert!(a.add(&b).unwrap().add(&c).unwrap().is_zero());
    }

    #[test]
    fn rational_functions_form_a_field(a in poly_strategy(2), b in poly_strategy(2), c in poly_strategy(2)) {
        prop_assume!(!c.is_zero());
        let (a, b, c) = (RatFn::from(a), RatFn::from(b), RatFn::from(c));
        let ac = a.checked_div(&c).unwrap();
        prop_assert_eq!(&(&ac * &c), &a);
        prop_assert_eq!(&(&(&ac + &b) - &b), &ac);
        // Quotient rule against the product rule.
        let lhs = ac.deriv(0);
        let rhs = (&(&a.deriv(0) * &c) - &(&a * &c.deriv(0))).checked_div(&(&c * &c)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scaled_shears_prolong_and_verify(a in 1i64..4, b in -3i64..=3, s in -2i64..=2, w in word_strategy(3)) {
        prop_assume!(b != 0);
        let (a, b, s) = (q(a), q(b), q(s));
        let x = |i| RatFn::var(3, i);
        let k = |v: Rational| RatFn::constant(3, v);
        // Scaling composed with a shear: (a x1, ab x2 + ab s x1^2/2, b x3 + b s x1).
        let phi = [
            &k(a.clone()) * &x(0),
            &(&k(&a * &b) * &x(1)) + &(&k(&a * &b * &s * qf(1, 2)) * &(&x(0) * &x(0))),
            &(&k(b.clone()) * &x(2)) + &(&k(&b * &s) * &x(0)),
        ];
        let base = solve_first_order(&phi).unwrap();
        let p = prolong(&base, &w).unwrap();
        prop_assert!(p.is_triangular());
        prop_assert!(verify_prolongation(&p, &w, &p.target).unwrap().pass);
        prop_assert_eq!(delta_of_word(&p.target).unwrap(), delta_of_word(&w).unwrap());
    }
}

#[test]
fn jacquard_members_are_recognized() {
    for n in 1..=8 {
        for w in jacquard_enum(n) {
            assert!(w.is_jacquard(), "{w}");
            assert_eq!(w.len(), n);
        }
    }
}
