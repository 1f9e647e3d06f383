use proptest::prelude::*;

use lrbi::arith::{rat, CPoly, Mono};
use lrbi::{Envelope, LieRinehartSpec};

fn poly() -> impl Strategy<Value = CPoly> {
    prop::collection::vec(((0u32..3, 0u32..3), -4i64..=4, 1i64..=3), 0..4).prop_map(|terms| {
        CPoly::from_terms(2, terms.into_iter().map(|((a, b), n, d)| (Mono::from_slice(&[a, b]), rat(n, d))))
    })
}

proptest! {
    #[test]
    fn ring_axioms(f in poly(), g in poly(), k in poly()) {
        prop_assert_eq!(&(&f * &g) * &k, &f * &(&g * &k));
        prop_assert_eq!(&f * &(&g + &k), &(&f * &g) + &(&f * &k));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn derivation_rule(f in poly(), g in poly(), j in 0usize..2) {
        prop_assert_eq!((&f * &g).deriv(j), &(&f.deriv(j) * &g) + &(&f * &g.deriv(j)));
    }

    #[test]
    fn display_parses_back(f in poly()) {
        prop_assert_eq!(CPoly::parse(&f.to_string(), 2).unwrap(), f);
    }

    #[test]
    fn envelope_commutator_is_anchor(f in poly(), i in 0usize..2) {
        let env = Envelope::new(LieRinehartSpec::derivations(2));
        let (d, a) = (env.gen(i), env.poly(&f));
        let comm = env.mul(&d, &a).sub(&env.mul(&a, &d));
        prop_assert_eq!(comm, env.poly(&f.deriv(i)));
    }

    #[test]
    fn envelope_associative(f in poly(), g in poly(), i in 0usize..2, j in 0usize..2) {
        let env = Envelope::new(LieRinehartSpec::derivations(2));
        let u = env.mul(&env.poly(&f), &env.gen(i));
        let v = env.mul(&env.gen(j), &env.poly(&g));
        let w = env.gen(1 - i);
        prop_assert_eq!(env.mul(&env.mul(&u, &v), &w), env.mul(&u, &env.mul(&v, &w)));
    }
}
