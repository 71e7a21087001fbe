//! Property tests over seeded random terms of the two-sorted signature.

mod common;

use std::collections::BTreeSet;

use common::{related_pair, s, term, two_sorted};
use mlunify::kernel::syntax::{parse_pattern, parse_term, print_pattern, print_term};
use mlunify::kernel::{Pattern, Substitution, Term, Variable};
use mlunify::proof::{gen_stage1, gen_stage2, verify, CheckerConfig};
use mlunify::unifier::{replay, unify, Problem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subst(rng: &mut ChaCha8Rng) -> Substitution {
    let mut sigma = Substitution::new();
    for name in ["x", "y", "z", "w"] {
        if rng.gen_bool(0.5) {
            sigma.insert(Variable::new(name, s()), term(rng, &s(), 2, 0.4));
        }
    }
    sigma
}

fn probe(terms: &[&Term]) -> BTreeSet<Variable> {
    let mut vs: BTreeSet<Variable> = ["x", "y", "z", "w"].iter().map(|n| Variable::new(*n, s())).collect();
    for t in terms {
        vs.extend(t.vars());
    }
    vs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn terms_and_patterns_print_and_parse_back(seed in any::<u64>(), depth in 0usize..5) {
        let sig = two_sorted();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = term(&mut rng, &s(), depth, 0.3);
        prop_assert_eq!(parse_term(&print_term(&t, &sig), &sig).unwrap(), t.clone());
        let u = term(&mut rng, &s(), depth, 0.3);
        let p = Pattern::implies(
            Pattern::and(t.to_pattern(), Pattern::exists(Variable::new("x", s()), u.to_pattern())),
            Pattern::equal(t.to_pattern(), u.to_pattern(), s(), s()),
        );
        prop_assert_eq!(parse_pattern(&print_pattern(&p, &sig), &sig).unwrap(), p);
        prop_assert_eq!(Term::from_pattern(&t.to_pattern(), &sig).unwrap(), t);
    }

    #[test]
    fn composition_applies_in_sequence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sigma, eta) = (subst(&mut rng), subst(&mut rng));
        let t = term(&mut rng, &s(), 4, 0.4);
        prop_assert_eq!(t.apply(&sigma.compose(&eta)), t.apply(&sigma).apply(&eta));
        let composed = sigma.compose(&eta);
        prop_assert!(sigma.more_general(&composed, &probe(&[&t])));
    }

    #[test]
    fn pattern_substitution_agrees_with_term_substitution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = term(&mut rng, &s(), 4, 0.4);
        let u = term(&mut rng, &s(), 2, 0.4);
        let x = Variable::new("x", s());
        let mut single = Substitution::new();
        single.insert(x.clone(), u.clone());
        prop_assert_eq!(t.to_pattern().subst(&u.to_pattern(), &x), t.apply(&single).to_pattern());
    }

    #[test]
    fn unifiers_are_most_general(seed in any::<u64>(), depth in 1usize..5) {
        let sig = two_sorted();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t1, t2) = related_pair(&mut rng, &sig, depth);
        let out = unify(&sig, &t1, &t2).unwrap();
        let replayed = replay(&Problem::single(t1.clone(), t2.clone()), out.trace()).unwrap();
        prop_assert_eq!(out.mgu().is_some(), replayed.equations().is_some());
        if let Some(mgu) = out.mgu() {
            prop_assert_eq!(t1.apply(mgu), t2.apply(mgu));
            prop_assert_eq!(&mgu.compose(mgu), mgu);
            // Every other unifier we can find is an instance.
            let eta = mgu.compose(&subst(&mut rng));
            prop_assert!(mgu.more_general(&eta, &probe(&[&t1, &t2])));
        } else {
            for _ in 0..8 {
                let eta = subst(&mut rng);
                prop_assert_ne!(t1.apply(&eta), t2.apply(&eta));
            }
        }
    }

    #[test]
    fn generated_certificates_verify(seed in any::<u64>(), depth in 1usize..4) {
        let sig = two_sorted();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t1, t2, out) = common::unifiable_pair(&mut rng, &sig, depth);
        let cfg = CheckerConfig::new(&sig);
        let c1 = gen_stage1(&sig, &t1, &t2, &out).unwrap();
        let c2 = gen_stage2(&sig, &t1, &t2, out.mgu().unwrap()).unwrap();
        prop_assert!(verify(&sig, &c1, &cfg).ok);
        prop_assert!(verify(&sig, &c2, &cfg).ok);
    }
}
