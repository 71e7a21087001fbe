//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mlunify::kernel::{Signature, Sort, Term};
use mlunify::semantics::{random_injective_model_sized, FiniteModel};
use mlunify::unifier::{unify, Outcome};
use rand::seq::SliceRandom;
use rand::Rng;

/// Two sorts; every symbol with a result in `S` has at most one argument of
/// sort `S`, so injective interpretations exist for any carrier of `S`
/// once `B` has a single element.
pub const TWO_SORTED: &str = "\
sort S
sort B
symbol a : -> S [functional, injective]
symbol b : -> S [functional, injective]
symbol g : S -> S [functional, injective]
symbol f : B S -> S [functional, injective]
symbol k : B -> S [functional, injective]
symbol p : -> B [functional, injective]
symbol q : -> B [functional, injective]
";

pub fn two_sorted() -> Signature {
    Signature::parse(TWO_SORTED).expect("fixed signature")
}

pub fn s() -> Sort {
    Sort::new("S")
}

pub fn b() -> Sort {
    Sort::new("B")
}

fn var(rng: &mut impl Rng, sort: &Sort) -> Term {
    let pool: &[&str] = if sort.name() == "S" { &["x", "y", "z", "w"] } else { &["u", "v"] };
    Term::var(*pool.choose(rng).unwrap(), sort.clone())
}

/// A random term of `sort` with depth at most `depth`; variables appear
/// with probability `pvar` at each node.
pub fn term(rng: &mut impl Rng, sort: &Sort, depth: usize, pvar: f64) -> Term {
    if rng.gen_bool(pvar) {
        return var(rng, sort);
    }
    if sort.name() == "B" {
        return Term::constant(if rng.gen_bool(0.5) { "p" } else { "q" });
    }
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..5) };
    match choice {
        0 => Term::constant("a"),
        1 => Term::constant("b"),
        2 => Term::app("g", vec![term(rng, sort, depth - 1, pvar)]),
        3 => Term::app("f", vec![term(rng, &b(), depth - 1, pvar), term(rng, sort, depth - 1, pvar)]),
        _ => Term::app("k", vec![term(rng, &b(), depth - 1, pvar)]),
    }
}

/// Replaces random subterms by variables of the same sort.
pub fn abstract_term(rng: &mut impl Rng, t: &Term, sig: &Signature, p: f64) -> Term {
    if rng.gen_bool(p) {
        return var(rng, &t.sort(sig));
    }
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| abstract_term(rng, a, sig, p)).collect()),
    }
}

/// Two abstractions of a common term; not always unifiable.
pub fn related_pair(rng: &mut impl Rng, sig: &Signature, depth: usize) -> (Term, Term) {
    let base = term(rng, &s(), depth, 0.1);
    (abstract_term(rng, &base, sig, 0.25), abstract_term(rng, &base, sig, 0.25))
}

/// A unifiable pair of sort `S` with depth at most `depth`, with its outcome.
pub fn unifiable_pair(rng: &mut impl Rng, sig: &Signature, depth: usize) -> (Term, Term, Outcome) {
    loop {
        let (t1, t2) = related_pair(rng, sig, depth);
        let out = unify(sig, &t1, &t2).expect("well-sorted");
        if matches!(out, Outcome::Solved { .. }) {
            return (t1, t2, out);
        }
    }
}

/// Seeded injective model with `|S| = size` and `|B| = 1`.
pub fn model(sig: &Signature, size: usize, seed: u64) -> FiniteModel {
    let sizes = BTreeMap::from([(s(), size), (b(), 1)]);
    random_injective_model_sized(sig, &sizes, seed).expect("injective model exists")
}
