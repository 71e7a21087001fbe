use super::*;
use crate::encoder::{generate_axioms, phi_of_subst, AxiomTag};
use crate::kernel::syntax::{parse_pattern, parse_term, print_pattern};
use crate::kernel::{Pattern, Signature, Sort, Term, Variable};
use crate::unifier::unify;

fn sig() -> Signature {
    Signature::parse(
        "sort Nat\nsymbol 1 : -> Nat [functional, injective]\nsymbol c : -> Nat [functional, injective]\n\
         symbol g : Nat -> Nat [functional, injective]\nsymbol f : Nat Nat Nat -> Nat [functional, injective]\n\
         symbol k : Nat -> Nat [functional, injective]\n",
    )
    .unwrap()
}

fn term(s: &str) -> Term {
    parse_term(s, &sig()).unwrap()
}

fn worked() -> (Term, Term) {
    (term("f(x:Nat, g(1), g(z:Nat))"), term("f(g(y:Nat), g(y), g(g(x:Nat)))"))
}

fn strict(sig: &Signature) -> CheckerConfig {
    CheckerConfig { allow_derived: false, ..CheckerConfig::new(sig) }
}

fn stage1(t1: &Term, t2: &Term) -> Certificate {
    let sig = sig();
    gen_stage1(&sig, t1, t2, &unify(&sig, t1, t2).unwrap()).unwrap()
}

fn stage2(t1: &Term, t2: &Term) -> Certificate {
    let sig = sig();
    let out = unify(&sig, t1, t2).unwrap();
    gen_stage2(&sig, t1, t2, out.mgu().unwrap()).unwrap()
}

#[test]
fn worked_example_certificates_check() {
    let sig = sig();
    let (t1, t2) = worked();
    let c1 = stage1(&t1, &t2);
    let c2 = stage2(&t1, &t2);
    assert_eq!(c1.conclusion, c2.hypotheses[0]);
    assert_eq!(c2.conclusion, c1.hypotheses[0]);
    assert_eq!(
        print_pattern(&c1.conclusion, &sig),
        "f(x, g(1), g(z)) /\\ x = g(1) /\\ y = 1 /\\ z = g(g(1))"
    );
    assert_eq!(c2.lines.len(), 17);
    let derived = c1.lines.iter().filter(|l| l.justification.is_derived()).count();
    assert_eq!(derived, 1 + 6);
    for c in [&c1, &c2] {
        assert_eq!(verify(&sig, c, &CheckerConfig::new(&sig)), CheckReport { ok: true, failed_line: None, reason: None });
        assert!(!verify(&sig, c, &strict(&sig)).ok);
        let expanded = inline_derived(&sig, c).unwrap();
        assert!(!expanded.uses_derived());
        let r = verify(&sig, &expanded, &strict(&sig));
        assert!(r.ok, "{r:?}\n{}", expanded.render_text(&sig));
    }
}

#[test]
fn trivial_and_small_instances() {
    let sig = sig();
    let t = term("g(x:Nat)");
    let c1 = stage1(&t, &t);
    // hypothesis, forward propagation, Delete, then `t /\ top`.
    assert_eq!(c1.lines.len(), 4);
    let c2 = stage2(&t, &t);
    assert_eq!(c2.lines.len(), 5);
    let (a, b) = (term("k(x:Nat)"), term("k(c)"));
    let c = stage1(&a, &b);
    assert_eq!(print_pattern(&c.conclusion, &sig), "k(x) /\\ x = c");
    assert_eq!(stage2(&a, &b).lines.len(), 9);
    for c in [stage1(&t, &t), stage2(&t, &t), stage1(&a, &b), stage2(&a, &b)] {
        assert!(verify(&sig, &c, &CheckerConfig::new(&sig)).ok);
        assert!(verify(&sig, &inline_derived(&sig, &c).unwrap(), &strict(&sig)).ok);
    }
}

#[test]
fn stage_generators_reject_bad_input() {
    let sig = sig();
    let (a, b) = (term("x:Nat"), term("g(x:Nat)"));
    let out = unify(&sig, &a, &b).unwrap();
    assert_eq!(gen_stage1(&sig, &a, &b, &out), Err(ProofError::NotSolved));
    let mut wrong = crate::kernel::Substitution::new();
    wrong.insert(Variable::new("x", Sort::new("Nat")), term("c"));
    assert!(matches!(gen_stage2(&sig, &term("g(x:Nat)"), &term("g(1)"), &wrong), Err(ProofError::NotMgu(_))));
}

#[test]
fn derived_bodies_have_table_lengths() {
    let sig = sig();
    let p = |s: &str| parse_pattern(s, &sig).unwrap();
    let cases = [
        (DerivedRule::Delete, "g(x:Nat) /\\ c = c", 2),
        (DerivedRule::Decomposition, "g(x:Nat) /\\ k(x) = k(c)", 6),
        (DerivedRule::Orient, "g(x:Nat) /\\ k(c) = x", 6),
        (DerivedRule::PropFpattForward, "g(x:Nat) /\\ g(c)", 10),
        (DerivedRule::PropFpattBackward, "g(x:Nat) /\\ g(x) = g(c)", 8),
        (DerivedRule::EqSymmetry, "x:Nat = c", 3),
    ];
    for (rule, premise, len) in cases {
        let body = expand_derived_rule(&sig, rule, &p(premise), None).unwrap();
        assert_eq!(body.lines.len(), len, "{}", rule.name());
        let r = verify(&sig, &body, &strict(&sig));
        assert!(r.ok, "{}: {r:?}", rule.name());
    }
    let h = Variable::new("h", Sort::new("Nat"));
    let ctx = (p("g(h:Nat) /\\ k(h:Nat) = c"), h);
    let premise = p("g(x:Nat) /\\ k(x) = c /\\ x = g(1)");
    let premise = match premise {
        Pattern::And(a, rest) => match *rest {
            Pattern::And(b, e) => Pattern::and(Pattern::and(*a, *b), *e),
            _ => unreachable!(),
        },
        _ => unreachable!(),
    };
    let body = expand_derived_rule(&sig, DerivedRule::Elimination, &premise, Some(&ctx)).unwrap();
    assert_eq!(body.lines.len(), 8);
    assert!(verify(&sig, &body, &strict(&sig)).ok);
    assert_eq!(print_pattern(&body.conclusion, &sig), "(g(g(1)) /\\ k(g(1)) = c) /\\ x = g(1)");
}

#[test]
fn decomposition_needs_the_injectivity_axiom() {
    let sig = sig();
    let premise = parse_pattern("g(x:Nat) /\\ k(x) = k(c)", &sig).unwrap();
    let body = expand_derived_rule(&sig, DerivedRule::Decomposition, &premise, None).unwrap();
    let mut cfg = strict(&sig);
    cfg.axioms = cfg.axioms.without(&AxiomTag::Injectivity("k".into()));
    let r = verify(&sig, &body, &cfg);
    assert_eq!(r.failed_line, Some(4));
    assert!(!r.ok);
}

#[test]
fn shape_violations_are_rejected() {
    let sig = sig();
    let (t1, t2) = worked();
    let mut c = stage2(&t1, &t2);
    // Modus ponens citing a non-implication.
    let last = c.lines.len();
    c.lines.push(ProofLine {
        index: last + 1,
        formula: c.conclusion.clone(),
        justification: Justification::ModusPonens { minor: 1, major: 2 },
    });
    let r = verify(&sig, &c, &CheckerConfig::new(&sig));
    assert_eq!(r.failed_line, Some(last + 1));
    let mut c = stage2(&t1, &t2);
    c.lines[3].formula = parse_pattern("x:Nat = g(c)", &sig).unwrap();
    assert!(!verify(&sig, &c, &CheckerConfig::new(&sig)).ok);
    let mut c = stage2(&t1, &t2);
    c.lines[2].justification = Justification::Unsupported("Framing".into());
    assert!(matches!(check_certificate(&sig, &c, &CheckerConfig::new(&sig)), Err(ProofError::UnsupportedRule { line: 3, .. })));
}

#[test]
fn axiom_matching_renames_and_remaps() {
    let sig = Signature::parse("sort S\nsort B\nsymbol p : -> B [functional, injective]\nsymbol k : B -> S [functional, injective]\n").unwrap();
    let ax = generate_axioms(&sig);
    let inj = ax.get(&AxiomTag::Injectivity("k".into())).unwrap();
    // Instance at target sort S, with the argument sort B.
    let line = parse_pattern("k(p) =@S k(b:B) -> p =@S b:B", &sig).unwrap();
    assert!(is_axiom_instance(&sig, inj, &line));
    let func = ax.get(&AxiomTag::Functionality("p".into())).unwrap();
    let renamed = parse_pattern("exists w:B . p = w", &sig).unwrap();
    assert!(is_axiom_instance(&sig, func, &renamed));
    let captured = parse_pattern("exists w:B . p = p", &sig).unwrap();
    assert!(!is_axiom_instance(&sig, func, &captured));
    let inj_p = ax.get(&AxiomTag::Injectivity("p".into())).unwrap();
    let constant = Pattern::implies(
        Pattern::equal(Pattern::app("p", vec![]), Pattern::app("p", vec![]), Sort::new("B"), Sort::new("S")),
        Pattern::top(Sort::new("S")),
    );
    assert!(is_axiom_instance(&sig, inj_p, &constant));
}

#[test]
fn certificates_round_trip_through_json() {
    let sig = sig();
    let (t1, t2) = worked();
    for c in [stage1(&t1, &t2), stage2(&t1, &t2)] {
        let back = Certificate::from_json(&c.to_json(&sig), &sig).unwrap();
        assert_eq!(back, c);
        assert!(c.render_text(&sig).contains("hypothesis"));
    }
    assert!(matches!(Certificate::from_json("{", &sig), Err(ProofError::Parse(_))));
}

#[test]
fn stage1_conclusion_is_the_substitution_encoding() {
    let sig = sig();
    let (t1, t2) = worked();
    let out = unify(&sig, &t1, &t2).unwrap();
    let c = gen_stage1(&sig, &t1, &t2, &out).unwrap();
    let nat = Sort::new("Nat");
    assert_eq!(c.conclusion, Pattern::and(t1.to_pattern(), phi_of_subst(out.mgu().unwrap(), &nat)));
}
