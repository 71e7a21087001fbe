//! Encodings of unification problems and substitutions as predicate
//! patterns, and the axioms that give structural symbols their meaning.

use std::fmt;

use crate::kernel::syntax::print_pattern;
use crate::kernel::{KernelError, Pattern, Signature, Sort, Substitution, Term, Variable};
use crate::unifier::Problem;

/// `/\ (lhs = rhs)` over the equations in order, each equality at sort
/// `outer`; `bottom` for the failed problem and `top` for the empty one.
pub fn phi_of_problem(sig: &Signature, p: &Problem, outer: &Sort) -> Pattern {
    match p {
        Problem::Bottom => Pattern::bottom(outer.clone()),
        Problem::Equations(eqs) => Pattern::conj(
            eqs.iter()
                .map(|e| Pattern::equal(e.lhs.to_pattern(), e.rhs.to_pattern(), e.lhs.sort(sig), outer.clone()))
                .collect(),
            outer.clone(),
        ),
    }
}

/// `/\ (x = sigma(x))` over the bindings in variable order.
pub fn phi_of_subst(sigma: &Substitution, outer: &Sort) -> Pattern {
    Pattern::conj(sigma.iter().map(|(x, t)| binding_pattern(x, t, outer)).collect(), outer.clone())
}

pub fn binding_pattern(x: &Variable, t: &Term, outer: &Sort) -> Pattern {
    Pattern::equal(Pattern::Var(x.clone()), t.to_pattern(), x.sort.clone(), outer.clone())
}

/// `t /\ phi`, with no simplification.
pub fn conjoin_with_structure(sig: &Signature, t: &Term, phi: &Pattern) -> Result<Pattern, KernelError> {
    let (ts, ps) = (t.check(sig)?, phi.sort_of(sig)?);
    if ts != ps {
        return Err(KernelError::SortMismatch { left: ts, right: ps });
    }
    Ok(Pattern::and(t.to_pattern(), phi.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomTag {
    /// `|_ x:inner _|` at sort `outer`.
    Definedness { inner: Sort, outer: Sort },
    Functionality(String),
    Injectivity(String),
}

impl fmt::Display for AxiomTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomTag::Definedness { inner, outer } => write!(f, "definedness {inner} {outer}"),
            AxiomTag::Functionality(s) => write!(f, "functionality {s}"),
            AxiomTag::Injectivity(s) => write!(f, "injectivity {s}"),
        }
    }
}

impl AxiomTag {
    pub fn parse(text: &str) -> Option<AxiomTag> {
        let words: Vec<&str> = text.split_whitespace().collect();
        match words.as_slice() {
            ["definedness", a, b] => Some(AxiomTag::Definedness { inner: Sort::new(*a), outer: Sort::new(*b) }),
            ["functionality", s] => Some(AxiomTag::Functionality(s.to_string())),
            ["injectivity", s] => Some(AxiomTag::Injectivity(s.to_string())),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomSet {
    pub axioms: Vec<(AxiomTag, Pattern)>,
}

impl AxiomSet {
    pub fn get(&self, tag: &AxiomTag) -> Option<&Pattern> {
        self.axioms.iter().find(|(t, _)| t == tag).map(|(_, p)| p)
    }

    pub fn contains(&self, tag: &AxiomTag) -> bool {
        self.get(tag).is_some()
    }

    pub fn without(&self, tag: &AxiomTag) -> AxiomSet {
        AxiomSet { axioms: self.axioms.iter().filter(|(t, _)| t != tag).cloned().collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = &(AxiomTag, Pattern)> {
        self.axioms.iter()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// One axiom per line, tag as a trailing comment.
    pub fn export(&self, sig: &Signature) -> String {
        let mut out = String::new();
        for (tag, p) in &self.axioms {
            out.push_str(&format!("{}  # {tag}\n", print_pattern(p, sig)));
        }
        out
    }
}

fn args(prefix: &str, sorts: &[Sort]) -> Vec<Variable> {
    sorts.iter().enumerate().map(|(i, s)| Variable::new(format!("{prefix}{}", i + 1), s.clone())).collect()
}

fn vars(vs: &[Variable]) -> Vec<Pattern> {
    vs.iter().cloned().map(Pattern::Var).collect()
}

/// Definedness for every ordered pair of sorts, then functionality and
/// injectivity per symbol in name order.
pub fn generate_axioms(sig: &Signature) -> AxiomSet {
    let mut axioms = Vec::new();
    for inner in sig.sorts() {
        for outer in sig.sorts() {
            let x = Pattern::Var(Variable::new("x", inner.clone()));
            axioms.push((
                AxiomTag::Definedness { inner: inner.clone(), outer: outer.clone() },
                Pattern::ceil(x, inner.clone(), outer.clone()),
            ));
        }
    }
    for d in sig.symbols() {
        let res = &d.result;
        let xs = args("x", &d.arity);
        if sig.is_functional(&d.name) {
            let y = Variable::new("y", res.clone());
            let eq = Pattern::equal(Pattern::app(&d.name, vars(&xs)), Pattern::Var(y.clone()), res.clone(), res.clone());
            axioms.push((AxiomTag::Functionality(d.name.clone()), Pattern::exists(y, eq)));
        }
        if sig.is_injective(&d.name) {
            let ys = args("y", &d.arity);
            let lhs = Pattern::equal(Pattern::app(&d.name, vars(&xs)), Pattern::app(&d.name, vars(&ys)), res.clone(), res.clone());
            let rhs = Pattern::conj(
                xs.iter()
                    .zip(&ys)
                    .map(|(x, y)| Pattern::equal(Pattern::Var(x.clone()), Pattern::Var(y.clone()), x.sort.clone(), res.clone()))
                    .collect(),
                res.clone(),
            );
            axioms.push((AxiomTag::Injectivity(d.name.clone()), Pattern::implies(lhs, rhs)));
        }
    }
    AxiomSet { axioms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::syntax::{parse_pattern, parse_term};
    use crate::unifier::{unify, Equation};

    fn sig() -> Signature {
        Signature::parse(
            "sort Nat\nsymbol o : -> Nat [functional, injective]\nsymbol succ : Nat -> Nat [functional, injective]\n\
             symbol 1 : -> Nat [functional]\nsymbol g : Nat -> Nat [functional, injective]\n\
             symbol f : Nat Nat Nat -> Nat [functional, injective]\nsymbol p : Nat Nat -> Nat [functional, injective]\n",
        )
        .unwrap()
    }

    #[test]
    fn encodes_substitutions_in_variable_order() {
        let sig = sig();
        let out = unify(&sig, &parse_term("f(x:Nat, g(1), g(z:Nat))", &sig).unwrap(), &parse_term("f(g(y:Nat), g(y), g(g(x:Nat)))", &sig).unwrap()).unwrap();
        let nat = Sort::new("Nat");
        let phi = phi_of_subst(out.mgu().unwrap(), &nat);
        assert_eq!(print_pattern(&phi, &sig), "x = g(1) /\\ y = 1 /\\ z = g(g(1))");
        assert_eq!(phi_of_subst(&Substitution::new(), &nat), Pattern::top(nat.clone()));
        assert_eq!(phi_of_problem(&sig, &Problem::Bottom, &nat), Pattern::bottom(nat.clone()));
        assert_eq!(phi_of_problem(&sig, &Problem::Equations(vec![]), &nat), Pattern::top(nat));
    }

    #[test]
    fn problem_encoding_keeps_equation_order() {
        let sig = sig();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        let p = Problem::Equations(vec![Equation::new(t("z:Nat"), t("g(x:Nat)")), Equation::new(t("y:Nat"), t("y':Nat"))]);
        let phi = phi_of_problem(&sig, &p, &Sort::new("Nat"));
        assert_eq!(print_pattern(&phi, &sig), "z = g(x) /\\ y:Nat = y'");
    }

    #[test]
    fn axioms_have_the_expected_shapes() {
        let sig = sig();
        let ax = generate_axioms(&sig);
        let get = |tag| print_pattern(ax.get(&tag).unwrap(), &sig);
        assert_eq!(get(AxiomTag::Functionality("succ".into())), "exists y:Nat . succ(x1) = y");
        assert_eq!(get(AxiomTag::Functionality("o".into())), "exists y:Nat . o = y");
        assert_eq!(get(AxiomTag::Injectivity("p".into())), "p(x1, x2) = p(y1, y2) -> x1:Nat = y1 /\\ x2:Nat = y2");
        let nat = Sort::new("Nat");
        assert_eq!(get(AxiomTag::Definedness { inner: nat.clone(), outer: nat }), "|_ x:Nat _|");
        for (_, p) in ax.iter() {
            p.sort_of(&sig).unwrap();
        }
        let text = ax.export(&sig);
        assert_eq!(text.lines().count(), ax.len());
        for line in text.lines() {
            let (formula, tag) = line.split_once('#').unwrap();
            let tag = AxiomTag::parse(tag).unwrap();
            assert_eq!(&parse_pattern(formula, &sig).unwrap(), ax.get(&tag).unwrap());
        }
    }

    #[test]
    fn structure_must_share_the_sort() {
        let sig = Signature::parse("sort A\nsort B\nsymbol a : -> A [functional]\n").unwrap();
        let t = parse_term("a", &sig).unwrap();
        assert!(conjoin_with_structure(&sig, &t, &Pattern::top(Sort::new("A"))).is_ok());
        assert!(matches!(
            conjoin_with_structure(&sig, &t, &Pattern::top(Sort::new("B"))),
            Err(KernelError::SortMismatch { .. })
        ));
    }
}
