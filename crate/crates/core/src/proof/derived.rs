//! Conclusions of the derived rules and their bodies in base steps.

use std::collections::BTreeSet;

use crate::encoder::AxiomTag;
use crate::kernel::{fresh_variable, Head, Pattern, Signature, Sort, Term, Variable};

use super::{Certificate, DerivedRule, Justification, Mode, ProofError, ProofLine};

fn bad(msg: impl Into<String>) -> ProofError {
    ProofError::BadInstantiation(msg.into())
}

fn split_and(p: &Pattern) -> Result<(&Pattern, &Pattern), ProofError> {
    match p {
        Pattern::And(a, b) => Ok((a, b)),
        _ => Err(bad("premise is not a conjunction")),
    }
}

fn split_eq(p: &Pattern) -> Result<(&Pattern, &Pattern, &Sort, &Sort), ProofError> {
    p.as_equal().ok_or_else(|| bad("expected an equality"))
}

pub(crate) fn is_term(p: &Pattern, sig: &Signature) -> bool {
    Term::from_pattern(p, sig).is_ok()
}

/// Arguments of a symbol application.
fn app_args(p: &Pattern) -> Option<(&str, &[Pattern])> {
    match p {
        Pattern::App(Head::Symbol(f), args) => Some((f, args)),
        _ => None,
    }
}

/// `s1 = t1 /\ ... /\ sn = tn` at sort `outer`.
fn argwise(sig: &Signature, ss: &[Pattern], ts: &[Pattern], outer: &Sort) -> Result<Pattern, ProofError> {
    let mut parts = Vec::new();
    for (s, t) in ss.iter().zip(ts) {
        parts.push(Pattern::equal(s.clone(), t.clone(), s.sort_of(sig)?, outer.clone()));
    }
    Ok(Pattern::conj(parts, outer.clone()))
}

/// A hole variable of sort `sort` not occurring in any of `avoid`.
pub fn fresh_hole(sort: &Sort, avoid: &[&Pattern]) -> Variable {
    let mut names = BTreeSet::new();
    for p in avoid {
        p.all_var_names(&mut names);
    }
    fresh_variable(&Variable::new("h", sort.clone()), &names)
}

/// The formula a derived rule yields from `premise`.
pub fn derived_conclusion(
    sig: &Signature,
    rule: DerivedRule,
    premise: &Pattern,
    context: Option<&(Pattern, Variable)>,
) -> Result<Pattern, ProofError> {
    premise.sort_of(sig)?;
    match rule {
        DerivedRule::Delete => {
            let (phi, e) = split_and(premise)?;
            let (a, b, ..) = split_eq(e)?;
            if a != b || !is_term(a, sig) {
                return Err(bad("Delta1 needs an equation t = t between terms"));
            }
            Ok(phi.clone())
        }
        DerivedRule::Decomposition => {
            let (phi, e) = split_and(premise)?;
            let (a, b, _, outer) = split_eq(e)?;
            let ((f, ss), (g, ts)) = app_args(a).zip(app_args(b)).ok_or_else(|| bad("Delta2 needs two applications"))?;
            if f != g || ss.len() != ts.len() || !is_term(a, sig) || !is_term(b, sig) {
                return Err(bad("Delta2 needs terms with the same head symbol"));
            }
            Ok(Pattern::and(phi.clone(), argwise(sig, ss, ts, outer)?))
        }
        DerivedRule::Orient => {
            let (phi, e) = split_and(premise)?;
            let (a, b, inner, outer) = split_eq(e)?;
            if !matches!(b, Pattern::Var(_)) || app_args(a).is_none() || !is_term(a, sig) {
                return Err(bad("Delta3 needs an equation f(..) = x"));
            }
            Ok(Pattern::and(phi.clone(), Pattern::equal(b.clone(), a.clone(), inner.clone(), outer.clone())))
        }
        DerivedRule::Elimination => {
            let (c, h) = context.ok_or_else(|| bad("Delta4 needs a context"))?;
            let (lhs, e) = split_and(premise)?;
            let (x, t, ..) = split_eq(e)?;
            let Pattern::Var(xv) = x else { return Err(bad("Delta4 needs an equation x = t")) };
            if !is_term(t, sig) || h.sort != xv.sort {
                return Err(bad("Delta4 needs a term right side and a hole of the variable's sort"));
            }
            if &c.subst(x, h) != lhs {
                return Err(bad("context does not produce the premise"));
            }
            Ok(Pattern::and(c.subst(t, h), e.clone()))
        }
        DerivedRule::PropFpattForward => {
            let (a, b) = split_and(premise)?;
            if !is_term(a, sig) || !is_term(b, sig) {
                return Err(bad("forward propagation needs two term patterns"));
            }
            let s = a.sort_of(sig)?;
            Ok(Pattern::and(a.clone(), Pattern::equal(a.clone(), b.clone(), s.clone(), s)))
        }
        DerivedRule::PropFpattBackward => {
            let (a, e) = split_and(premise)?;
            let (l, r, ..) = split_eq(e)?;
            if l != a || !is_term(l, sig) || !is_term(r, sig) {
                return Err(bad("backward propagation needs phi /\\ (phi = phi')"));
            }
            Ok(Pattern::and(a.clone(), r.clone()))
        }
        DerivedRule::EqSymmetry => {
            let (a, b, inner, outer) = split_eq(premise)?;
            Ok(Pattern::equal(b.clone(), a.clone(), inner.clone(), outer.clone()))
        }
    }
}

struct Body {
    lines: Vec<ProofLine>,
}

impl Body {
    fn new(premise: &Pattern) -> Body {
        let mut b = Body { lines: Vec::new() };
        b.push(premise.clone(), Justification::Hypothesis);
        b
    }

    fn push(&mut self, formula: Pattern, justification: Justification) -> usize {
        let index = self.lines.len() + 1;
        self.lines.push(ProofLine { index, formula, justification });
        index
    }

    fn taut(&mut self, formula: Pattern, schema: &str, premises: &[usize]) -> usize {
        self.push(formula, Justification::Tautology { schema: schema.into(), premises: premises.to_vec() })
    }

    fn mp(&mut self, formula: Pattern, minor: usize, major: usize) -> usize {
        self.push(formula, Justification::ModusPonens { minor, major })
    }
}

/// The base-step body proving `premise -> conclusion` for one rule
/// instance. Line 1 is the premise as hypothesis; nested derived steps are
/// already expanded.
pub fn expand_derived_rule(
    sig: &Signature,
    rule: DerivedRule,
    premise: &Pattern,
    context: Option<&(Pattern, Variable)>,
) -> Result<Certificate, ProofError> {
    let conclusion = derived_conclusion(sig, rule, premise, context)?;
    let mut b = Body::new(premise);
    match rule {
        DerivedRule::Delete => {
            b.taut(conclusion.clone(), "AND-ELIM", &[1]);
        }
        DerivedRule::Decomposition => {
            let (phi, e) = split_and(premise)?;
            let (a, ..) = split_eq(e)?;
            let (f, _) = app_args(a).expect("checked above");
            let (_, rhs) = split_and(&conclusion)?;
            let l2 = b.taut(phi.clone(), "AND-ELIM", &[1]);
            let l3 = b.taut(e.clone(), "AND-ELIM", &[1]);
            let l4 = b.push(Pattern::implies(e.clone(), rhs.clone()), Justification::Axiom(AxiomTag::Injectivity(f.into())));
            let l5 = b.mp(rhs.clone(), l3, l4);
            b.taut(conclusion.clone(), "AND-INTRO", &[l2, l5]);
        }
        DerivedRule::Orient => {
            let (phi, e) = split_and(premise)?;
            let (_, flipped) = split_and(&conclusion)?;
            let l2 = b.taut(phi.clone(), "AND-ELIM", &[1]);
            let l3 = b.taut(e.clone(), "AND-ELIM", &[1]);
            let l4 = b.push(flipped.clone(), Justification::Derived { rule: DerivedRule::EqSymmetry, premise: l3, context: None });
            b.taut(conclusion.clone(), "AND-INTRO", &[l2, l4]);
        }
        DerivedRule::Elimination => {
            let (c, h) = context.expect("checked above").clone();
            let (lhs, e) = split_and(premise)?;
            let (_, t, ..) = split_eq(e)?;
            let rewritten = c.subst(t, &h);
            let l2 = b.taut(lhs.clone(), "AND-ELIM", &[1]);
            let l3 = b.taut(e.clone(), "AND-ELIM", &[1]);
            let l4 = b.taut(lhs.clone(), "IDENTITY", &[l2]);
            let both = Pattern::and(e.clone(), lhs.clone());
            let l5 = b.taut(both.clone(), "AND-INTRO", &[l3, l4]);
            let l6 = b.push(
                Pattern::implies(both, rewritten.clone()),
                Justification::EqualityElim { premises: None, context: c, hole: h },
            );
            let l7 = b.mp(rewritten, l5, l6);
            b.taut(conclusion.clone(), "AND-INTRO", &[l7, l3]);
        }
        DerivedRule::PropFpattForward => {
            let (a, bb) = split_and(premise)?;
            let s = a.sort_of(sig)?;
            let (_, eq) = split_and(&conclusion)?;
            let ceil = Pattern::ceil(premise.clone(), s.clone(), s.clone());
            b.push(
                Pattern::ceil(a.clone(), s.clone(), s.clone()),
                Justification::Axiom(AxiomTag::Definedness { inner: s.clone(), outer: s.clone() }),
            );
            let l3 = b.push(ceil.clone(), Justification::DefinednessDef(1));
            let p1 = Pattern::implies(ceil.clone(), Pattern::implies(premise.clone(), ceil.clone()));
            let l4 = b.taut(p1, "P1", &[]);
            let l5 = b.mp(Pattern::implies(premise.clone(), ceil), l3, l4);
            let member = Pattern::member(a.clone(), bb.clone(), s.clone(), s.clone());
            let l6 = b.push(Pattern::implies(premise.clone(), member), Justification::DefinednessDef(l5));
            let l7 = b.push(Pattern::implies(premise.clone(), eq.clone()), Justification::MembershipEquality(l6));
            let l8 = b.taut(Pattern::implies(premise.clone(), a.clone()), "AND-ELIM", &[]);
            let l9 = b.taut(Pattern::implies(premise.clone(), conclusion.clone()), "AND-INTRO", &[l7, l8]);
            b.mp(conclusion.clone(), 1, l9);
        }
        DerivedRule::PropFpattBackward => {
            let (a, e) = split_and(premise)?;
            let (_, r, inner, _) = split_eq(e)?;
            let l2 = b.taut(e.clone(), "AND-ELIM", &[1]);
            let l3 = b.taut(a.clone(), "AND-ELIM", &[1]);
            let h = fresh_hole(inner, &[premise]);
            let l4 = b.push(
                r.clone(),
                Justification::EqualityElim { premises: Some((l2, l3)), context: Pattern::Var(h.clone()), hole: h },
            );
            let l5 = b.taut(conclusion.clone(), "AND-INTRO", &[l3, l4]);
            let p1 = Pattern::implies(conclusion.clone(), Pattern::implies(premise.clone(), conclusion.clone()));
            let l6 = b.taut(p1, "P1", &[]);
            let l7 = b.mp(Pattern::implies(premise.clone(), conclusion.clone()), l5, l6);
            b.mp(conclusion.clone(), 1, l7);
        }
        DerivedRule::EqSymmetry => {
            let (a, _, inner, outer) = split_eq(premise)?;
            let h = fresh_hole(inner, &[premise]);
            let refl = Pattern::equal(a.clone(), a.clone(), inner.clone(), outer.clone());
            let l2 = b.push(refl, Justification::EqualityIntro);
            let context = Pattern::equal(Pattern::Var(h.clone()), a.clone(), inner.clone(), outer.clone());
            b.push(conclusion.clone(), Justification::EqualityElim { premises: Some((1, l2)), context, hole: h });
        }
    }
    let cert = Certificate {
        mode: Mode::DerivedRuleExpansion,
        hypotheses: vec![premise.clone()],
        lines: b.lines,
        conclusion,
    };
    inline_derived(sig, &cert)
}

/// Replaces every derived step by its body, so that the result uses base
/// justifications only. Hypotheses and conclusion are unchanged.
pub fn inline_derived(sig: &Signature, cert: &Certificate) -> Result<Certificate, ProofError> {
    if !cert.uses_derived() {
        return Ok(cert.clone());
    }
    let mut lines: Vec<ProofLine> = Vec::new();
    let mut new_index = vec![0usize; cert.lines.len() + 1];
    for (k, line) in cert.lines.iter().enumerate() {
        let at = |i: usize| -> Result<usize, ProofError> {
            new_index.get(i).copied().filter(|&n| n > 0 && i <= k).ok_or_else(|| bad(format!("line {} cites line {i}", k + 1)))
        };
        match &line.justification {
            Justification::Derived { rule, premise, context } => {
                let p = at(*premise)?;
                let body = expand_derived_rule(sig, *rule, &lines[p - 1].formula, context.as_ref())?;
                let offset = lines.len();
                let map = |i: usize| if i == 1 { p } else { offset + i - 1 };
                for bl in &body.lines[1..] {
                    lines.push(ProofLine {
                        index: map(bl.index),
                        formula: bl.formula.clone(),
                        justification: bl.justification.renumber(map),
                    });
                }
                if body.conclusion != line.formula {
                    return Err(bad(format!("line {} does not follow by {}", k + 1, rule.name())));
                }
            }
            j => {
                for i in j.cited() {
                    at(i)?;
                }
                let j = j.renumber(|i| new_index[i]);
                lines.push(ProofLine { index: lines.len() + 1, formula: line.formula.clone(), justification: j });
            }
        }
        new_index[k + 1] = lines.len();
    }
    Ok(Certificate { mode: cert.mode, hypotheses: cert.hypotheses.clone(), lines, conclusion: cert.conclusion.clone() })
}
