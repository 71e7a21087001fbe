//! Certificate generation. The forward direction replays the unification
//! trace through the derived rules; the backward direction rebuilds
//! `t1 = t2` from the bindings of the unifier.

use crate::encoder::{binding_pattern, phi_of_subst};
use crate::kernel::{Pattern, Signature, Sort, Substitution, Term, Variable};
use crate::unifier::{Equation, Outcome, Rule};

use super::derived::{derived_conclusion, fresh_hole};
use super::{Certificate, DerivedRule, Justification, Mode, ProofError, ProofLine};

struct Lines {
    lines: Vec<ProofLine>,
}

impl Lines {
    fn push(&mut self, formula: Pattern, justification: Justification) -> usize {
        let index = self.lines.len() + 1;
        self.lines.push(ProofLine { index, formula, justification });
        index
    }

    fn taut(&mut self, formula: Pattern, schema: &str, premises: &[usize]) -> usize {
        self.push(formula, Justification::Tautology { schema: schema.into(), premises: premises.to_vec() })
    }

    fn last(&self) -> (usize, &Pattern) {
        let l = self.lines.last().expect("nonempty");
        (l.index, &l.formula)
    }

    fn finish(self, mode: Mode, hypothesis: Pattern) -> Certificate {
        let conclusion = self.lines.last().expect("nonempty").formula.clone();
        Certificate { mode, hypotheses: vec![hypothesis], lines: self.lines, conclusion }
    }
}

fn sorts(sig: &Signature, t1: &Term, t2: &Term) -> Result<Sort, ProofError> {
    let (s1, s2) = (t1.check(sig)?, t2.check(sig)?);
    if s1 != s2 {
        return Err(crate::kernel::KernelError::SortMismatch { left: s1, right: s2 }.into());
    }
    Ok(s1)
}

fn eq_pattern(sig: &Signature, e: &Equation, outer: &Sort) -> Pattern {
    Pattern::equal(e.lhs.to_pattern(), e.rhs.to_pattern(), e.lhs.sort(sig), outer.clone())
}

/// Certificate for `t1 /\ t2 -> t1 /\ phi^sigma`, one derived step per
/// trace step, with explicit rearrangement lines where the selected
/// equation is not already last.
pub fn gen_stage1(sig: &Signature, t1: &Term, t2: &Term, outcome: &Outcome) -> Result<Certificate, ProofError> {
    let Outcome::Solved { mgu, trace } = outcome else { return Err(ProofError::NotSolved) };
    let outer = sorts(sig, t1, t2)?;
    let (p1, p2) = (t1.to_pattern(), t2.to_pattern());
    let hyp = Pattern::and(p1.clone(), p2.clone());
    let mut out = Lines { lines: Vec::new() };
    out.push(hyp.clone(), Justification::Hypothesis);
    let fwd = derived_conclusion(sig, DerivedRule::PropFpattForward, &hyp, None)?;
    out.push(fwd, Justification::Derived { rule: DerivedRule::PropFpattForward, premise: 1, context: None });

    let mut eqs = vec![Equation::new(t1.clone(), t2.clone())];
    for step in trace {
        let rule = match step.rule {
            Rule::Delete => DerivedRule::Delete,
            Rule::Decomposition => DerivedRule::Decomposition,
            Rule::Orient => DerivedRule::Orient,
            Rule::Elimination => DerivedRule::Elimination,
            _ => return Err(ProofError::NotSolved),
        };
        let selected = eqs.get(step.position).ok_or(ProofError::NotSolved)?;
        let rest: Vec<Pattern> =
            eqs.iter().enumerate().filter(|(i, _)| *i != step.position).map(|(_, e)| eq_pattern(sig, e, &outer)).collect();
        let rest = (!rest.is_empty()).then(|| Pattern::conj(rest, outer.clone()));
        let psi = match &rest {
            Some(r) => Pattern::and(p1.clone(), r.clone()),
            None => p1.clone(),
        };
        let target = Pattern::and(psi, eq_pattern(sig, selected, &outer));
        let (mut cur, formula) = out.last();
        if *formula != target {
            cur = out.taut(target.clone(), "AC-REARRANGE", &[cur]);
        }
        let context = match (rule, &selected.lhs) {
            (DerivedRule::Elimination, Term::Var(x)) => {
                let h = fresh_hole(&x.sort, &[&target]);
                let c = match &rest {
                    Some(r) => Pattern::and(p1.clone(), r.subst(&Pattern::Var(h.clone()), x)),
                    None => p1.clone(),
                };
                Some((c, h))
            }
            _ => None,
        };
        let next = derived_conclusion(sig, rule, &target, context.as_ref())?;
        out.push(next, Justification::Derived { rule, premise: cur, context });
        eqs = step.result.equations().ok_or(ProofError::NotSolved)?.to_vec();
    }

    let target = Pattern::and(p1, phi_of_subst(mgu, &outer));
    let (cur, formula) = out.last();
    if *formula != target {
        out.taut(target, "AC-REARRANGE", &[cur]);
    }
    Ok(out.finish(Mode::Stage1, hyp))
}

/// Certificate for `t1 /\ phi^sigma -> t1 /\ t2`.
pub fn gen_stage2(sig: &Signature, t1: &Term, t2: &Term, sigma: &Substitution) -> Result<Certificate, ProofError> {
    let outer = sorts(sig, t1, t2)?;
    let (s1, s2) = (t1.apply(sigma), t2.apply(sigma));
    if s1 != s2 {
        return Err(ProofError::NotMgu(format!("instances differ: {s1} and {s2}")));
    }
    if &sigma.compose(sigma) != sigma {
        return Err(ProofError::NotMgu("substitution is not idempotent".into()));
    }
    let (p1, p2) = (t1.to_pattern(), t2.to_pattern());
    let phi = phi_of_subst(sigma, &outer);
    let hyp = Pattern::and(p1.clone(), phi.clone());
    let mut out = Lines { lines: Vec::new() };
    out.push(hyp.clone(), Justification::Hypothesis);
    let l_t1 = out.taut(p1.clone(), "AND-ELIM", &[1]);

    // Peel the bindings off the right-nested conjunction.
    let mut binding_line: Vec<(Variable, Term, usize)> = Vec::new();
    if !sigma.is_empty() {
        let mut cur = out.taut(phi.clone(), "AND-ELIM", &[1]);
        let bindings: Vec<(&Variable, &Term)> = sigma.iter().collect();
        for (k, (x, u)) in bindings.iter().enumerate() {
            if k + 1 == bindings.len() {
                binding_line.push(((*x).clone(), (*u).clone(), cur));
                break;
            }
            let b = out.taut(binding_pattern(x, u, &outer), "AND-ELIM", &[cur]);
            binding_line.push(((*x).clone(), (*u).clone(), b));
            let rest = Pattern::conj(bindings[k + 1..].iter().map(|(y, v)| binding_pattern(y, v, &outer)).collect(), outer.clone());
            cur = out.taut(rest, "AND-ELIM", &[cur]);
        }
    }

    let refl = |t: &Term| Pattern::equal(t.to_pattern(), t.to_pattern(), outer.clone(), outer.clone());
    let mut line_a = out.push(refl(t1), Justification::EqualityIntro);
    let mut line_b = if t1 == t2 { line_a } else { out.push(refl(t2), Justification::EqualityIntro) };

    let mut avoid = vec![hyp.clone(), p2.clone()];
    avoid.extend(sigma.iter().map(|(_, u)| u.to_pattern()));
    let avoid_refs: Vec<&Pattern> = avoid.iter().collect();
    let in_domain = |v: &Variable| sigma.get(v).is_some();
    // Rewrite the left side of `a = t`, one leftmost occurrence at a time.
    let rewrite = |out: &mut Lines, start: usize, mut a: Term, t: &Term| -> usize {
        let mut line = start;
        while let Some((path, x)) = a.find_var(&in_domain) {
            let x = x.clone();
            let (_, u, b) = binding_line.iter().find(|(y, ..)| *y == x).expect("bound variable");
            let h = fresh_hole(&x.sort, &avoid_refs);
            let holed = a.replace_at(&path, &Term::Var(h.clone()));
            let context = Pattern::equal(holed.to_pattern(), t.to_pattern(), outer.clone(), outer.clone());
            a = a.replace_at(&path, u);
            let formula = Pattern::equal(a.to_pattern(), t.to_pattern(), outer.clone(), outer.clone());
            line = out.push(formula, Justification::EqualityElim { premises: Some((*b, line)), context, hole: h });
        }
        line
    };
    line_a = rewrite(&mut out, line_a, t1.clone(), t1);
    if t1 != t2 {
        line_b = rewrite(&mut out, line_b, t2.clone(), t2);
    } else {
        line_b = line_a;
    }

    let goal = Pattern::equal(p1.clone(), p2.clone(), outer.clone(), outer.clone());
    let chain = if out.lines[line_a - 1].formula == goal {
        line_a
    } else {
        let h = fresh_hole(&outer, &avoid_refs);
        let context = Pattern::equal(Pattern::Var(h.clone()), p2.clone(), outer.clone(), outer.clone());
        out.push(goal.clone(), Justification::EqualityElim { premises: Some((line_a, line_b)), context, hole: h })
    };
    let with_eq = Pattern::and(p1.clone(), goal);
    let l = out.taut(with_eq.clone(), "AND-INTRO", &[l_t1, chain]);
    let back = derived_conclusion(sig, DerivedRule::PropFpattBackward, &with_eq, None)?;
    out.push(back, Justification::Derived { rule: DerivedRule::PropFpattBackward, premise: l, context: None });
    Ok(out.finish(Mode::Stage2, hyp))
}
