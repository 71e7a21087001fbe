//! Propositional validity over patterns. Maximal subpatterns that are not
//! negations or conjunctions are atoms; the canonical `top` is true.

use std::collections::{HashMap, HashSet};

use crate::kernel::Pattern;

use super::ProofError;

pub const DEFAULT_TAUTOLOGY_BUDGET: usize = 16;

enum Prop {
    True,
    Atom(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn eval(&self, row: u64) -> bool {
        match self {
            Prop::True => true,
            Prop::Atom(i) => row >> i & 1 == 1,
            Prop::Not(p) => !p.eval(row),
            Prop::And(a, b) => a.eval(row) && b.eval(row),
        }
    }
}

struct Atoms<'a> {
    ids: HashMap<&'a Pattern, usize>,
}

impl<'a> Atoms<'a> {
    fn abstract_(&mut self, p: &'a Pattern) -> Prop {
        if p.as_top().is_some() {
            return Prop::True;
        }
        match p {
            Pattern::Not(a) => Prop::Not(Box::new(self.abstract_(a))),
            Pattern::And(a, b) => Prop::And(Box::new(self.abstract_(a)), Box::new(self.abstract_(b))),
            _ => {
                let next = self.ids.len();
                Prop::Atom(*self.ids.entry(p).or_insert(next))
            }
        }
    }
}

/// Decides `premises -> conclusion` by truth table, failing when more than
/// `budget` atoms occur.
fn truth_table(premises: &[&Pattern], conclusion: &Pattern, budget: usize) -> Result<bool, ProofError> {
    let mut atoms = Atoms { ids: HashMap::new() };
    let prem: Vec<Prop> = premises.iter().map(|p| atoms.abstract_(p)).collect();
    let concl = atoms.abstract_(conclusion);
    let n = atoms.ids.len();
    if n > budget.min(63) {
        return Err(ProofError::TautologyBudgetExceeded { atoms: n, budget });
    }
    Ok((0..1u64 << n).all(|row| !prem.iter().all(|p| p.eval(row)) || concl.eval(row)))
}

fn conjuncts<'a>(p: &'a Pattern, out: &mut HashSet<&'a Pattern>) {
    match p {
        Pattern::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ if p.as_top().is_some() => {}
        _ => {
            out.insert(p);
        }
    }
}

fn all_in(p: &Pattern, known: &HashSet<&Pattern>) -> bool {
    match p {
        Pattern::And(a, b) => all_in(a, known) && all_in(b, known),
        _ => p.as_top().is_some() || known.contains(p),
    }
}

/// Conjunction splitting, implication introduction and forward chaining.
/// Sound but incomplete; it settles the common cases without a truth table.
fn quick(premises: &[&Pattern], conclusion: &Pattern) -> bool {
    let mut known = HashSet::new();
    for p in premises {
        conjuncts(p, &mut known);
    }
    let mut goal = conclusion;
    while let Some((a, b)) = goal.as_implies() {
        conjuncts(a, &mut known);
        goal = b;
    }
    loop {
        let fired: Vec<&Pattern> = known
            .iter()
            .filter_map(|p| p.as_implies())
            .filter(|(a, b)| all_in(a, &known) && !all_in(b, &known))
            .map(|(_, b)| b)
            .collect();
        if fired.is_empty() {
            break;
        }
        for b in fired {
            conjuncts(b, &mut known);
        }
    }
    all_in(goal, &known)
}

/// `a -> (b -> a)`.
pub fn is_p1(p: &Pattern) -> bool {
    matches!(p.as_implies(), Some((a, rest)) if matches!(rest.as_implies(), Some((_, a2)) if a2 == a))
}

/// `(a -> (b -> c)) -> ((a -> b) -> (a -> c))`.
pub fn is_p2(p: &Pattern) -> bool {
    let Some((l, r)) = p.as_implies() else { return false };
    let Some((a, bc)) = l.as_implies() else { return false };
    let Some((b, c)) = bc.as_implies() else { return false };
    let Some((ab, ac)) = r.as_implies() else { return false };
    ab.as_implies() == Some((a, b)) && ac.as_implies() == Some((a, c))
}

/// `(~b -> ~a) -> (a -> b)`.
pub fn is_p3(p: &Pattern) -> bool {
    let Some((l, r)) = p.as_implies() else { return false };
    let Some((nb, na)) = l.as_implies() else { return false };
    let Some((a, b)) = r.as_implies() else { return false };
    matches!((nb, na), (Pattern::Not(b2), Pattern::Not(a2)) if **a2 == *a && **b2 == *b)
}

/// Whether the conjunction of `premises` propositionally implies `conclusion`.
pub fn entails(premises: &[&Pattern], conclusion: &Pattern, budget: usize) -> Result<bool, ProofError> {
    if quick(premises, conclusion) {
        return Ok(true);
    }
    if premises.is_empty() && (is_p1(conclusion) || is_p2(conclusion) || is_p3(conclusion)) {
        return Ok(true);
    }
    truth_table(premises, conclusion, budget)
}

/// Propositional validity of `phi`.
pub fn check_tautology(phi: &Pattern, budget: usize) -> Result<bool, ProofError> {
    entails(&[], phi, budget)
}
