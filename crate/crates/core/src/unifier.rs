//! Rule-based syntactic unification.
//!
//! A problem is an ordered list of equations. Each step picks one rule and
//! one equation deterministically: failure rules first (leftmost equation
//! eligible for either), then Delete, Decomposition, Orient and Elimination,
//! each on its leftmost eligible equation. Rewritten equations stay in place,
//! so positions in a trace can be replayed exactly.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::syntax::print_pattern;
use crate::kernel::{KernelError, Pattern, Signature, Sort, Substitution, Term, Variable};

/// `lhs =? rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn is_unified_by(&self, sigma: &Substitution) -> bool {
        self.lhs.apply(sigma) == self.rhs.apply(sigma)
    }

    /// The equation as an equality pattern whose outer sort is its inner sort.
    pub fn to_pattern(&self, sig: &Signature) -> Pattern {
        let s = self.lhs.sort(sig);
        Pattern::equal(self.lhs.to_pattern(), self.rhs.to_pattern(), s.clone(), s)
    }

    pub fn render(&self, sig: &Signature) -> String {
        print_pattern(&self.to_pattern(sig), sig)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =? {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Equations(Vec<Equation>),
    Bottom,
}

impl Problem {
    pub fn single(t1: Term, t2: Term) -> Self {
        Problem::Equations(vec![Equation::new(t1, t2)])
    }

    pub fn equations(&self) -> Option<&[Equation]> {
        match self {
            Problem::Equations(eqs) => Some(eqs),
            Problem::Bottom => None,
        }
    }

    /// Every unifier of the problem unifies each equation; `Bottom` has none.
    pub fn is_unified_by(&self, sigma: &Substitution) -> bool {
        match self {
            Problem::Equations(eqs) => eqs.iter().all(|e| e.is_unified_by(sigma)),
            Problem::Bottom => false,
        }
    }

    pub fn render(&self, sig: &Signature) -> Vec<String> {
        match self {
            Problem::Equations(eqs) => eqs.iter().map(|e| e.render(sig)).collect(),
            Problem::Bottom => vec!["bottom".to_string()],
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Bottom => f.write_str("bottom"),
            Problem::Equations(eqs) => {
                f.write_str("{")?;
                for (i, e) in eqs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Delete,
    Decomposition,
    SymbolClash,
    Orient,
    OccursCheck,
    Elimination,
}

impl Rule {
    pub const ALL: [Rule; 6] =
        [Rule::Delete, Rule::Decomposition, Rule::SymbolClash, Rule::Orient, Rule::OccursCheck, Rule::Elimination];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Delete => "Delete",
            Rule::Decomposition => "Decomposition",
            Rule::SymbolClash => "SymbolClash",
            Rule::Orient => "Orient",
            Rule::OccursCheck => "OccursCheck",
            Rule::Elimination => "Elimination",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Rule::SymbolClash | Rule::OccursCheck)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    /// Index of the selected equation in the predecessor problem.
    pub position: usize,
    pub selected: Equation,
    pub result: Problem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    SymbolClash,
    OccursCheck,
}

impl FailureReason {
    pub fn label(self) -> &'static str {
        match self {
            FailureReason::SymbolClash => "symbol-clash",
            FailureReason::OccursCheck => "occurs-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Solved { mgu: Substitution, trace: Vec<TraceStep> },
    Failed { reason: FailureReason, witness: Equation, trace: Vec<TraceStep> },
}

impl Outcome {
    pub fn trace(&self) -> &[TraceStep] {
        match self {
            Outcome::Solved { trace, .. } | Outcome::Failed { trace, .. } => trace,
        }
    }

    pub fn mgu(&self) -> Option<&Substitution> {
        match self {
            Outcome::Solved { mgu, .. } => Some(mgu),
            Outcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("cannot unify terms of sorts {left} and {right}")]
    SortMismatch { left: Sort, right: Sort },
    #[error("the problem has already failed")]
    AlreadyFailed,
    #[error("rule {rule} does not apply to equation {position}")]
    RuleNotApplicable { rule: Rule, position: usize },
    #[error("no result after {0} steps")]
    StepBudgetExceeded(usize),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

fn clashes(e: &Equation) -> bool {
    match (&e.lhs, &e.rhs) {
        (Term::App(f, fa), Term::App(g, ga)) => f != g || fa.len() != ga.len(),
        _ => false,
    }
}

fn occurs(e: &Equation) -> bool {
    match (&e.lhs, &e.rhs) {
        (Term::Var(x), rhs @ Term::App(..)) => rhs.contains_var(x),
        _ => false,
    }
}

fn mentioned_elsewhere(eqs: &[Equation], skip: usize, x: &Variable) -> bool {
    eqs.iter().enumerate().any(|(i, e)| i != skip && (e.lhs.contains_var(x) || e.rhs.contains_var(x)))
}

/// Whether `rule` can fire on equation `i`.
fn applies(rule: Rule, eqs: &[Equation], i: usize) -> bool {
    let e = &eqs[i];
    match rule {
        Rule::SymbolClash => clashes(e),
        Rule::OccursCheck => occurs(e),
        Rule::Delete => e.lhs == e.rhs,
        Rule::Decomposition => {
            matches!((&e.lhs, &e.rhs), (Term::App(f, fa), Term::App(g, ga)) if f == g && fa.len() == ga.len())
        }
        Rule::Orient => matches!((&e.lhs, &e.rhs), (Term::App(..), Term::Var(_))),
        Rule::Elimination => match &e.lhs {
            Term::Var(x) => e.lhs != e.rhs && !e.rhs.contains_var(x) && mentioned_elsewhere(eqs, i, x),
            Term::App(..) => false,
        },
    }
}

/// Solved form: every equation is `x =? t` with `x` occurring nowhere else,
/// including its own right-hand side.
pub fn is_solved_form(p: &Problem) -> bool {
    match p {
        Problem::Bottom => true,
        Problem::Equations(eqs) => eqs.iter().enumerate().all(|(i, e)| match &e.lhs {
            Term::Var(x) => !e.rhs.contains_var(x) && !mentioned_elsewhere(eqs, i, x),
            Term::App(..) => false,
        }),
    }
}

/// Applies `rule` to equation `position`, checking its side conditions.
pub fn apply_rule(p: &Problem, rule: Rule, position: usize) -> Result<TraceStep, UnifyError> {
    let eqs = p.equations().ok_or(UnifyError::AlreadyFailed)?;
    if position >= eqs.len() || !applies(rule, eqs, position) {
        return Err(UnifyError::RuleNotApplicable { rule, position });
    }
    let selected = eqs[position].clone();
    let result = match rule {
        Rule::SymbolClash | Rule::OccursCheck => Problem::Bottom,
        Rule::Delete => {
            let mut out = eqs.to_vec();
            out.remove(position);
            Problem::Equations(out)
        }
        Rule::Decomposition => {
            let (Term::App(_, fa), Term::App(_, ga)) = (&selected.lhs, &selected.rhs) else { unreachable!() };
            let mut out = eqs[..position].to_vec();
            out.extend(fa.iter().zip(ga).map(|(a, b)| Equation::new(a.clone(), b.clone())));
            out.extend_from_slice(&eqs[position + 1..]);
            Problem::Equations(out)
        }
        Rule::Orient => {
            let mut out = eqs.to_vec();
            out[position] = Equation::new(selected.rhs.clone(), selected.lhs.clone());
            Problem::Equations(out)
        }
        Rule::Elimination => {
            let Term::Var(x) = &selected.lhs else { unreachable!() };
            let out = eqs
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    if i == position {
                        e.clone()
                    } else {
                        Equation::new(e.lhs.replace_var(x, &selected.rhs), e.rhs.replace_var(x, &selected.rhs))
                    }
                })
                .collect();
            Problem::Equations(out)
        }
    };
    Ok(TraceStep { rule, position, selected, result })
}

/// One deterministic step, or `None` when `p` is in solved form.
pub fn step(p: &Problem) -> Result<Option<TraceStep>, UnifyError> {
    let eqs = p.equations().ok_or(UnifyError::AlreadyFailed)?;
    if is_solved_form(p) {
        return Ok(None);
    }
    for i in 0..eqs.len() {
        for rule in [Rule::SymbolClash, Rule::OccursCheck] {
            if applies(rule, eqs, i) {
                return apply_rule(p, rule, i).map(Some);
            }
        }
    }
    for rule in [Rule::Delete, Rule::Decomposition, Rule::Orient, Rule::Elimination] {
        if let Some(i) = (0..eqs.len()).find(|&i| applies(rule, eqs, i)) {
            return apply_rule(p, rule, i).map(Some);
        }
    }
    unreachable!("a problem not in solved form always admits a rule")
}

/// Reads the substitution off a solved-form problem.
pub fn substitution_of(p: &Problem) -> Substitution {
    let mut sigma = Substitution::new();
    for e in p.equations().unwrap_or(&[]) {
        if let Term::Var(x) = &e.lhs {
            sigma.insert(x.clone(), e.rhs.clone());
        }
    }
    sigma
}

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

pub fn unify(sig: &Signature, t1: &Term, t2: &Term) -> Result<Outcome, UnifyError> {
    unify_with_budget(sig, t1, t2, DEFAULT_STEP_BUDGET)
}

pub fn unify_with_budget(sig: &Signature, t1: &Term, t2: &Term, budget: usize) -> Result<Outcome, UnifyError> {
    let (s1, s2) = (t1.check(sig)?, t2.check(sig)?);
    if s1 != s2 {
        return Err(UnifyError::SortMismatch { left: s1, right: s2 });
    }
    let mut problem = Problem::single(t1.clone(), t2.clone());
    let mut trace = Vec::new();
    while let Some(s) = step(&problem)? {
        if trace.len() == budget {
            return Err(UnifyError::StepBudgetExceeded(budget));
        }
        problem = s.result.clone();
        let failure = match s.rule {
            Rule::SymbolClash => Some(FailureReason::SymbolClash),
            Rule::OccursCheck => Some(FailureReason::OccursCheck),
            _ => None,
        };
        let witness = s.selected.clone();
        trace.push(s);
        if let Some(reason) = failure {
            return Ok(Outcome::Failed { reason, witness, trace });
        }
    }
    Ok(Outcome::Solved { mgu: substitution_of(&problem), trace })
}

/// Whether `p` and the step's result have the same unifiers among `candidates`.
pub fn unifiers_preserved(p: &Problem, s: &TraceStep, candidates: &[Substitution]) -> bool {
    candidates.iter().all(|c| p.is_unified_by(c) == s.result.is_unified_by(c))
}

/// Re-applies a trace from `initial`, checking every recorded result.
pub fn replay(initial: &Problem, trace: &[TraceStep]) -> Result<Problem, UnifyError> {
    let mut p = initial.clone();
    for s in trace {
        let again = apply_rule(&p, s.rule, s.position)?;
        if again != *s {
            return Err(UnifyError::RuleNotApplicable { rule: s.rule, position: s.position });
        }
        p = again.result;
    }
    Ok(p)
}

#[derive(Serialize)]
struct StepJson {
    rule: &'static str,
    equation: String,
    problem_after: Vec<String>,
}

/// JSON array of steps in the kernel text syntax.
pub fn trace_to_json(sig: &Signature, trace: &[TraceStep]) -> String {
    let steps: Vec<StepJson> = trace
        .iter()
        .map(|s| StepJson { rule: s.rule.name(), equation: s.selected.render(sig), problem_after: s.result.render(sig) })
        .collect();
    serde_json::to_string_pretty(&steps).expect("trace serializes")
}
