//! The certificate checker. Every line must follow from earlier lines, the
//! hypotheses and the configured axioms by one rule of the supported fragment.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::encoder::{generate_axioms, AxiomSet, AxiomTag};
use crate::kernel::{Head, Pattern, Signature, Sort, Term, Variable, TOP_VAR};

use super::derived::{derived_conclusion, expand_derived_rule, is_term};
use super::tautology::{entails, DEFAULT_TAUTOLOGY_BUDGET};
use super::{Certificate, Justification, ProofError};

#[derive(Debug, Clone)]
pub struct CheckerConfig {
    pub axioms: AxiomSet,
    pub allow_derived: bool,
    /// Largest number of atoms decided by truth table.
    pub tautology_budget: usize,
}

impl CheckerConfig {
    /// All generated axioms of `sig`, derived rules allowed.
    pub fn new(sig: &Signature) -> Self {
        CheckerConfig { axioms: generate_axioms(sig), allow_derived: true, tautology_budget: DEFAULT_TAUTOLOGY_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub failed_line: Option<usize>,
    pub reason: Option<String>,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Checks `cert` and summarizes the first failure.
pub fn verify(sig: &Signature, cert: &Certificate, cfg: &CheckerConfig) -> CheckReport {
    match check_certificate(sig, cert, cfg) {
        Ok(()) => CheckReport { ok: true, failed_line: None, reason: None },
        Err(e) => {
            let failed_line = match &e {
                ProofError::LineRejected { line, .. } | ProofError::UnsupportedRule { line, .. } => Some(*line),
                _ => None,
            };
            CheckReport { ok: false, failed_line, reason: Some(e.to_string()) }
        }
    }
}

/// Like [`verify`], with the failure as an error value.
pub fn check_certificate(sig: &Signature, cert: &Certificate, cfg: &CheckerConfig) -> Result<(), ProofError> {
    sort_check(sig, cert)?;
    for (k, line) in cert.lines.iter().enumerate() {
        let n = k + 1;
        let reject = |reason: String| ProofError::LineRejected { line: n, reason };
        if line.index != n {
            return Err(reject(format!("numbered {}", line.index)));
        }
        for i in line.justification.cited() {
            if i == 0 || i >= n {
                return Err(reject(format!("cites line {i}")));
            }
        }
        check_line(sig, cert, cfg, n).map_err(|e| match e {
            ProofError::BadInstantiation(m) => reject(m),
            ProofError::TautologyBudgetExceeded { .. } | ProofError::LineRejected { .. } | ProofError::UnsupportedRule { .. } => e,
            other => reject(other.to_string()),
        })?;
    }
    match cert.lines.last() {
        None => Err(ProofError::Parse("no lines".into())),
        Some(l) if l.formula != cert.conclusion => {
            Err(ProofError::LineRejected { line: l.index, reason: "last line is not the conclusion".into() })
        }
        Some(_) => Ok(()),
    }
}

/// All formulas well-sorted and of one common sort.
fn sort_check(sig: &Signature, cert: &Certificate) -> Result<Sort, ProofError> {
    let ill = |what: String, e: crate::kernel::KernelError| ProofError::IllSorted(format!("{what}: {e}"));
    let mut common: Option<Sort> = None;
    let mut agree = |what: String, s: Sort| -> Result<(), ProofError> {
        match &common {
            Some(c) if *c != s => Err(ProofError::IllSorted(format!("{what} has sort {s}, expected {c}"))),
            Some(_) => Ok(()),
            None => {
                common = Some(s);
                Ok(())
            }
        }
    };
    for (i, h) in cert.hypotheses.iter().enumerate() {
        let s = h.sort_of(sig).map_err(|e| ill(format!("hypothesis {}", i + 1), e))?;
        agree(format!("hypothesis {}", i + 1), s)?;
    }
    for (i, l) in cert.lines.iter().enumerate() {
        let s = l.formula.sort_of(sig).map_err(|e| ill(format!("line {}", i + 1), e))?;
        agree(format!("line {}", i + 1), s)?;
        let ctx = match &l.justification {
            Justification::EqualityElim { context, hole, .. } => Some((context, hole)),
            Justification::Derived { context: Some((c, h)), .. } => Some((c, h)),
            _ => None,
        };
        if let Some((c, h)) = ctx {
            if !sig.has_sort(&h.sort) {
                return Err(ProofError::IllSorted(format!("line {}: unknown hole sort {}", i + 1, h.sort)));
            }
            c.sort_of(sig).map_err(|e| ill(format!("context of line {}", i + 1), e))?;
        }
    }
    let s = cert.conclusion.sort_of(sig).map_err(|e| ill("conclusion".into(), e))?;
    agree("conclusion".into(), s)?;
    common.ok_or_else(|| ProofError::Parse("empty certificate".into()))
}

fn check_line(sig: &Signature, cert: &Certificate, cfg: &CheckerConfig, n: usize) -> Result<(), ProofError> {
    let line = &cert.lines[n - 1];
    let phi = &line.formula;
    let f = |i: usize| cert.formula(i);
    let fail = |m: &str| Err(ProofError::BadInstantiation(m.to_string()));
    match &line.justification {
        Justification::Hypothesis => {
            if !cert.hypotheses.contains(phi) {
                return fail("not a hypothesis");
            }
        }
        Justification::Axiom(tag) => {
            let Some(schema) = cfg.axioms.get(tag) else {
                return fail(&format!("axiom `{tag}` is not in the axiom set"));
            };
            if !is_axiom_instance(sig, schema, phi) {
                return fail(&format!("not an instance of axiom `{tag}`"));
            }
        }
        Justification::Tautology { premises, .. } => {
            let prem: Vec<&Pattern> = premises.iter().map(|&i| f(i)).collect();
            if !entails(&prem, phi, cfg.tautology_budget)? {
                return fail("not a propositional consequence of the cited lines");
            }
        }
        Justification::ModusPonens { minor, major } => {
            if f(*major).as_implies() != Some((f(*minor), phi)) {
                return fail("major premise is not `minor -> line`");
            }
        }
        Justification::EqualityIntro => match phi.as_equal() {
            Some((a, b, ..)) if a == b => {}
            _ => return fail("not of the form `p = p`"),
        },
        Justification::EqualityElim { premises: Some((i, j)), context, hole } => {
            let Some((p1, p2, inner, _)) = f(*i).as_equal() else { return fail("first premise is not an equality") };
            if inner != &hole.sort {
                return fail("hole sort differs from the equality sort");
            }
            if f(*j) != &context.subst(p1, hole) {
                return fail("second premise is not the context at the left side");
            }
            if phi != &context.subst(p2, hole) {
                return fail("line is not the context at the right side");
            }
        }
        Justification::EqualityElim { premises: None, context, hole } => {
            let ok = phi.as_implies().is_some_and(|(ante, cons)| match ante {
                Pattern::And(e, c1) => e.as_equal().is_some_and(|(p1, p2, inner, _)| {
                    inner == &hole.sort && **c1 == context.subst(p1, hole) && *cons == context.subst(p2, hole)
                }),
                _ => false,
            });
            if !ok {
                return fail("not `(p1 = p2) /\\ C[p1] -> C[p2]` for the given context");
            }
        }
        Justification::MembershipEquality(i) => {
            let mut count = 0;
            if !membership_rewrite(sig, cfg, f(*i), phi, &mut count) || count == 0 {
                return fail("not a rewrite of memberships between term patterns into equalities");
            }
        }
        Justification::DefinednessDef(i) => {
            let source = f(*i);
            if phi != source {
                let s = source.sort_of(sig)?;
                let intro = phi.as_ceil().is_some_and(|(a, inner, outer)| a == source && inner == &s && outer == &s);
                if !intro {
                    return fail("neither a restatement nor the definedness of the cited line");
                }
                let tag = AxiomTag::Definedness { inner: s.clone(), outer: s };
                if !cfg.axioms.contains(&tag) {
                    return fail(&format!("axiom `{tag}` is not in the axiom set"));
                }
            }
        }
        Justification::Derived { rule, premise, context } => {
            if !cfg.allow_derived {
                return fail(&format!("derived rule {} is not allowed; expand it", rule.name()));
            }
            let source = f(*premise);
            if &derived_conclusion(sig, *rule, source, context.as_ref())? != phi {
                return fail(&format!("line does not follow by {}", rule.name()));
            }
            // A derived step is only as good as its expansion under the same axioms.
            let body = expand_derived_rule(sig, *rule, source, context.as_ref())?;
            let strict = CheckerConfig { allow_derived: false, ..cfg.clone() };
            if let Err(e) = check_certificate(sig, &body, &strict) {
                return fail(&format!("expansion of {} fails: {e}", rule.name()));
            }
        }
        Justification::Unsupported(rule) => {
            return Err(ProofError::UnsupportedRule { line: n, rule: rule.clone() });
        }
    }
    Ok(())
}

/// `dst` is `src` with some memberships `|_ a /\ b _|` between term
/// patterns replaced by `a = b` at the same sorts.
fn membership_rewrite(sig: &Signature, cfg: &CheckerConfig, src: &Pattern, dst: &Pattern, count: &mut usize) -> bool {
    if src == dst {
        return true;
    }
    if let (Some((a, b, i, o)), Some((a2, b2, i2, o2))) = (src.as_member(), dst.as_equal()) {
        if (a, b, i, o) == (a2, b2, i2, o2) && functional_term(sig, cfg, a) && functional_term(sig, cfg, b) {
            *count += 1;
            return true;
        }
    }
    match (src, dst) {
        (Pattern::App(h, xs), Pattern::App(h2, ys)) => {
            h == h2 && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| membership_rewrite(sig, cfg, x, y, count))
        }
        (Pattern::Not(x), Pattern::Not(y)) => membership_rewrite(sig, cfg, x, y, count),
        (Pattern::And(x1, x2), Pattern::And(y1, y2)) => {
            membership_rewrite(sig, cfg, x1, y1, count) && membership_rewrite(sig, cfg, x2, y2, count)
        }
        (Pattern::Exists(v, x), Pattern::Exists(w, y)) => v == w && membership_rewrite(sig, cfg, x, y, count),
        _ => false,
    }
}

/// A term pattern whose symbols all have their functionality axiom.
fn functional_term(sig: &Signature, cfg: &CheckerConfig, p: &Pattern) -> bool {
    is_term(p, sig)
        && Term::from_pattern(p, sig)
            .map(|t| t.symbols().into_iter().all(|f| cfg.axioms.contains(&AxiomTag::Functionality(f))))
            .unwrap_or(false)
}

struct Matcher<'a> {
    sig: &'a Signature,
    theta: BTreeMap<Variable, Pattern>,
    /// Consistent renaming of definedness target sorts.
    outer: BTreeMap<Sort, Sort>,
    /// Binder pairs (schema, instance), innermost last.
    bound: Vec<(Variable, Variable)>,
}

impl Matcher<'_> {
    fn map_outer(&mut self, from: &Sort, to: &Sort) -> bool {
        match self.outer.get(from) {
            Some(s) => s == to,
            None => {
                self.outer.insert(from.clone(), to.clone());
                true
            }
        }
    }

    fn go(&mut self, s: &Pattern, p: &Pattern) -> bool {
        match (s, p) {
            (Pattern::Var(v), _) => {
                if let Some((_, w)) = self.bound.iter().rev().find(|(sv, _)| sv == v) {
                    return matches!(p, Pattern::Var(u) if u == w);
                }
                // Free schema variables stand for term patterns that no
                // instance binder captures.
                let captured = p.free_vars().iter().any(|x| self.bound.iter().any(|(_, w)| w == x));
                if captured || !is_term(p, self.sig) || p.sort_of(self.sig).ok().as_ref() != Some(&v.sort) {
                    return false;
                }
                match self.theta.get(v) {
                    Some(q) => q == p,
                    None => {
                        self.theta.insert(v.clone(), p.clone());
                        true
                    }
                }
            }
            (Pattern::App(Head::Symbol(f), xs), Pattern::App(Head::Symbol(g), ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.go(x, y))
            }
            (Pattern::App(Head::Ceil { inner, outer }, xs), Pattern::App(Head::Ceil { inner: i2, outer: o2 }, ys)) => {
                inner == i2 && self.map_outer(outer, o2) && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.go(x, y))
            }
            (Pattern::Not(x), Pattern::Not(y)) => self.go(x, y),
            (Pattern::And(x1, x2), Pattern::And(y1, y2)) => self.go(x1, y1) && self.go(x2, y2),
            (Pattern::Exists(v, x), Pattern::Exists(w, y)) => {
                let sorts_ok = if v.name == TOP_VAR && w.name == TOP_VAR { self.map_outer(&v.sort, &w.sort) } else { v.sort == w.sort };
                if !sorts_ok {
                    return false;
                }
                self.bound.push((v.clone(), w.clone()));
                let ok = self.go(x, y);
                self.bound.pop();
                ok
            }
            _ => false,
        }
    }
}

/// One-sided matching of an axiom schema against `phi`, up to renaming of
/// bound variables and a consistent change of definedness target sorts.
pub fn is_axiom_instance(sig: &Signature, schema: &Pattern, phi: &Pattern) -> bool {
    let mut m = Matcher { sig, theta: BTreeMap::new(), outer: BTreeMap::new(), bound: Vec::new() };
    m.go(schema, phi)
}
