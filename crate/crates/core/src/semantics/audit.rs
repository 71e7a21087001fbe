//! Structural audits of models: functional and injective interpretations,
//! and the constructor axioms ("no junk", "no confusion").

use crate::kernel::{Pattern, Signature, Sort, SymbolDecl, Variable};

use super::{FiniteModel, SemanticsError};

/// Every functional symbol maps each tuple to exactly one element.
pub fn audit_functional(m: &FiniteModel) -> bool {
    let sig = m.signature();
    sig.symbols()
        .filter(|d| sig.is_functional(&d.name))
        .all(|d| m.table(&d.name).unwrap().iter().all(|e| e.is_some_and(|s| s.count_ones() == 1)))
}

/// Every injective symbol maps distinct tuples to disjoint sets.
pub fn audit_injective(m: &FiniteModel) -> bool {
    let sig = m.signature();
    sig.symbols().filter(|d| sig.is_injective(&d.name)).all(|d| {
        let mut seen = 0u64;
        m.table(&d.name).unwrap().iter().all(|e| match e {
            Some(s) if seen & s == 0 => {
                seen |= s;
                true
            }
            _ => false,
        })
    })
}

fn fresh(prefix: &str, sorts: &[Sort]) -> Vec<Variable> {
    sorts.iter().enumerate().map(|(i, s)| Variable::new(format!("{prefix}{}", i + 1), s.clone())).collect()
}

fn apply(d: &SymbolDecl, vars: &[Variable]) -> Pattern {
    Pattern::app(&d.name, vars.iter().cloned().map(Pattern::Var).collect())
}

/// `\/_c exists x1 ... xm . c(x1, ..., xm)` over the symbols of result
/// sort `sort`; `bottom` when there are none.
pub fn no_junk_axiom(sig: &Signature, sort: &Sort) -> Pattern {
    let mut disjuncts = sig.symbols().filter(|d| &d.result == sort).map(|d| {
        let xs = fresh("x", &d.arity);
        xs.iter().rev().fold(apply(d, &xs), |body, x| Pattern::exists(x.clone(), body))
    });
    let first = disjuncts.next();
    match first {
        None => Pattern::bottom(sort.clone()),
        Some(first) => disjuncts.fold(first, Pattern::or),
    }
}

/// `~(c(x...) /\ c'(y...))` for every pair of distinct symbols with a common result sort.
pub fn no_confusion_different_axioms(sig: &Signature) -> Vec<Pattern> {
    let decls: Vec<&SymbolDecl> = sig.symbols().collect();
    let mut out = Vec::new();
    for (i, c) in decls.iter().enumerate() {
        for d in &decls[i + 1..] {
            if c.result == d.result {
                let both = Pattern::and(apply(c, &fresh("x", &c.arity)), apply(d, &fresh("y", &d.arity)));
                out.push(Pattern::not(both));
            }
        }
    }
    out
}

/// `c(x...) /\ c(y...) -> c(x1 /\ y1, ...)` for every symbol.
pub fn no_confusion_same_axioms(sig: &Signature) -> Vec<Pattern> {
    sig.symbols()
        .map(|c| {
            let (xs, ys) = (fresh("x", &c.arity), fresh("y", &c.arity));
            let meet = xs.iter().zip(&ys).map(|(x, y)| Pattern::and(Pattern::Var(x.clone()), Pattern::Var(y.clone()))).collect();
            Pattern::implies(Pattern::and(apply(c, &xs), apply(c, &ys)), Pattern::app(&c.name, meet))
        })
        .collect()
}

pub fn satisfies_all(m: &FiniteModel, pats: &[Pattern]) -> Result<bool, SemanticsError> {
    for p in pats {
        if !m.satisfies(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn audit_no_junk(m: &FiniteModel) -> Result<bool, SemanticsError> {
    let sig = m.signature();
    let axioms: Vec<Pattern> = sig.sorts().map(|s| no_junk_axiom(sig, s)).collect();
    satisfies_all(m, &axioms)
}

pub fn audit_no_confusion_different(m: &FiniteModel) -> Result<bool, SemanticsError> {
    satisfies_all(m, &no_confusion_different_axioms(m.signature()))
}

pub fn audit_no_confusion_same(m: &FiniteModel) -> Result<bool, SemanticsError> {
    satisfies_all(m, &no_confusion_same_axioms(m.signature()))
}
