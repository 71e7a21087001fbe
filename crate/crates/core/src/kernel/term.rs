//! Term patterns (variables and functional symbol applications) and
//! substitutions over them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::pattern::{Head, Pattern, Variable};
use super::signature::{Signature, Sort};
use super::KernelError;

/// A term pattern: built only from variables and functional symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Variable),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>, sort: Sort) -> Self {
        Term::Var(Variable::new(name, sort))
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Self {
        Term::App(symbol.into(), Vec::new())
    }

    /// Converts a pattern into a term pattern, rejecting connectives,
    /// binders, definedness, and non-functional symbols.
    pub fn from_pattern(p: &Pattern, sig: &Signature) -> Result<Self, KernelError> {
        let t = Self::from_pattern_unchecked(p)?;
        t.check(sig)?;
        Ok(t)
    }

    fn from_pattern_unchecked(p: &Pattern) -> Result<Self, KernelError> {
        match p {
            Pattern::Var(v) => Ok(Term::Var(v.clone())),
            Pattern::App(Head::Symbol(f), args) => Ok(Term::App(
                f.clone(),
                args.iter().map(Self::from_pattern_unchecked).collect::<Result<_, _>>()?,
            )),
            _ => Err(KernelError::NotATerm("only variables and symbol applications may occur".into())),
        }
    }

    /// Checks sorts and that every symbol is functional; returns the sort.
    pub fn check(&self, sig: &Signature) -> Result<Sort, KernelError> {
        if let Some(f) = self.symbols().into_iter().find(|f| !sig.is_functional(f)) {
            return Err(KernelError::NotATerm(format!("symbol `{f}` is not functional")));
        }
        self.to_pattern().sort_of(sig)
    }

    /// Sort of a term already known to be well-formed.
    pub fn sort(&self, sig: &Signature) -> Sort {
        match self {
            Term::Var(v) => v.sort.clone(),
            Term::App(f, _) => sig.symbol(f).map(|d| d.result.clone()).expect("declared symbol"),
        }
    }

    pub fn to_pattern(&self) -> Pattern {
        match self {
            Term::Var(v) => Pattern::Var(v.clone()),
            Term::App(f, args) => Pattern::app(f.clone(), args.iter().map(Term::to_pattern).collect()),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let Term::App(f, args) = t {
                out.insert(f.clone());
                stack.extend(args);
            }
        }
        out
    }

    pub fn contains_var(&self, x: &Variable) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub fn apply(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply(sigma)).collect()),
        }
    }

    /// Replaces every occurrence of `x` with `t`.
    pub fn replace_var(&self, x: &Variable, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == x => t.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.replace_var(x, t)).collect()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Path (argument indices) to the leftmost, outermost occurrence of a
    /// variable satisfying `pred`.
    pub fn find_var(&self, pred: &impl Fn(&Variable) -> bool) -> Option<(Vec<usize>, &Variable)> {
        match self {
            Term::Var(v) => pred(v).then(|| (Vec::new(), v)),
            Term::App(_, args) => args.iter().enumerate().find_map(|(i, a)| {
                a.find_var(pred).map(|(mut path, v)| {
                    path.insert(0, i);
                    (path, v)
                })
            }),
        }
    }

    /// Replaces the subterm at `path` with `by`.
    pub fn replace_at(&self, path: &[usize], by: &Term) -> Term {
        match (path.split_first(), self) {
            (None, _) => by.clone(),
            (Some((&i, rest)), Term::App(f, args)) => {
                let mut args = args.clone();
                args[i] = args[i].replace_at(rest, by);
                Term::App(f.clone(), args)
            }
            (Some(_), Term::Var(_)) => panic!("path runs through a variable"),
        }
    }
}

impl fmt::Display for Term {
    /// Compact rendering with bare variable names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::App(s, args) if args.is_empty() => f.write_str(s),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A finite map from variables to term patterns. Bindings `x -> x` are
/// dropped, so two substitutions are equal exactly when their maps are.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Variable, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a binding, checking that both sides have the same sort.
    pub fn bind(&mut self, sig: &Signature, x: Variable, t: Term) -> Result<(), KernelError> {
        let sort = t.check(sig)?;
        if sort != x.sort {
            return Err(KernelError::SortMismatch { left: x.sort.clone(), right: sort });
        }
        self.insert(x, t);
        Ok(())
    }

    /// Adds a binding without checking sorts.
    pub fn insert(&mut self, x: Variable, t: Term) {
        if t == Term::Var(x.clone()) {
            self.bindings.remove(&x);
        } else {
            self.bindings.insert(x, t);
        }
    }

    pub fn get(&self, x: &Variable) -> Option<&Term> {
        self.bindings.get(x)
    }

    /// Bindings in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Variable> {
        self.bindings.keys()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// `x (sigma . eta) = (x sigma) eta`.
    pub fn compose(&self, eta: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (x, t) in &self.bindings {
            out.insert(x.clone(), t.apply(eta));
        }
        for (x, t) in &eta.bindings {
            if !self.bindings.contains_key(x) {
                out.insert(x.clone(), t.clone());
            }
        }
        out
    }

    /// Whether some `theta` satisfies `x self theta = x eta` for every `x` in `probe`.
    pub fn more_general(&self, eta: &Substitution, probe: &BTreeSet<Variable>) -> bool {
        let mut theta = BTreeMap::new();
        probe.iter().all(|x| {
            let lhs = Term::Var(x.clone()).apply(self);
            let rhs = Term::Var(x.clone()).apply(eta);
            match_term(&lhs, &rhs, &mut theta)
        })
    }
}

impl FromIterator<(Variable, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Variable, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (x, t) in iter {
            s.insert(x, t);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} -> {t}", x.name)?;
        }
        f.write_str("}")
    }
}

/// One-sided syntactic matching: extends `theta` so that `pattern theta = target`.
/// Unlike [`Substitution`], `theta` records identity bindings too.
pub fn match_term(pattern: &Term, target: &Term, theta: &mut BTreeMap<Variable, Term>) -> bool {
    match (pattern, target) {
        (Term::Var(x), _) => {
            if x.sort_mismatch(target) {
                return false;
            }
            match theta.get(x) {
                Some(bound) => bound == target,
                None => {
                    theta.insert(x.clone(), target.clone());
                    true
                }
            }
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(a, b)| match_term(a, b, theta))
        }
        _ => false,
    }
}

impl Variable {
    /// Without a signature only variable targets can be compared.
    fn sort_mismatch(&self, t: &Term) -> bool {
        matches!(t, Term::Var(v) if v.sort != self.sort)
    }
}
