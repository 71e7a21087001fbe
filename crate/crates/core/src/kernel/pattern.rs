//! The pattern AST: variables, symbol applications, negation, conjunction and
//! existential quantification. Every other connective is stored in its
//! desugared form and recognized again by the `as_*` views.

use std::collections::BTreeSet;
use std::fmt;

use super::signature::{Signature, Sort};
use super::KernelError;

/// Name of the bound variable in the canonical `top` pattern `exists _top:s . _top:s`.
pub const TOP_VAR: &str = "_top";

/// A sorted variable. Identity is the (name, sort) pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub name: String,
    pub sort: Sort,
}

impl Variable {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Variable { name: name.into(), sort }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

/// Head of an application node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Symbol(String),
    /// The definedness symbol from sort `inner` to sort `outer`.
    Ceil { inner: Sort, outer: Sort },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Var(Variable),
    App(Head, Vec<Pattern>),
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Exists(Variable, Box<Pattern>),
}

impl Pattern {
    pub fn var(v: Variable) -> Self {
        Pattern::Var(v)
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Pattern>) -> Self {
        Pattern::App(Head::Symbol(symbol.into()), args)
    }

    pub fn not(p: Pattern) -> Self {
        Pattern::Not(Box::new(p))
    }

    pub fn and(p: Pattern, q: Pattern) -> Self {
        Pattern::And(Box::new(p), Box::new(q))
    }

    pub fn exists(v: Variable, body: Pattern) -> Self {
        Pattern::Exists(v, Box::new(body))
    }

    pub fn top(sort: Sort) -> Self {
        let v = Variable::new(TOP_VAR, sort);
        Pattern::exists(v.clone(), Pattern::Var(v))
    }

    pub fn bottom(sort: Sort) -> Self {
        Pattern::not(Pattern::top(sort))
    }

    pub fn or(p: Pattern, q: Pattern) -> Self {
        Pattern::not(Pattern::and(Pattern::not(p), Pattern::not(q)))
    }

    pub fn implies(p: Pattern, q: Pattern) -> Self {
        Pattern::or(Pattern::not(p), q)
    }

    pub fn iff(p: Pattern, q: Pattern) -> Self {
        Pattern::and(Pattern::implies(p.clone(), q.clone()), Pattern::implies(q, p))
    }

    pub fn ceil(p: Pattern, inner: Sort, outer: Sort) -> Self {
        Pattern::App(Head::Ceil { inner, outer }, vec![p])
    }

    /// `p in q`, i.e. `|_ p /\ q _|`.
    pub fn member(p: Pattern, q: Pattern, inner: Sort, outer: Sort) -> Self {
        Pattern::ceil(Pattern::and(p, q), inner, outer)
    }

    /// `p = q`, i.e. `~|_ ~(p <-> q) _|`.
    pub fn equal(p: Pattern, q: Pattern, inner: Sort, outer: Sort) -> Self {
        Pattern::not(Pattern::ceil(Pattern::not(Pattern::iff(p, q)), inner, outer))
    }

    /// Right-nested conjunction `p1 /\ (p2 /\ (...))`; `top` of `sort` when empty.
    pub fn conj(parts: Vec<Pattern>, sort: Sort) -> Self {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => Pattern::top(sort),
            Some(last) => iter.fold(last, |acc, p| Pattern::and(p, acc)),
        }
    }

    pub fn as_top(&self) -> Option<&Sort> {
        match self {
            Pattern::Exists(v, body) if v.name == TOP_VAR => match body.as_ref() {
                Pattern::Var(w) if w == v => Some(&v.sort),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_bottom(&self) -> Option<&Sort> {
        match self {
            Pattern::Not(p) => p.as_top(),
            _ => None,
        }
    }

    pub fn as_or(&self) -> Option<(&Pattern, &Pattern)> {
        if let Pattern::Not(inner) = self {
            if let Pattern::And(l, r) = inner.as_ref() {
                if let (Pattern::Not(a), Pattern::Not(b)) = (l.as_ref(), r.as_ref()) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn as_implies(&self) -> Option<(&Pattern, &Pattern)> {
        match self.as_or()? {
            (Pattern::Not(a), b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_iff(&self) -> Option<(&Pattern, &Pattern)> {
        if let Pattern::And(l, r) = self {
            let (a, b) = l.as_implies()?;
            let (b2, a2) = r.as_implies()?;
            if a == a2 && b == b2 {
                return Some((a, b));
            }
        }
        None
    }

    /// Returns `(argument, inner, outer)` for a definedness application.
    pub fn as_ceil(&self) -> Option<(&Pattern, &Sort, &Sort)> {
        match self {
            Pattern::App(Head::Ceil { inner, outer }, args) if args.len() == 1 => Some((&args[0], inner, outer)),
            _ => None,
        }
    }

    /// Returns `(lhs, rhs, inner, outer)` for an equality pattern.
    pub fn as_equal(&self) -> Option<(&Pattern, &Pattern, &Sort, &Sort)> {
        if let Pattern::Not(p) = self {
            let (arg, inner, outer) = p.as_ceil()?;
            if let Pattern::Not(q) = arg {
                let (a, b) = q.as_iff()?;
                return Some((a, b, inner, outer));
            }
        }
        None
    }

    pub fn as_member(&self) -> Option<(&Pattern, &Pattern, &Sort, &Sort)> {
        let (arg, inner, outer) = self.as_ceil()?;
        match arg {
            Pattern::And(a, b) => Some((a, b, inner, outer)),
            _ => None,
        }
    }

    /// Checks well-sortedness and returns the sort.
    pub fn sort_of(&self, sig: &Signature) -> Result<Sort, KernelError> {
        match self {
            Pattern::Var(v) => {
                if sig.has_sort(&v.sort) {
                    Ok(v.sort.clone())
                } else {
                    Err(KernelError::UnknownSort(v.sort.0.clone()))
                }
            }
            Pattern::App(Head::Symbol(name), args) => {
                let decl = sig.symbol(name).ok_or_else(|| KernelError::UnknownSymbol(name.clone()))?;
                if decl.arity.len() != args.len() {
                    return Err(KernelError::IllSorted(format!(
                        "`{name}` expects {} arguments, got {}",
                        decl.arity.len(),
                        args.len()
                    )));
                }
                for (i, (arg, want)) in args.iter().zip(&decl.arity).enumerate() {
                    let got = arg.sort_of(sig)?;
                    if &got != want {
                        return Err(KernelError::IllSorted(format!(
                            "argument {} of `{name}` has sort {got}, expected {want}",
                            i + 1
                        )));
                    }
                }
                Ok(decl.result.clone())
            }
            Pattern::App(Head::Ceil { inner, outer }, args) => {
                if args.len() != 1 {
                    return Err(KernelError::IllSorted("definedness takes one argument".into()));
                }
                let got = args[0].sort_of(sig)?;
                if &got != inner {
                    return Err(KernelError::IllSorted(format!(
                        "definedness argument has sort {got}, expected {inner}"
                    )));
                }
                if !sig.has_sort(outer) {
                    return Err(KernelError::UnknownSort(outer.0.clone()));
                }
                Ok(outer.clone())
            }
            Pattern::Not(p) => p.sort_of(sig),
            Pattern::And(p, q) => {
                let a = p.sort_of(sig)?;
                let b = q.sort_of(sig)?;
                if a != b {
                    return Err(KernelError::IllSorted(format!("conjunction of sorts {a} and {b}")));
                }
                Ok(a)
            }
            Pattern::Exists(v, body) => {
                if !sig.has_sort(&v.sort) {
                    return Err(KernelError::UnknownSort(v.sort.0.clone()));
                }
                body.sort_of(sig)
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Variable>, out: &mut BTreeSet<Variable>) {
        match self {
            Pattern::Var(v) => {
                if !bound.contains(&v) {
                    out.insert(v.clone());
                }
            }
            Pattern::App(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            Pattern::Not(p) => p.collect_free(bound, out),
            Pattern::And(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            Pattern::Exists(v, body) => {
                bound.push(v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn occurs_free(&self, x: &Variable) -> bool {
        match self {
            Pattern::Var(v) => v == x,
            Pattern::App(_, args) => args.iter().any(|a| a.occurs_free(x)),
            Pattern::Not(p) => p.occurs_free(x),
            Pattern::And(p, q) => p.occurs_free(x) || q.occurs_free(x),
            Pattern::Exists(v, body) => v != x && body.occurs_free(x),
        }
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn all_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Pattern::Var(v) => {
                out.insert(v.name.clone());
            }
            Pattern::App(_, args) => args.iter().for_each(|a| a.all_var_names(out)),
            Pattern::Not(p) => p.all_var_names(out),
            Pattern::And(p, q) => {
                p.all_var_names(out);
                q.all_var_names(out);
            }
            Pattern::Exists(v, body) => {
                out.insert(v.name.clone());
                body.all_var_names(out);
            }
        }
    }

    /// Capture-avoiding substitution `self[t/x]`.
    ///
    /// A binder that would capture a free variable of `t` is renamed to a
    /// fresh variable first.
    pub fn subst(&self, t: &Pattern, x: &Variable) -> Pattern {
        let t_free = t.free_vars();
        self.subst_with(t, &t_free, x)
    }

    fn subst_with(&self, t: &Pattern, t_free: &BTreeSet<Variable>, x: &Variable) -> Pattern {
        match self {
            Pattern::Var(v) => {
                if v == x {
                    t.clone()
                } else {
                    self.clone()
                }
            }
            Pattern::App(h, args) => {
                Pattern::App(h.clone(), args.iter().map(|a| a.subst_with(t, t_free, x)).collect())
            }
            Pattern::Not(p) => Pattern::not(p.subst_with(t, t_free, x)),
            Pattern::And(p, q) => Pattern::and(p.subst_with(t, t_free, x), q.subst_with(t, t_free, x)),
            Pattern::Exists(y, body) => {
                if y == x || !body.occurs_free(x) {
                    return self.clone();
                }
                if t_free.contains(y) {
                    let mut avoid = BTreeSet::new();
                    body.all_var_names(&mut avoid);
                    t.all_var_names(&mut avoid);
                    avoid.insert(x.name.clone());
                    let fresh = fresh_variable(y, &avoid);
                    let renamed = body.subst(&Pattern::Var(fresh.clone()), y);
                    Pattern::exists(fresh, renamed.subst_with(t, t_free, x))
                } else {
                    Pattern::exists(y.clone(), body.subst_with(t, t_free, x))
                }
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Pattern::Var(_) => 1,
            Pattern::App(_, args) => 1 + args.iter().map(Pattern::size).sum::<usize>(),
            Pattern::Not(p) | Pattern::Exists(_, p) => 1 + p.size(),
            Pattern::And(p, q) => 1 + p.size() + q.size(),
        }
    }

    /// Flattens nested conjunctions into their conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&Pattern> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            match p {
                Pattern::And(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                other => out.push(other),
            }
        }
        out
    }
}

/// A variable with the same sort as `base` whose name differs from every name
/// in `avoid`. The name is the stem of `base` with a numeric suffix greater than
/// any suffix already used with that stem.
pub fn fresh_variable(base: &Variable, avoid: &BTreeSet<String>) -> Variable {
    let stem = base.name.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    let max = avoid
        .iter()
        .chain(std::iter::once(&base.name))
        .filter_map(|n| n.strip_prefix(stem))
        .filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
        .filter_map(|rest| rest.parse::<u64>().ok())
        .max();
    let mut n = max.map_or(1, |m| m + 1);
    loop {
        let name = format!("{stem}{n}");
        if !avoid.contains(&name) && name != base.name {
            return Variable::new(name, base.sort.clone());
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> Sort {
        Sort::new("Nat")
    }

    fn v(name: &str) -> Pattern {
        Pattern::Var(Variable::new(name, nat()))
    }

    fn sig() -> Signature {
        let mut sig = Signature::new();
        sig.add_sort("Nat").unwrap();
        sig.add_sort("Bool").unwrap();
        sig.add_symbol("o", &[], "Nat", true, true).unwrap();
        sig.add_symbol("tt", &[], "Bool", true, true).unwrap();
        sig.add_symbol("succ", &["Nat"], "Nat", true, true).unwrap();
        sig.add_symbol("f", &["Nat", "Bool"], "Nat", true, true).unwrap();
        sig.add_symbol("g", &["Nat", "Nat"], "Nat", true, true).unwrap();
        sig
    }

    #[test]
    fn sort_of_examples() {
        let sig = sig();
        let succ_o = Pattern::app("succ", vec![Pattern::app("o", vec![])]);
        assert_eq!(succ_o.sort_of(&sig).unwrap(), nat());
        assert_eq!(v("x").sort_of(&sig).unwrap(), nat());
        let bad = Pattern::app("f", vec![v("x"), Pattern::app("o", vec![])]);
        assert!(matches!(bad.sort_of(&sig), Err(KernelError::IllSorted(_))));
        let mixed = Pattern::and(v("x"), Pattern::app("tt", vec![]));
        assert!(matches!(mixed.sort_of(&sig), Err(KernelError::IllSorted(_))));
        let eq = Pattern::equal(v("x"), v("y"), nat(), Sort::new("Bool"));
        assert_eq!(eq.sort_of(&sig).unwrap(), Sort::new("Bool"));
    }

    #[test]
    fn derived_views_recognize_their_constructors() {
        let (a, b) = (v("a"), v("b"));
        assert_eq!(Pattern::top(nat()).as_top(), Some(&nat()));
        assert_eq!(Pattern::bottom(nat()).as_bottom(), Some(&nat()));
        assert_eq!(Pattern::or(a.clone(), b.clone()).as_or(), Some((&a, &b)));
        assert_eq!(Pattern::implies(a.clone(), b.clone()).as_implies(), Some((&a, &b)));
        assert_eq!(Pattern::iff(a.clone(), b.clone()).as_iff(), Some((&a, &b)));
        let eq = Pattern::equal(a.clone(), b.clone(), nat(), nat());
        assert_eq!(eq.as_equal(), Some((&a, &b, &nat(), &nat())));
        let mem = Pattern::member(a.clone(), b.clone(), nat(), nat());
        assert_eq!(mem.as_member(), Some((&a, &b, &nat(), &nat())));
        // A plain binder is not `top`.
        let ex = Pattern::exists(Variable::new("q", nat()), v("q"));
        assert!(ex.as_top().is_none());
    }

    #[test]
    fn free_vars_examples() {
        let c = Pattern::app("c", vec![]);
        let t = Pattern::app("f", vec![Pattern::app("g", vec![v("x"), c.clone()]), v("y")]);
        let fv: Vec<_> = t.free_vars().into_iter().map(|v| v.name).collect();
        assert_eq!(fv, vec!["x", "y"]);
        assert!(c.free_vars().is_empty());
        let ex = Pattern::exists(Variable::new("x", nat()), Pattern::app("g", vec![v("x"), v("y")]));
        let fv: Vec<_> = ex.free_vars().into_iter().map(|v| v.name).collect();
        assert_eq!(fv, vec!["y"]);
    }

    #[test]
    fn subst_clauses() {
        let x = Variable::new("x", nat());
        let t = Pattern::app("succ", vec![v("z")]);
        assert_eq!(v("x").subst(&t, &x), t);
        assert_eq!(v("y").subst(&t, &x), v("y"));
        let neg = Pattern::not(Pattern::and(v("x"), v("y")));
        assert_eq!(neg.subst(&t, &x), Pattern::not(Pattern::and(t.clone(), v("y"))));
    }

    #[test]
    fn subst_renames_capturing_binder() {
        // (exists y . g(x, y))[succ(y)/x] = exists y1 . g(succ(y), y1)
        let x = Variable::new("x", nat());
        let y = Variable::new("y", nat());
        let phi = Pattern::exists(y.clone(), Pattern::app("g", vec![v("x"), v("y")]));
        let t = Pattern::app("succ", vec![v("y")]);
        let out = phi.subst(&t, &x);
        let Pattern::Exists(bound, body) = &out else { panic!("expected a binder") };
        assert_ne!(bound, &y);
        assert_eq!(**body, Pattern::app("g", vec![t.clone(), Pattern::Var(bound.clone())]));
        assert_eq!(out.free_vars(), BTreeSet::from([y]));
    }

    #[test]
    fn subst_leaves_shadowed_binder_alone() {
        let x = Variable::new("x", nat());
        let phi = Pattern::exists(x.clone(), v("x"));
        assert_eq!(phi.subst(&v("y"), &x), phi);
    }

    #[test]
    fn fresh_names_use_next_suffix() {
        let y = Variable::new("y", nat());
        let avoid: BTreeSet<String> = ["y", "y1", "y7", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_variable(&y, &avoid).name, "y8");
        assert_eq!(fresh_variable(&y, &BTreeSet::new()).name, "y1");
    }

    #[test]
    fn conj_is_right_nested() {
        let p = Pattern::conj(vec![v("a"), v("b"), v("c")], nat());
        assert_eq!(p, Pattern::and(v("a"), Pattern::and(v("b"), v("c"))));
        assert_eq!(p.conjuncts(), vec![&v("a"), &v("b"), &v("c")]);
        assert_eq!(Pattern::conj(vec![], nat()), Pattern::top(nat()));
    }
}
