//! Finite-model semantics: pattern evaluation, satisfaction by exhaustive
//! enumeration of valuations, and model audits.
//!
//! Definedness is evaluated structurally: `|_ p _|` is the whole target
//! carrier when `p` matches something and empty otherwise. Satisfaction
//! enumerates valuations of the free variables only.

mod audit;
mod model;
mod random;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::kernel::{Head, KernelError, Pattern, Sort, Variable};

pub use audit::{
    audit_functional, audit_injective, audit_no_confusion_different, audit_no_confusion_same, audit_no_junk,
    no_confusion_different_axioms, no_confusion_same_axioms, no_junk_axiom, satisfies_all,
};
pub use model::FiniteModel;
pub use random::{occurs_check_countermodel, random_injective_model, random_injective_model_sized, random_valuation};

/// Largest supported carrier; sets are 64-bit masks.
pub const MAX_CARRIER: usize = 64;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Valuation budget, overridable through `MLUNIFY_BUDGET`.
pub fn default_budget() -> u64 {
    std::env::var("MLUNIFY_BUDGET").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Assignment of element indices to variables.
pub type Valuation = BTreeMap<Variable, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("variable `{0}` has no value")]
    UnassignedVariable(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("no carrier for sort `{0}`")]
    MissingCarrier(String),
    #[error("carrier of `{sort}` has {size} elements; at most 64 are supported")]
    CarrierLimit { sort: String, size: usize },
    #[error("checking needs {needed} evaluations, over the budget of {budget}")]
    CarrierTooLarge { needed: u128, budget: u64 },
    #[error("no interpretation given for `{0}`")]
    MissingTuple(String),
    #[error("model line {line}: {message}")]
    ModelSyntax { line: usize, message: String },
    #[error("no injective interpretation: {0}")]
    NoInjectiveInterpretation(String),
    #[error("sort mismatch: {left} vs {right}")]
    SortMismatch { left: Sort, right: Sort },
    #[error("element {index} is outside the carrier of `{sort}`")]
    BadElement { sort: Sort, index: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

type Env<'a> = Vec<(&'a Variable, usize)>;

impl FiniteModel {
    /// The set of elements `phi` matches under `rho`.
    pub fn eval(&self, rho: &Valuation, phi: &Pattern) -> Result<u64, SemanticsError> {
        phi.sort_of(self.signature())?;
        for (v, &i) in rho {
            if i >= self.size(&v.sort) {
                return Err(SemanticsError::BadElement { sort: v.sort.clone(), index: i });
            }
        }
        let mut env: Env = rho.iter().map(|(v, &i)| (v, i)).collect();
        Ok(self.ev(phi, &mut env)?.0)
    }

    fn ev<'a>(&'a self, p: &'a Pattern, env: &mut Env<'a>) -> Result<(u64, &'a Sort), SemanticsError> {
        match p {
            Pattern::Var(v) => match env.iter().rev().find(|(w, _)| *w == v) {
                Some(&(_, i)) => Ok((1 << i, &v.sort)),
                None => Err(SemanticsError::UnassignedVariable(v.to_string())),
            },
            Pattern::App(Head::Symbol(f), args) => {
                let decl = self.signature().symbol(f).ok_or_else(|| SemanticsError::UnknownSymbol(f.clone()))?;
                let table = self.table(f).expect("table per symbol");
                let mut sets = Vec::with_capacity(args.len());
                for a in args {
                    sets.push(self.ev(a, env)?.0);
                }
                let sizes: Vec<usize> = decl.arity.iter().map(|s| self.size(s)).collect();
                let mut out = 0;
                self.image(table, &sets, &sizes, 0, 0, &mut out, f)?;
                Ok((out, &decl.result))
            }
            Pattern::App(Head::Ceil { outer, .. }, args) => {
                let inner = self.ev(&args[0], env)?.0;
                Ok((if inner != 0 { self.full(outer) } else { 0 }, outer))
            }
            Pattern::Not(a) => {
                let (m, s) = self.ev(a, env)?;
                Ok((self.full(s) & !m, s))
            }
            Pattern::And(a, b) => {
                let (ma, s) = self.ev(a, env)?;
                let (mb, _) = self.ev(b, env)?;
                Ok((ma & mb, s))
            }
            Pattern::Exists(x, body) => {
                let mut out = 0;
                let mut sort = None;
                for i in 0..self.size(&x.sort) {
                    env.push((x, i));
                    let r = self.ev(body, env);
                    env.pop();
                    let (m, s) = r?;
                    out |= m;
                    sort = Some(s);
                }
                Ok((out, sort.expect("carriers are nonempty")))
            }
        }
    }

    /// Union of the table entries over the product of the argument sets.
    #[allow(clippy::too_many_arguments)]
    fn image(
        &self,
        table: &[Option<u64>],
        sets: &[u64],
        sizes: &[usize],
        k: usize,
        index: usize,
        out: &mut u64,
        f: &str,
    ) -> Result<(), SemanticsError> {
        if k == sets.len() {
            *out |= table[index].ok_or_else(|| SemanticsError::MissingTuple(f.to_string()))?;
            return Ok(());
        }
        let mut rest = sets[k];
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.image(table, sets, sizes, k + 1, index * sizes[k] + a, out, f)?;
        }
        Ok(())
    }

    /// Rough evaluation cost of one valuation: quantifiers multiply.
    fn cost(&self, p: &Pattern) -> u128 {
        match p {
            Pattern::Var(_) => 1,
            Pattern::App(_, args) => 1 + args.iter().map(|a| self.cost(a)).sum::<u128>(),
            Pattern::Not(a) => 1 + self.cost(a),
            Pattern::And(a, b) => 1 + self.cost(a) + self.cost(b),
            Pattern::Exists(x, b) => 1 + self.size(&x.sort) as u128 * self.cost(b),
        }
    }

    /// Calls `visit` with the evaluations of `pats` under every valuation of
    /// their free variables; stops early when `visit` returns false.
    fn for_each_valuation(
        &self,
        pats: &[&Pattern],
        mut visit: impl FnMut(&[u64]) -> bool,
    ) -> Result<bool, SemanticsError> {
        let mut vars = std::collections::BTreeSet::new();
        for p in pats {
            p.sort_of(self.signature())?;
            vars.extend(p.free_vars());
        }
        let vars: Vec<Variable> = vars.into_iter().collect();
        let count: u128 = vars.iter().map(|v| self.size(&v.sort) as u128).product();
        let per: u128 = pats.iter().map(|p| self.cost(p)).sum::<u128>().max(1);
        // The budget counts valuations; quantifier work is charged in units
        // of one valuation per thousand node visits.
        let needed = count.saturating_mul(per.div_ceil(1000));
        if needed > self.budget as u128 {
            return Err(SemanticsError::CarrierTooLarge { needed, budget: self.budget });
        }
        let mut digits = vec![0usize; vars.len()];
        let mut results = vec![0u64; pats.len()];
        loop {
            let mut env: Env = vars.iter().zip(&digits).map(|(v, &i)| (v, i)).collect();
            for (r, p) in results.iter_mut().zip(pats) {
                *r = self.ev(p, &mut env)?.0;
            }
            if !visit(&results) {
                return Ok(false);
            }
            let mut k = 0;
            loop {
                if k == vars.len() {
                    return Ok(true);
                }
                digits[k] += 1;
                if digits[k] < self.size(&vars[k].sort) {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    /// `M |= phi`: every valuation makes `phi` the whole carrier.
    pub fn satisfies(&self, phi: &Pattern) -> Result<bool, SemanticsError> {
        let full = self.full(&phi.sort_of(self.signature())?);
        self.for_each_valuation(&[phi], |r| r[0] == full)
    }

    fn same_sort(&self, a: &Pattern, b: &Pattern) -> Result<(), SemanticsError> {
        let (sa, sb) = (a.sort_of(self.signature())?, b.sort_of(self.signature())?);
        if sa != sb {
            return Err(SemanticsError::SortMismatch { left: sa, right: sb });
        }
        Ok(())
    }

    /// `M |= a -> b`: the set of `a` is included in that of `b` under every valuation.
    pub fn implication_holds(&self, a: &Pattern, b: &Pattern) -> Result<bool, SemanticsError> {
        self.same_sort(a, b)?;
        self.for_each_valuation(&[a, b], |r| r[0] & !r[1] == 0)
    }

    /// `M |= a <-> b`: equal sets under every valuation.
    pub fn equivalence_holds(&self, a: &Pattern, b: &Pattern) -> Result<bool, SemanticsError> {
        self.same_sort(a, b)?;
        self.for_each_valuation(&[a, b], |r| r[0] == r[1])
    }

    /// Whether `phi` is empty or the whole carrier under every valuation.
    pub fn is_predicate_in(&self, phi: &Pattern) -> Result<bool, SemanticsError> {
        let full = self.full(&phi.sort_of(self.signature())?);
        self.for_each_valuation(&[phi], |r| r[0] == 0 || r[0] == full)
    }
}

/// Free-standing forms of the model queries.
pub fn eval(m: &FiniteModel, rho: &Valuation, phi: &Pattern) -> Result<u64, SemanticsError> {
    m.eval(rho, phi)
}

pub fn satisfies(m: &FiniteModel, phi: &Pattern) -> Result<bool, SemanticsError> {
    m.satisfies(phi)
}

pub fn implication_holds(m: &FiniteModel, a: &Pattern, b: &Pattern) -> Result<bool, SemanticsError> {
    m.implication_holds(a, b)
}

pub fn equivalence_holds(m: &FiniteModel, a: &Pattern, b: &Pattern) -> Result<bool, SemanticsError> {
    m.equivalence_holds(a, b)
}

pub fn is_predicate_in(m: &FiniteModel, phi: &Pattern) -> Result<bool, SemanticsError> {
    m.is_predicate_in(phi)
}
