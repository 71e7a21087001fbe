//! Proof certificates for unification: generation from a rule trace
//! (forward direction) and from a unifier (backward direction), expansion of
//! derived rules into base steps, and an independent checker.

mod certificate;
mod check;
mod derived;
mod gen;
mod tautology;

use thiserror::Error;

use crate::kernel::KernelError;

pub use certificate::{Certificate, DerivedRule, Justification, Mode, ProofLine};
pub use check::{check_certificate, is_axiom_instance, verify, CheckReport, CheckerConfig};
pub use derived::{derived_conclusion, expand_derived_rule, inline_derived};
pub use gen::{gen_stage1, gen_stage2};
pub use tautology::{check_tautology, entails, DEFAULT_TAUTOLOGY_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("malformed certificate: {0}")]
    Parse(String),
    #[error("the unification run did not end in a unifier")]
    NotSolved,
    #[error("not a most general unifier: {0}")]
    NotMgu(String),
    #[error("bad rule instantiation: {0}")]
    BadInstantiation(String),
    #[error("ill-sorted certificate: {0}")]
    IllSorted(String),
    #[error("line {line} rejected: {reason}")]
    LineRejected { line: usize, reason: String },
    #[error("tautology check needs {atoms} atoms, over the budget of {budget}")]
    TautologyBudgetExceeded { atoms: usize, budget: usize },
    #[error("line {line} uses unsupported rule `{rule}`")]
    UnsupportedRule { line: usize, rule: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[cfg(test)]
mod tests;
