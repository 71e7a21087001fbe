//! Sorts, signatures, patterns, term patterns and substitutions, plus the
//! textual syntax used by the command line and test corpus.

mod pattern;
mod signature;
pub mod syntax;
mod term;

use thiserror::Error;

pub use pattern::{fresh_variable, Head, Pattern, Variable, TOP_VAR};
pub use signature::{Signature, Sort, SymbolDecl};
pub use term::{match_term, Substitution, Term};

pub(crate) use signature::is_ident;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("sort `{0}` declared twice")]
    DuplicateSort(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` is injective but not functional")]
    InjectiveNotFunctional(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("ill-sorted pattern: {0}")]
    IllSorted(String),
    #[error("sort mismatch: {left} vs {right}")]
    SortMismatch { left: Sort, right: Sort },
    #[error("not a term pattern: {0}")]
    NotATerm(String),
    #[error("signature line {line}: {message}")]
    SignatureSyntax { line: usize, message: String },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}
