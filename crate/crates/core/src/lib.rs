//! Syntactic unification of matching-logic term patterns, with a finite-model
//! semantic checker and proof certificates for the encoding of each run.

pub mod kernel;
pub mod unifier;
pub mod encoder;
pub mod semantics;
pub mod proof;
pub mod cli;
