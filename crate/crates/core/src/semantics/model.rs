//! Finite models and their text format.
//!
//! ```text
//! carrier Nat = {e0, e1, e2}
//! o = {e0}
//! succ(e0) = {e1}
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::kernel::{Signature, Sort};

use super::{default_budget, SemanticsError, MAX_CARRIER};

/// A finite model: named elements per sort and, per symbol, a table from
/// argument tuples to sets of result elements. Sets are bitmasks over the
/// element indices of the result carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    sig: Signature,
    carriers: BTreeMap<Sort, Vec<String>>,
    tables: BTreeMap<String, Vec<Option<u64>>>,
    pub(crate) budget: u64,
}

impl FiniteModel {
    /// A model with the given carriers and every interpretation still unset.
    pub fn new(sig: &Signature, carriers: BTreeMap<Sort, Vec<String>>) -> Result<Self, SemanticsError> {
        for s in sig.sorts() {
            match carriers.get(s) {
                None => return Err(SemanticsError::MissingCarrier(s.to_string())),
                Some(c) if c.is_empty() => return Err(SemanticsError::MissingCarrier(s.to_string())),
                Some(c) if c.len() > MAX_CARRIER => {
                    return Err(SemanticsError::CarrierLimit { sort: s.to_string(), size: c.len() })
                }
                Some(c) => {
                    for (i, e) in c.iter().enumerate() {
                        if c[..i].contains(e) {
                            return Err(SemanticsError::ModelSyntax { line: 0, message: format!("element `{e}` repeated") });
                        }
                    }
                }
            }
        }
        if let Some(s) = carriers.keys().find(|s| !sig.has_sort(s)) {
            return Err(SemanticsError::UnknownSort(s.to_string()));
        }
        let mut m = FiniteModel { sig: sig.clone(), carriers, tables: BTreeMap::new(), budget: default_budget() };
        for d in sig.symbols() {
            let n = m.tuple_count(&d.arity);
            m.tables.insert(d.name.clone(), vec![None; n]);
        }
        Ok(m)
    }

    /// Builds a model from carrier sizes, naming elements `e0, e1, ...`.
    pub fn with_sizes(sig: &Signature, sizes: &BTreeMap<Sort, usize>) -> Result<Self, SemanticsError> {
        let carriers = sizes.iter().map(|(s, &n)| (s.clone(), (0..n).map(|i| format!("e{i}")).collect())).collect();
        Self::new(sig, carriers)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn carrier(&self, sort: &Sort) -> Option<&[String]> {
        self.carriers.get(sort).map(Vec::as_slice)
    }

    pub fn size(&self, sort: &Sort) -> usize {
        self.carriers.get(sort).map_or(0, Vec::len)
    }

    pub fn full(&self, sort: &Sort) -> u64 {
        mask_of_size(self.size(sort))
    }

    pub fn element_index(&self, sort: &Sort, name: &str) -> Option<usize> {
        self.carriers.get(sort)?.iter().position(|e| e == name)
    }

    pub fn element_name(&self, sort: &Sort, index: usize) -> &str {
        &self.carriers[sort][index]
    }

    fn tuple_count(&self, arity: &[Sort]) -> usize {
        arity.iter().map(|s| self.size(s)).product()
    }

    fn tuple_index(&self, arity: &[Sort], args: &[usize]) -> usize {
        arity.iter().zip(args).fold(0, |acc, (s, &a)| acc * self.size(s) + a)
    }

    /// Sets the interpretation of `symbol` at `args` to the set `result`.
    pub fn set(&mut self, symbol: &str, args: &[usize], result: u64) -> Result<(), SemanticsError> {
        let decl = self.sig.symbol(symbol).ok_or_else(|| SemanticsError::UnknownSymbol(symbol.to_string()))?;
        if args.len() != decl.arity.len() || args.iter().zip(&decl.arity).any(|(&a, s)| a >= self.size(s)) {
            return Err(SemanticsError::ModelSyntax { line: 0, message: format!("bad arguments for `{symbol}`") });
        }
        if result & !self.full(&decl.result) != 0 {
            return Err(SemanticsError::ModelSyntax { line: 0, message: format!("result of `{symbol}` outside its carrier") });
        }
        let i = self.tuple_index(&decl.arity, args);
        self.tables.get_mut(symbol).expect("table exists")[i] = Some(result);
        Ok(())
    }

    /// The interpretation at an argument tuple.
    pub fn get(&self, symbol: &str, args: &[usize]) -> Result<u64, SemanticsError> {
        let decl = self.sig.symbol(symbol).ok_or_else(|| SemanticsError::UnknownSymbol(symbol.to_string()))?;
        let i = self.tuple_index(&decl.arity, args);
        self.tables[symbol][i].ok_or_else(|| SemanticsError::MissingTuple(self.render_tuple(symbol, args)))
    }

    pub(crate) fn table(&self, symbol: &str) -> Option<&[Option<u64>]> {
        self.tables.get(symbol).map(Vec::as_slice)
    }

    /// Every argument tuple of `arity`, in table order.
    pub fn tuples(&self, arity: &[Sort]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for s in arity {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..self.size(s)).map(move |a| {
                        let mut t = prefix.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// Fails on the first unset interpretation.
    pub fn check_total(&self) -> Result<(), SemanticsError> {
        for d in self.sig.symbols() {
            for args in self.tuples(&d.arity) {
                self.get(&d.name, &args)?;
            }
        }
        Ok(())
    }

    fn render_tuple(&self, symbol: &str, args: &[usize]) -> String {
        let decl = &self.sig.symbol(symbol).expect("declared");
        if args.is_empty() {
            return symbol.to_string();
        }
        let names: Vec<&str> = args.iter().zip(&decl.arity).map(|(&a, s)| self.element_name(s, a)).collect();
        format!("{symbol}({})", names.join(", "))
    }

    pub fn render_set(&self, sort: &Sort, set: u64) -> String {
        let names: Vec<&str> = (0..self.size(sort)).filter(|i| set >> i & 1 == 1).map(|i| self.element_name(sort, i)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Parses the model file format against `sig`. Every tuple must be given.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self, SemanticsError> {
        let mut carriers = BTreeMap::new();
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| SemanticsError::ModelSyntax { line: lineno + 1, message };
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("expected `=`".into()))?;
            let set = parse_set(rhs).ok_or_else(|| bad("expected `{e1, ..., en}`".into()))?;
            if let Some(sort) = lhs.trim().strip_prefix("carrier ") {
                let sort = Sort::new(sort.trim());
                if carriers.insert(sort.clone(), set).is_some() {
                    return Err(bad(format!("carrier of `{sort}` given twice")));
                }
            } else {
                let lhs = lhs.trim();
                let (symbol, args) = match lhs.split_once('(') {
                    Some((f, rest)) => {
                        let inner = rest.strip_suffix(')').ok_or_else(|| bad("unclosed `(`".into()))?;
                        let args: Vec<String> =
                            inner.split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect();
                        (f.trim().to_string(), args)
                    }
                    None => (lhs.to_string(), Vec::new()),
                };
                entries.push((lineno + 1, symbol, args, set));
            }
        }
        let mut m = FiniteModel::new(sig, carriers)?;
        for (line, symbol, args, set) in entries {
            let bad = |message: String| SemanticsError::ModelSyntax { line, message };
            let decl = sig.symbol(&symbol).ok_or_else(|| SemanticsError::UnknownSymbol(symbol.clone()))?.clone();
            if decl.arity.len() != args.len() {
                return Err(bad(format!("`{symbol}` takes {} arguments", decl.arity.len())));
            }
            let mut idx = Vec::new();
            for (a, s) in args.iter().zip(&decl.arity) {
                idx.push(m.element_index(s, a).ok_or_else(|| bad(format!("`{a}` is not an element of {s}")))?);
            }
            let mut mask = 0u64;
            for e in &set {
                let i = m.element_index(&decl.result, e).ok_or_else(|| bad(format!("`{e}` is not an element of {}", decl.result)))?;
                mask |= 1 << i;
            }
            if m.get(&symbol, &idx).is_ok() {
                return Err(bad(format!("`{lhs}` given twice", lhs = m.render_tuple(&symbol, &idx))));
            }
            m.set(&symbol, &idx, mask)?;
        }
        m.check_total()?;
        Ok(m)
    }
}

fn parse_set(text: &str) -> Option<Vec<String>> {
    let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
    Some(inner.split(',').map(|e| e.trim().to_string()).filter(|e| !e.is_empty()).collect())
}

pub(crate) fn mask_of_size(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, elems) in &self.carriers {
            writeln!(f, "carrier {s} = {{{}}}", elems.join(", "))?;
        }
        for d in self.sig.symbols() {
            for args in self.tuples(&d.arity) {
                let Ok(set) = self.get(&d.name, &args) else { continue };
                writeln!(f, "{} = {}", self.render_tuple(&d.name, &args), self.render_set(&d.result, set))?;
            }
        }
        Ok(())
    }
}
