//! Many-sorted signatures and the signature declaration file format.
//!
//! ```text
//! sort Nat
//! symbol o : -> Nat [functional, injective]
//! symbol succ : Nat -> Nat [functional, injective]
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::KernelError;

/// A sort name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sort(pub String);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A declared symbol `name : s1 ... sn -> s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: String,
    pub arity: Vec<Sort>,
    pub result: Sort,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeSet<Sort>,
    symbols: BTreeMap<String, SymbolDecl>,
    functional: BTreeSet<String>,
    injective: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, sort: impl Into<String>) -> Result<Sort, KernelError> {
        let sort = Sort::new(sort);
        if !self.sorts.insert(sort.clone()) {
            return Err(KernelError::DuplicateSort(sort.0));
        }
        Ok(sort)
    }

    /// Declares a symbol. Injective symbols must also be functional.
    pub fn add_symbol(
        &mut self,
        name: impl Into<String>,
        arity: &[&str],
        result: &str,
        functional: bool,
        injective: bool,
    ) -> Result<(), KernelError> {
        let name = name.into();
        if self.symbols.contains_key(&name) {
            return Err(KernelError::DuplicateSymbol(name));
        }
        if injective && !functional {
            return Err(KernelError::InjectiveNotFunctional(name));
        }
        let check = |s: &str| {
            let sort = Sort::new(s);
            if self.sorts.contains(&sort) {
                Ok(sort)
            } else {
                Err(KernelError::UnknownSort(s.to_string()))
            }
        };
        let arity = arity.iter().map(|s| check(s)).collect::<Result<Vec<_>, _>>()?;
        let result = check(result)?;
        if functional {
            self.functional.insert(name.clone());
        }
        if injective {
            self.injective.insert(name.clone());
        }
        self.symbols.insert(name.clone(), SymbolDecl { name, arity, result });
        Ok(())
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.sorts.iter()
    }

    pub fn has_sort(&self, sort: &Sort) -> bool {
        self.sorts.contains(sort)
    }

    pub fn symbol(&self, name: &str) -> Option<&SymbolDecl> {
        self.symbols.get(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &SymbolDecl> {
        self.symbols.values()
    }

    pub fn is_functional(&self, name: &str) -> bool {
        self.functional.contains(name)
    }

    pub fn is_injective(&self, name: &str) -> bool {
        self.injective.contains(name)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.symbols.get(name).is_some_and(|d| d.arity.is_empty())
    }

    /// Parses the line-oriented declaration format. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, KernelError> {
        let mut sig = Signature::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| KernelError::SignatureSyntax {
                line: lineno + 1,
                message: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("sort ") {
                let name = rest.trim();
                if !is_ident(name) {
                    return Err(bad("expected a sort name"));
                }
                sig.add_sort(name)?;
            } else if let Some(rest) = line.strip_prefix("symbol ") {
                let (decl, attrs) = match rest.find('[') {
                    Some(i) => {
                        let close = rest.rfind(']').ok_or_else(|| bad("unclosed attribute list"))?;
                        (&rest[..i], &rest[i + 1..close])
                    }
                    None => (rest, ""),
                };
                let (name, ty) = decl.split_once(':').ok_or_else(|| bad("expected `name : sorts -> sort`"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(bad("bad symbol name"));
                }
                let (args, result) = ty.split_once("->").ok_or_else(|| bad("expected `->`"))?;
                let args: Vec<&str> = args.split_whitespace().collect();
                let result = result.trim();
                let mut functional = false;
                let mut injective = false;
                for attr in attrs.split(',').map(str::trim).filter(|a| !a.is_empty()) {
                    match attr {
                        "functional" => functional = true,
                        "injective" => injective = true,
                        other => return Err(bad(&format!("unknown attribute `{other}`"))),
                    }
                }
                sig.add_symbol(name, &args, result, functional, injective)?;
            } else {
                return Err(bad("expected `sort` or `symbol`"));
            }
        }
        Ok(sig)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sorts {
            writeln!(f, "sort {s}")?;
        }
        for d in self.symbols.values() {
            write!(f, "symbol {} :", d.name)?;
            for a in &d.arity {
                write!(f, " {a}")?;
            }
            write!(f, " -> {}", d.result)?;
            let mut attrs = Vec::new();
            if self.is_functional(&d.name) {
                attrs.push("functional");
            }
            if self.is_injective(&d.name) {
                attrs.push("injective");
            }
            if !attrs.is_empty() {
                write!(f, " [{}]", attrs.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_declarations() {
        let sig = Signature::parse(
            "sort Nat\n# numbers\nsymbol o : -> Nat [functional, injective]\nsymbol succ : Nat -> Nat [functional,injective]\nsymbol le : Nat Nat -> Nat\n",
        )
        .unwrap();
        assert!(sig.is_constant("o"));
        assert_eq!(sig.symbol("succ").unwrap().arity, vec![Sort::new("Nat")]);
        assert!(!sig.is_functional("le"));
        let again = Signature::parse(&sig.to_string()).unwrap();
        assert_eq!(again, sig);
    }

    #[test]
    fn rejects_bad_declarations() {
        assert!(matches!(Signature::parse("sort A\nsort A"), Err(KernelError::DuplicateSort(_))));
        assert!(matches!(
            Signature::parse("sort A\nsymbol f : B -> A"),
            Err(KernelError::UnknownSort(_))
        ));
        assert!(matches!(
            Signature::parse("sort A\nsymbol f : A -> A [injective]"),
            Err(KernelError::InjectiveNotFunctional(_))
        ));
        assert!(matches!(
            Signature::parse("sort A\nsymbol f : -> A\nsymbol f : A -> A"),
            Err(KernelError::DuplicateSymbol(_))
        ));
    }
}
