//! Certificates: numbered derivation lines with structured justifications,
//! their JSON wire format and a plain-text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::encoder::AxiomTag;
use crate::kernel::syntax::{parse_pattern, print_pattern};
use crate::kernel::{Pattern, Signature, Sort, Variable};

use super::ProofError;

/// Rules that abbreviate a fixed sequence of base steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivedRule {
    /// `phi /\ (t = t)` gives `phi`.
    Delete,
    /// `phi /\ (f(s..) = f(t..))` gives `phi /\ s1 = t1 /\ ...`.
    Decomposition,
    /// `phi /\ (f(..) = x)` gives `phi /\ (x = f(..))`.
    Orient,
    /// `C[x/h] /\ (x = t)` gives `C[t/h] /\ (x = t)`.
    Elimination,
    /// `phi /\ phi'` gives `phi /\ (phi = phi')` for term patterns.
    PropFpattForward,
    /// `phi /\ (phi = phi')` gives `phi /\ phi'`.
    PropFpattBackward,
    /// `a = b` gives `b = a`.
    EqSymmetry,
}

impl DerivedRule {
    pub const ALL: [DerivedRule; 7] = [
        DerivedRule::Delete,
        DerivedRule::Decomposition,
        DerivedRule::Orient,
        DerivedRule::Elimination,
        DerivedRule::PropFpattForward,
        DerivedRule::PropFpattBackward,
        DerivedRule::EqSymmetry,
    ];

    /// Number of the unification-rule abbreviations (1 to 4).
    pub fn delta(self) -> Option<u8> {
        match self {
            DerivedRule::Delete => Some(1),
            DerivedRule::Decomposition => Some(2),
            DerivedRule::Orient => Some(3),
            DerivedRule::Elimination => Some(4),
            _ => None,
        }
    }

    pub fn from_delta(k: u8) -> Option<DerivedRule> {
        DerivedRule::ALL.into_iter().find(|r| r.delta() == Some(k))
    }

    pub fn name(self) -> &'static str {
        match self {
            DerivedRule::Delete => "Delta1",
            DerivedRule::Decomposition => "Delta2",
            DerivedRule::Orient => "Delta3",
            DerivedRule::Elimination => "Delta4",
            DerivedRule::PropFpattForward => "PropFpattForward",
            DerivedRule::PropFpattBackward => "PropFpattBackward",
            DerivedRule::EqSymmetry => "EqSymmetry",
        }
    }

    pub fn from_name(name: &str) -> Option<DerivedRule> {
        DerivedRule::ALL.into_iter().find(|r| r.name().eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Hypothesis,
    Axiom(AxiomTag),
    /// Propositional consequence of the cited lines.
    Tautology { schema: String, premises: Vec<usize> },
    /// Line `minor` is `a`, line `major` is `a -> this`.
    ModusPonens { minor: usize, major: usize },
    /// `phi = phi`.
    EqualityIntro,
    /// With premises `(i, j)`: line `i` is `p1 = p2`, line `j` is
    /// `C[p1/h]`, this line is `C[p2/h]`. Without premises this line is
    /// the implication `(p1 = p2) /\ C[p1/h] -> C[p2/h]`.
    EqualityElim { premises: Option<(usize, usize)>, context: Pattern, hole: Variable },
    /// Membership between term patterns rewritten to equality.
    MembershipEquality(usize),
    /// Definedness of a cited line, or restatement of `x in phi` as `|_ x /\ phi _|`.
    DefinednessDef(usize),
    Derived { rule: DerivedRule, premise: usize, context: Option<(Pattern, Variable)> },
    /// A rule name this checker does not know.
    Unsupported(String),
}

impl Justification {
    /// Line numbers this justification cites.
    pub fn cited(&self) -> Vec<usize> {
        match self {
            Justification::Tautology { premises, .. } => premises.clone(),
            Justification::ModusPonens { minor, major } => vec![*minor, *major],
            Justification::EqualityElim { premises: Some((i, j)), .. } => vec![*i, *j],
            Justification::MembershipEquality(i) | Justification::DefinednessDef(i) => vec![*i],
            Justification::Derived { premise, .. } => vec![*premise],
            _ => Vec::new(),
        }
    }

    /// Same justification with cited line numbers mapped through `f`.
    pub fn renumber(&self, f: impl Fn(usize) -> usize) -> Justification {
        match self.clone() {
            Justification::Tautology { schema, premises } => {
                Justification::Tautology { schema, premises: premises.into_iter().map(&f).collect() }
            }
            Justification::ModusPonens { minor, major } => Justification::ModusPonens { minor: f(minor), major: f(major) },
            Justification::EqualityElim { premises, context, hole } => {
                Justification::EqualityElim { premises: premises.map(|(i, j)| (f(i), f(j))), context, hole }
            }
            Justification::MembershipEquality(i) => Justification::MembershipEquality(f(i)),
            Justification::DefinednessDef(i) => Justification::DefinednessDef(f(i)),
            Justification::Derived { rule, premise, context } => Justification::Derived { rule, premise: f(premise), context },
            other => other,
        }
    }

    pub fn is_derived(&self) -> bool {
        matches!(self, Justification::Derived { .. })
    }

    fn label(&self, sig: &Signature) -> String {
        let refs = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        match self {
            Justification::Hypothesis => "hypothesis".into(),
            Justification::Axiom(tag) => format!("axiom ({tag})"),
            Justification::Tautology { schema, premises } if premises.is_empty() => format!("R1 {schema}"),
            Justification::Tautology { schema, premises } => format!("R1 {schema}: {}", refs(premises)),
            Justification::ModusPonens { minor, major } => format!("R2: {minor}, {major}"),
            Justification::EqualityIntro => "R6".into(),
            Justification::EqualityElim { premises, context, hole } => {
                let c = print_pattern(context, sig);
                match premises {
                    Some((i, j)) => format!("R7: {i}, {j} in {c} at {}", hole.name),
                    None => format!("R7 in {c} at {}", hole.name),
                }
            }
            Justification::MembershipEquality(i) => format!("R9: {i}"),
            Justification::DefinednessDef(i) => format!("definedness: {i}"),
            Justification::Derived { rule, premise, .. } => format!("{}: {premise}", rule.name()),
            Justification::Unsupported(name) => format!("unsupported {name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub index: usize,
    pub formula: Pattern,
    pub justification: Justification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Stage1,
    Stage2,
    DerivedRuleExpansion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub mode: Mode,
    pub hypotheses: Vec<Pattern>,
    pub lines: Vec<ProofLine>,
    pub conclusion: Pattern,
}

impl Certificate {
    /// Formula of 1-based line `i`.
    pub fn formula(&self, i: usize) -> &Pattern {
        &self.lines[i - 1].formula
    }

    pub fn uses_derived(&self) -> bool {
        self.lines.iter().any(|l| l.justification.is_derived())
    }

    pub fn render_text(&self, sig: &Signature) -> String {
        let mut out = String::new();
        let width = self.lines.len().to_string().len();
        for l in &self.lines {
            let _ = writeln!(
                out,
                "{:>width$}. {}    [{}]",
                l.index,
                print_pattern(&l.formula, sig),
                l.justification.label(sig)
            );
        }
        out
    }

    pub fn to_json(&self, sig: &Signature) -> String {
        let wire = CertJson {
            mode: self.mode,
            hypotheses: self.hypotheses.iter().map(|h| print_pattern(h, sig)).collect(),
            lines: self
                .lines
                .iter()
                .map(|l| LineJson {
                    index: l.index,
                    formula: print_pattern(&l.formula, sig),
                    justification: JustJson::from(&l.justification, sig),
                })
                .collect(),
            conclusion: print_pattern(&self.conclusion, sig),
        };
        serde_json::to_string_pretty(&wire).expect("certificate serializes")
    }

    pub fn from_json(text: &str, sig: &Signature) -> Result<Certificate, ProofError> {
        let wire: CertJson = serde_json::from_str(text).map_err(|e| ProofError::Parse(e.to_string()))?;
        let pat = |s: &str| parse_pattern(s, sig).map_err(|e| ProofError::Parse(format!("`{s}`: {e}")));
        let mut lines = Vec::new();
        for l in &wire.lines {
            lines.push(ProofLine { index: l.index, formula: pat(&l.formula)?, justification: l.justification.to(sig)? });
        }
        Ok(Certificate {
            mode: wire.mode,
            hypotheses: wire.hypotheses.iter().map(|h| pat(h)).collect::<Result<_, _>>()?,
            lines,
            conclusion: pat(&wire.conclusion)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CertJson {
    mode: Mode,
    hypotheses: Vec<String>,
    lines: Vec<LineJson>,
    conclusion: String,
}

#[derive(Serialize, Deserialize)]
struct LineJson {
    index: usize,
    formula: String,
    justification: JustJson,
}

#[derive(Serialize, Deserialize, Default)]
struct JustJson {
    rule: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    premises: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    context: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hole: Option<String>,
}

impl JustJson {
    fn from(j: &Justification, sig: &Signature) -> JustJson {
        let rule = |r: &str| JustJson { rule: r.to_string(), premises: j.cited(), ..Default::default() };
        match j {
            Justification::Hypothesis => rule("Hypothesis"),
            Justification::Axiom(tag) => JustJson { tag: Some(tag.to_string()), ..rule("Axiom") },
            Justification::Tautology { schema, .. } => JustJson { schema: Some(schema.clone()), ..rule("Tautology") },
            Justification::ModusPonens { .. } => rule("ModusPonens"),
            Justification::EqualityIntro => rule("EqualityIntro"),
            Justification::EqualityElim { context, hole, .. } => JustJson {
                context: Some(print_pattern(context, sig)),
                hole: Some(hole.to_string()),
                ..rule("EqualityElim")
            },
            Justification::MembershipEquality(_) => rule("MembershipEquality"),
            Justification::DefinednessDef(_) => rule("DefinednessDef"),
            Justification::Derived { rule: r, context, .. } => {
                let mut out = rule(r.name());
                if let Some((c, h)) = context {
                    out.context = Some(print_pattern(c, sig));
                    out.hole = Some(h.to_string());
                }
                out
            }
            Justification::Unsupported(name) => rule(name),
        }
    }

    fn to(&self, sig: &Signature) -> Result<Justification, ProofError> {
        let bad = |m: &str| ProofError::Parse(format!("{} justification: {m}", self.rule));
        let prem = |n: usize| {
            if self.premises.len() == n {
                Ok(self.premises.clone())
            } else {
                Err(bad(&format!("expected {n} premises")))
            }
        };
        let context = || -> Result<Option<(Pattern, Variable)>, ProofError> {
            match (&self.context, &self.hole) {
                (Some(c), Some(h)) => {
                    let (name, sort) = h.split_once(':').ok_or_else(|| bad("hole must be `name:Sort`"))?;
                    let hole = Variable::new(name.trim(), Sort::new(sort.trim()));
                    let c = parse_pattern(c, sig).map_err(|e| bad(&e.to_string()))?;
                    Ok(Some((c, hole)))
                }
                (None, None) => Ok(None),
                _ => Err(bad("context and hole go together")),
            }
        };
        Ok(match self.rule.as_str() {
            "Hypothesis" => Justification::Hypothesis,
            "Axiom" => {
                let tag = self.tag.as_deref().ok_or_else(|| bad("missing tag"))?;
                Justification::Axiom(AxiomTag::parse(tag).ok_or_else(|| bad("unknown axiom tag"))?)
            }
            "Tautology" => Justification::Tautology {
                schema: self.schema.clone().unwrap_or_else(|| "R1".into()),
                premises: self.premises.clone(),
            },
            "ModusPonens" => {
                let p = prem(2)?;
                Justification::ModusPonens { minor: p[0], major: p[1] }
            }
            "EqualityIntro" => Justification::EqualityIntro,
            "EqualityElim" => {
                let (context, hole) = context()?.ok_or_else(|| bad("missing context"))?;
                let premises = match self.premises.len() {
                    0 => None,
                    2 => Some((self.premises[0], self.premises[1])),
                    _ => return Err(bad("expected 0 or 2 premises")),
                };
                Justification::EqualityElim { premises, context, hole }
            }
            "MembershipEquality" => Justification::MembershipEquality(prem(1)?[0]),
            "DefinednessDef" => Justification::DefinednessDef(prem(1)?[0]),
            name => match DerivedRule::from_name(name) {
                Some(rule) => Justification::Derived { rule, premise: prem(1)?[0], context: context()? },
                None => Justification::Unsupported(name.to_string()),
            },
        })
    }
}
