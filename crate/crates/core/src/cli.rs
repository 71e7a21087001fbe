//! Command-line front end. Exit status: 0 on success, 2 when the answer is
//! negative (not unifiable, not satisfied, not equivalent), 1 on usage,
//! parse or sort errors and on rejected certificates.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::encoder::{generate_axioms, phi_of_subst};
use crate::kernel::syntax::{parse_pattern, parse_term};
use crate::kernel::{Pattern, Signature, Term};
use crate::proof::{gen_stage1, gen_stage2, inline_derived, verify, Certificate, CheckerConfig};
use crate::semantics::{audit_functional, audit_injective, random_injective_model, FiniteModel, Valuation};
use crate::unifier::{trace_to_json, unify, Outcome};

#[derive(Parser, Debug)]
#[command(name = "mlunify", version, about = "Unification of matching-logic term patterns")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unify two terms and print the most general unifier.
    Unify {
        signature: PathBuf,
        term1: String,
        term2: String,
        /// Also print the rule trace as JSON.
        #[arg(long)]
        trace: bool,
    },
    /// Write proof certificates for a unifiable pair.
    Certify {
        signature: PathBuf,
        term1: String,
        term2: String,
        #[arg(long, value_enum, default_value = "both")]
        stage: Stage,
        /// Replace derived steps by their base-rule bodies.
        #[arg(long)]
        expand: bool,
        /// Output prefix; files are `<out>.stage1.json`, `<out>.stage1.txt`, ...
        #[arg(long, default_value = "certificate")]
        out: PathBuf,
    },
    /// Check a certificate and print a JSON report.
    Check {
        certificate: PathBuf,
        signature: PathBuf,
        /// Reject derived-rule steps.
        #[arg(long)]
        no_derived: bool,
        #[arg(long, default_value_t = crate::proof::DEFAULT_TAUTOLOGY_BUDGET)]
        tautology_budget: usize,
    },
    /// Evaluate a pattern in a finite model.
    Eval {
        signature: PathBuf,
        /// Pattern to evaluate; not needed with --theorem1.
        pattern: Option<String>,
        /// Model file; omit to use --random.
        #[arg(long, conflicts_with = "random")]
        model: Option<PathBuf>,
        /// Use a seeded random injective model.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Carrier size of the random model.
        #[arg(long, default_value_t = 3)]
        size: usize,
        /// `name=element` assignments; with any, the set is printed instead of a verdict.
        #[arg(long = "valuation", value_name = "VAR=ELEM")]
        valuation: Vec<String>,
        /// Check `t1 /\ t2 <-> t1 /\ phi^sigma` for the two terms.
        #[arg(long, num_args = 2, value_names = ["T1", "T2"])]
        theorem1: Option<Vec<String>>,
    },
    /// Print the axioms generated for a signature.
    Axioms { signature: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

struct Failure {
    code: i32,
    message: String,
}

fn error(e: impl Display) -> Failure {
    Failure { code: 1, message: e.to_string() }
}

type Res = Result<i32, Failure>;

/// Runs the command line `args` (program name first), writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| error(format!("{}: {e}", path.display())))
}

fn load_signature(path: &Path) -> Result<Signature, Failure> {
    Signature::parse(&read(path)?).map_err(|e| error(format!("{}: {e}", path.display())))
}

fn terms(sig: &Signature, t1: &str, t2: &str) -> Result<(Term, Term), Failure> {
    let parse = |s: &str| parse_term(s, sig).map_err(|e| error(format!("`{s}`: {e}")));
    Ok((parse(t1)?, parse(t2)?))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Res {
    let w = |e: std::io::Error| error(e);
    match command {
        Command::Unify { signature, term1, term2, trace } => {
            let sig = load_signature(&signature)?;
            let (t1, t2) = terms(&sig, &term1, &term2)?;
            let outcome = unify(&sig, &t1, &t2).map_err(error)?;
            let code = match &outcome {
                Outcome::Solved { mgu, .. } => {
                    writeln!(out, "MGU: {mgu}").map_err(w)?;
                    0
                }
                Outcome::Failed { reason, witness, .. } => {
                    writeln!(out, "FAIL: {}", reason.label()).map_err(w)?;
                    writeln!(out, "witness: {}", witness.render(&sig)).map_err(w)?;
                    2
                }
            };
            if trace {
                writeln!(out, "{}", trace_to_json(&sig, outcome.trace())).map_err(w)?;
            }
            Ok(code)
        }
        Command::Certify { signature, term1, term2, stage, expand, out: prefix } => {
            let sig = load_signature(&signature)?;
            let (t1, t2) = terms(&sig, &term1, &term2)?;
            let outcome = unify(&sig, &t1, &t2).map_err(error)?;
            let Outcome::Solved { mgu, .. } = &outcome else {
                return Err(Failure { code: 2, message: "the terms are not unifiable; no certificate".into() });
            };
            let mut certs = Vec::new();
            if stage != Stage::Two {
                certs.push(("stage1", gen_stage1(&sig, &t1, &t2, &outcome).map_err(error)?));
            }
            if stage != Stage::One {
                certs.push(("stage2", gen_stage2(&sig, &t1, &t2, mgu).map_err(error)?));
            }
            for (name, cert) in certs {
                let cert = if expand { inline_derived(&sig, &cert).map_err(error)? } else { cert };
                let base = prefix.as_os_str().to_string_lossy();
                let (json, txt) = (format!("{base}.{name}.json"), format!("{base}.{name}.txt"));
                std::fs::write(&json, cert.to_json(&sig)).map_err(|e| error(format!("{json}: {e}")))?;
                std::fs::write(&txt, cert.render_text(&sig)).map_err(|e| error(format!("{txt}: {e}")))?;
                writeln!(out, "{name}: {} lines -> {json}, {txt}", cert.lines.len()).map_err(w)?;
            }
            Ok(0)
        }
        Command::Check { certificate, signature, no_derived, tautology_budget } => {
            let sig = load_signature(&signature)?;
            let cert = Certificate::from_json(&read(&certificate)?, &sig).map_err(error)?;
            let cfg = CheckerConfig { allow_derived: !no_derived, tautology_budget: tautology_budget.max(1), ..CheckerConfig::new(&sig) };
            let report = verify(&sig, &cert, &cfg);
            writeln!(out, "{}", report.to_json()).map_err(w)?;
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Eval { signature, pattern, model, random, seed, size, valuation, theorem1 } => {
            let sig = load_signature(&signature)?;
            let m = match (model, random) {
                (Some(path), _) => FiniteModel::parse(&read(&path)?, &sig).map_err(|e| error(format!("{}: {e}", path.display())))?,
                (None, true) => random_injective_model(&sig, size, seed)
                    .map_err(|e| error(format!("{e} (a smaller --size may admit one)")))?,
                (None, false) => return Err(error("give --model FILE or --random")),
            };
            if !audit_functional(&m) || !audit_injective(&m) {
                return Err(error("the model does not interpret functional/injective symbols accordingly"));
            }
            if let Some(ts) = theorem1 {
                return theorem1_verdict(&sig, &m, &ts[0], &ts[1], out);
            }
            let text = pattern.ok_or_else(|| error("missing pattern"))?;
            let phi = parse_pattern(&text, &sig).map_err(|e| error(format!("`{text}`: {e}")))?;
            if !valuation.is_empty() {
                let rho = parse_valuation(&m, &phi, &valuation)?;
                let set = m.eval(&rho, &phi).map_err(error)?;
                writeln!(out, "{}", m.render_set(&phi.sort_of(&sig).map_err(error)?, set)).map_err(w)?;
                return Ok(0);
            }
            let holds = m.satisfies(&phi).map_err(error)?;
            writeln!(out, "{}", if holds { "SATISFIED" } else { "NOT SATISFIED" }).map_err(w)?;
            Ok(if holds { 0 } else { 2 })
        }
        Command::Axioms { signature } => {
            let sig = load_signature(&signature)?;
            write!(out, "{}", generate_axioms(&sig).export(&sig)).map_err(w)?;
            Ok(0)
        }
    }
}

fn parse_valuation(m: &FiniteModel, phi: &Pattern, items: &[String]) -> Result<Valuation, Failure> {
    let free = phi.free_vars();
    let mut rho = Valuation::new();
    for item in items {
        let (name, elem) = item.split_once('=').ok_or_else(|| error(format!("valuation `{item}` is not `name=element`")))?;
        let (name, elem) = (name.trim(), elem.trim());
        let var = free
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| error(format!("`{name}` is not a free variable of the pattern")))?;
        let index = m
            .element_index(&var.sort, elem)
            .ok_or_else(|| error(format!("`{elem}` is not an element of {}", var.sort)))?;
        rho.insert(var.clone(), index);
    }
    Ok(rho)
}

fn theorem1_verdict(sig: &Signature, m: &FiniteModel, t1: &str, t2: &str, out: &mut dyn Write) -> Res {
    let (t1, t2) = terms(sig, t1, t2)?;
    let outer = t1.check(sig).map_err(error)?;
    let lhs = Pattern::and(t1.to_pattern(), t2.to_pattern());
    let outcome = unify(sig, &t1, &t2).map_err(error)?;
    let rhs = match &outcome {
        Outcome::Solved { mgu, .. } => Pattern::and(t1.to_pattern(), phi_of_subst(mgu, &outer)),
        Outcome::Failed { .. } => Pattern::bottom(outer),
    };
    let holds = m.equivalence_holds(&lhs, &rhs).map_err(error)?;
    writeln!(out, "{}", if holds { "EQUIVALENT" } else { "NOT EQUIVALENT" }).map_err(error)?;
    Ok(if holds { 0 } else { 2 })
}
