//! Command-line driver for the prover.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use infoprove::elaborate::certificate_to_proof;
use infoprove::json;
use infoprove::model::{copy_lemma, double_markov, frl, infinite_divisibility, library, Eii, Eip};
use infoprove::prover::{prove_system, SystemOutcome};
use infoprove::region::{eip_implies, simplify, Implication, RegionOptions, RegionStep};
use infoprove::rules::check_proof;
use infoprove::search::{
    prove_eii, verify_proof_certificate, EiiResult, FailureReason, ProofCertificate,
    SearchOptions,
};
use infoprove::syntax::{format_expr, parse, Statement};
use infoprove::Error;

pub const EXIT_PROVED: i32 = 0;
pub const EXIT_NOT_PROVED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "infoprove", version, about = "Information inequality prover")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prove a statement given as a file or inline text.
    Prove {
        input: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the certificate document here.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Write the elaborated rule-level proof here.
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Check that the first region is contained in the second.
    CheckImplies {
        first: String,
        second: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Simplify a region.
    Simplify {
        region: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Re-check a proof or certificate document.
    CheckProof { file: PathBuf },
    /// List the premise library.
    Lemmas,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// copy:<n>,<l> | frl | double-markov | infdiv:<n> | file:<path>
    #[arg(long = "premise")]
    pub premises: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// LP solves allowed.
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
    /// Leaves allowed in a case split.
    #[arg(long)]
    pub max_cases: Option<usize>,
    /// LP feasibility tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Recorded in the output; the search itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        let mut o = SearchOptions {
            budget: self.budget,
            repeat: self.repeat,
            max_cases: self.max_cases,
            jobs: self.jobs.max(1),
            ..SearchOptions::default()
        };
        o.prover.tolerance = self.tolerance;
        o
    }

    fn echo(&self) -> Value {
        json!({
            "premises": self.premises,
            "repeat": self.repeat,
            "budget": self.budget,
            "max_cases": self.max_cases,
            "tolerance": self.tolerance,
            "jobs": self.jobs,
            "seed": self.seed,
        })
    }
}

/// Exit status plus what goes to stdout and stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn input_error(msg: impl Into<String>) -> Output {
    Output {
        code: EXIT_INPUT,
        stdout: String::new(),
        stderr: msg.into(),
    }
}

fn error_output(e: &Error) -> Output {
    let code = match e {
        Error::BudgetExceeded(_) | Error::SolverFailure(_) => EXIT_BUDGET,
        _ => EXIT_INPUT,
    };
    Output {
        code,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

/// A file path when one exists, otherwise inline text.
fn read_input(arg: &str) -> std::result::Result<String, Output> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).map_err(|e| input_error(format!("error: {arg}: {e}\n")))
    } else {
        Ok(arg.to_string())
    }
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_statement(arg: &str) -> std::result::Result<Statement, Output> {
    let text = strip_comments(&read_input(arg)?);
    parse(&text).map_err(|e| input_error(format!("error: {e}\n")))
}

pub fn premise_by_name(name: &str) -> std::result::Result<Eii, String> {
    let bad = || format!("unknown premise `{name}`");
    if let Some(rest) = name.strip_prefix("copy:") {
        let (n, l) = rest.split_once(',').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let l: usize = l.trim().parse().map_err(|_| bad())?;
        if l == 0 || n + 2 * l > 12 {
            return Err(format!("copy:{n},{l} is out of range"));
        }
        return Ok(copy_lemma(n, l));
    }
    if let Some(rest) = name.strip_prefix("infdiv:") {
        let n: usize = rest.trim().parse().map_err(|_| bad())?;
        return infinite_divisibility(n).map_err(|e| e.to_string());
    }
    if let Some(path) = name.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        return parse(&strip_comments(&text))
            .and_then(|s| s.to_eii())
            .map_err(|e| format!("{path}: {e}"));
    }
    match name {
        "frl" => Ok(frl()),
        "double-markov" => Ok(double_markov()),
        _ => Err(bad()),
    }
}

fn premises(args: &SearchArgs) -> std::result::Result<Vec<Eii>, Output> {
    args.premises
        .iter()
        .map(|s| premise_by_name(s).map_err(|m| input_error(format!("error: {m}\n"))))
        .collect()
}

fn write_doc(path: &Path, v: &Value) -> std::result::Result<(), Output> {
    std::fs::write(path, json::to_string(v) + "\n")
        .map_err(|e| input_error(format!("error: {}: {e}\n", path.display())))
}

fn describe_assignment(c: &ProofCertificate, out: &mut String) {
    match c {
        ProofCertificate::Trivial {
            eii, assignment, ..
        } => {
            for (name, m) in eii.aux.iter().zip(assignment) {
                let parts = eii.base.names_of(*m);
                let _ = writeln!(out, "  {name} = ({})", parts.join(", "));
            }
        }
        ProofCertificate::Premise {
            eii,
            lemma,
            substitution,
            inner,
            ..
        } => {
            let subs: Vec<String> = lemma
                .base
                .rv_names()
                .iter()
                .zip(substitution)
                .map(|(y, m)| format!("{y} = ({})", eii.base.names_of(*m).join(", ")))
                .collect();
            let _ = writeln!(out, "  using a premise at {}", subs.join(", "));
            describe_assignment(inner, out);
        }
        ProofCertificate::CaseSplit {
            eii,
            split,
            positive,
            negative,
        } => {
            let s = format_expr(&eii.base, split);
            let _ = writeln!(out, "  case {s} >= 0:");
            describe_assignment(positive, out);
            let _ = writeln!(out, "  case {s} <= 0:");
            describe_assignment(negative, out);
        }
    }
}

fn prove_command(
    input: &str,
    args: &SearchArgs,
    cert_path: Option<&Path>,
    proof_path: Option<&Path>,
    format: Format,
) -> std::result::Result<Output, Output> {
    let st = parse_statement(input)?;
    let e = st
        .to_eii()
        .map_err(|e| input_error(format!("error: {e}\n")))?;
    let lemmas = premises(args)?;
    let out = prove_eii(&e, &lemmas, &args.options()).map_err(|x| error_output(&x))?;
    let stats = serde_json::to_value(&out.stats).expect("plain data");
    let mut text = String::new();
    let mut result = json!({
        "statement": json::eii_to_json(&e)["data"],
        "options": args.echo(),
        "stats": stats,
    });
    let code = match &out.result {
        EiiResult::Proved(cert) => {
            let _ = writeln!(text, "proved");
            describe_assignment(cert, &mut text);
            let proof = certificate_to_proof(cert).map_err(|x| error_output(&x))?;
            result["status"] = json!("proved");
            result["certificate"] = json::certificate_to_json(cert)["data"].clone();
            result["proof_steps"] = json!(proof.steps.len());
            if let Some(p) = cert_path {
                write_doc(p, &json::certificate_to_json(cert))?;
                let _ = writeln!(text, "certificate: {}", p.display());
            }
            if let Some(p) = proof_path {
                write_doc(p, &json::proof_to_json(&proof))?;
                let _ = writeln!(text, "proof: {}", p.display());
            }
            EXIT_PROVED
        }
        EiiResult::Failed(f) => {
            let budget = f.reason == FailureReason::Budget;
            let _ = writeln!(
                text,
                "{}",
                if budget {
                    "not proved (budget exhausted)"
                } else {
                    "not proved"
                }
            );
            result["status"] = json!(if budget { "budget" } else { "not-proved" });
            result["failure"] = serde_json::to_value(f).expect("plain data");
            if e.l() == 0 && lemmas.is_empty() {
                if let Ok(SystemOutcome::NotProved {
                    row,
                    counterexample,
                }) = prove_system(&e.base, &e.premise, &e.consequence)
                {
                    let _ = writeln!(
                        text,
                        "  row {row} fails: {} = {:.6} at a point of the Shannon cone",
                        format_expr(&e.base, &e.consequence[row]),
                        counterexample.value
                    );
                    result["counterexample"] =
                        json!({ "row": row, "point": counterexample });
                }
            }
            if budget {
                EXIT_BUDGET
            } else {
                EXIT_NOT_PROVED
            }
        }
    };
    let _ = writeln!(
        text,
        "  lp solves: {}, cache hits: {}",
        out.stats.lp_solves, out.stats.cache_hits
    );
    Ok(Output {
        code,
        stdout: render(format, text, json::document(json::RESULT, result)),
        stderr: String::new(),
    })
}

fn render(format: Format, text: String, doc: Value) -> String {
    match format {
        Format::Text => text,
        Format::Json => json::to_string(&doc) + "\n",
    }
}

fn region_of(arg: &str) -> std::result::Result<Eip, Output> {
    parse_statement(arg)?
        .to_eip()
        .map_err(|e| input_error(format!("error: {e}\n")))
}

fn region_options(args: &SearchArgs) -> RegionOptions {
    RegionOptions {
        search: args.options(),
        ..RegionOptions::default()
    }
}

fn check_implies_command(
    first: &str,
    second: &str,
    args: &SearchArgs,
    format: Format,
) -> std::result::Result<Output, Output> {
    let p = region_of(first)?;
    let q = region_of(second)?;
    let r = eip_implies(&p, &q, &region_options(args)).map_err(|x| error_output(&x))?;
    let (code, text, data) = match r {
        Implication::Proved(c) => (
            EXIT_PROVED,
            "implied\n".to_string(),
            json!({ "status": "proved", "certificate": json::certificate_to_json(&c)["data"] }),
        ),
        Implication::NotProved => (
            EXIT_NOT_PROVED,
            "not proved\n".to_string(),
            json!({ "status": "not-proved" }),
        ),
    };
    Ok(Output {
        code,
        stdout: render(format, text, json::document(json::RESULT, data)),
        stderr: String::new(),
    })
}

fn simplify_command(
    region: &str,
    args: &SearchArgs,
    format: Format,
) -> std::result::Result<Output, Output> {
    let p = region_of(region)?;
    let rep = simplify(&p, &region_options(args)).map_err(|x| error_output(&x))?;
    let mut text = String::new();
    let _ = writeln!(text, "{}", Statement::from_eip(&rep.simplified));
    for s in &rep.log {
        let line = match s {
            RegionStep::Note(t) => t.clone(),
            RegionStep::DropRow { context, row, .. } => {
                format!("dropped {} >= 0", format_expr(context, row))
            }
            RegionStep::RemoveAux {
                aux, substitution, ..
            } => format!("removed {aux} = ({})", substitution.join(", ")),
            RegionStep::Eliminate {
                real,
                rows_before,
                rows_after,
            } => format!("eliminated {real}: {rows_before} -> {rows_after} rows"),
        };
        let _ = writeln!(text, "  {line}");
    }
    if !rep.complete {
        let _ = writeln!(text, "  incomplete: budget exhausted");
    }
    Ok(Output {
        code: if rep.complete { EXIT_PROVED } else { EXIT_BUDGET },
        stdout: render(format, text, json::region_report_to_json(&rep)),
        stderr: String::new(),
    })
}

fn check_proof_command(path: &Path, format: Format) -> std::result::Result<Output, Output> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("error: {}: {e}\n", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| input_error(format!("error: {}: {e}\n", path.display())))?;
    let (kind, data) = json::open_document(&v).map_err(|e| error_output(&e))?;
    let (valid, msg) = match kind.as_str() {
        json::PROOF => {
            let p = json::proof_from_data(data).map_err(|e| error_output(&e))?;
            let c = check_proof(&p);
            (c.is_valid(), c.to_string())
        }
        json::CERTIFICATE => {
            let c = json::certificate_from_data(data).map_err(|e| error_output(&e))?;
            let ok = verify_proof_certificate(&c);
            (ok, if ok { "valid" } else { "invalid" }.to_string())
        }
        other => return Err(input_error(format!("error: cannot check a `{other}` document\n"))),
    };
    Ok(Output {
        code: if valid { EXIT_PROVED } else { EXIT_NOT_PROVED },
        stdout: render(
            format,
            format!("{msg}\n"),
            json::document(json::RESULT, json!({ "status": if valid { "valid" } else { "invalid" }, "detail": msg })),
        ),
        stderr: String::new(),
    })
}

fn lemmas_command(format: Format) -> Output {
    let lib = library();
    let mut text = String::new();
    for (name, desc) in &lib {
        let _ = writeln!(text, "{name:<16} {desc}");
    }
    let _ = writeln!(text, "{:<16} a statement read from a file", "file:<path>");
    let items: Vec<Value> = lib
        .iter()
        .map(|(n, d)| json!({ "name": n, "description": d }))
        .collect();
    Output {
        code: EXIT_PROVED,
        stdout: render(format, text, json::document("infoprove.lemmas", json!(items))),
        stderr: String::new(),
    }
}

pub fn execute(cli: &Cli) -> Output {
    let r = match &cli.command {
        Command::Prove {
            input,
            search,
            certificate,
            proof,
        } => prove_command(
            input,
            search,
            certificate.as_deref(),
            proof.as_deref(),
            cli.format,
        ),
        Command::CheckImplies {
            first,
            second,
            search,
        } => check_implies_command(first, second, search, cli.format),
        Command::Simplify { region, search } => simplify_command(region, search, cli.format),
        Command::CheckProof { file } => check_proof_command(file, cli.format),
        Command::Lemmas => Ok(lemmas_command(cli.format)),
    };
    r.unwrap_or_else(|e| e)
}

/// Parse arguments (including the program name) and run.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PROVED };
            let text = e.to_string();
            if e.use_stderr() {
                input_error(text)
            } else {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn premise_names() {
        assert_eq!(premise_by_name("copy:2,2").unwrap(), copy_lemma(2, 2));
        assert_eq!(premise_by_name("frl").unwrap(), frl());
        assert_eq!(premise_by_name("double-markov").unwrap(), double_markov());
        assert_eq!(premise_by_name("infdiv:2").unwrap().l(), 2);
        assert!(premise_by_name("copy:2").is_err());
        assert!(premise_by_name("copy:9,9").is_err());
        assert!(premise_by_name("file:/nonexistent").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["infoprove", "prove", "H(X|Y) >= 0"]).code, EXIT_PROVED);
        assert_eq!(run(["infoprove", "prove", "H(X|Y) <= 0"]).code, EXIT_NOT_PROVED);
        assert_eq!(run(["infoprove", "prove", "H(X|) >= 0"]).code, EXIT_INPUT);
        assert_eq!(run(["infoprove", "--help"]).code, EXIT_PROVED);
    }

    #[test]
    fn comments_are_ignored() {
        assert_eq!(strip_comments("# c\nH(X) >= 0 # tail"), "\nH(X) >= 0 ");
    }
}
