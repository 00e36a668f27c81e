//! `lotos-asc`: check, explore and verify LOTOS specifications, component
//! contracts and architecture configurations.
//!
//! Exit codes: 0 success, 1 property or contract failure, 2 usage, parse or
//! validation error, 3 exploration budget exceeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use lotos_asc::adl::{flatten, load_config, validate_config, AdlError};
use lotos_asc::contracts::{check_asc, parse_facts};
use lotos_asc::semantics::{generate_lts, ExplorationBudget, Lts, SemanticsError};
use lotos_asc::syntax::{parse_asc, parse_spec, spec_to_string, Diagnostic, Specification};
use lotos_asc::verify::{
    check_deadlock, check_reachable, check_safety, export_aut, LabelPattern, Monitor, VerifyResult,
};

const OK: u8 = 0;
const FAILS: u8 = 1;
const INVALID: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "lotos-asc", version, about)]
struct Cli {
    /// Output style for results on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = ExplorationBudget::default().max_states, value_parser = positive)]
    max_states: usize,
    #[arg(long, default_value_t = ExplorationBudget::default().max_transitions, value_parser = positive)]
    max_transitions: usize,
}

impl BudgetArgs {
    fn budget(&self) -> ExplorationBudget {
        ExplorationBudget {
            max_states: self.max_states,
            max_transitions: self.max_transitions,
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err("expected a positive integer".into()),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a specification.
    Check { file: PathBuf },
    /// Generate the transition system and export it as `.aut`.
    Lts {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the `.aut` text here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a property of the specification's transition system.
    Verify {
        file: PathBuf,
        #[arg(long, group = "property")]
        deadlock: bool,
        /// Label pattern, e.g. `terClt !* !*`.
        #[arg(long, group = "property", value_name = "PATTERN")]
        reach: Option<String>,
        /// Safety monitor file.
        #[arg(long, group = "property", value_name = "MONITOR")]
        safety: Option<PathBuf>,
        /// Remove every `hide` before exploring.
        #[arg(long)]
        no_hide: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a component contract against a fact base.
    Contract {
        file: PathBuf,
        #[arg(long)]
        facts: PathBuf,
    },
    /// Validate and flatten an architecture configuration.
    Adl {
        file: PathBuf,
        /// Write the flattened specification here.
        #[arg(long, value_name = "OUT")]
        emit_lot: Option<PathBuf>,
    },
}

/// A failed run: message lines for standard error and the exit code.
struct Failure {
    code: u8,
    lines: Vec<String>,
}

fn fail(code: u8, line: String) -> Failure {
    Failure {
        code,
        lines: vec![line],
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(INVALID, format!("{}: cannot read: {e}", path.display())))
}

fn diagnostics(path: &Path, diags: &[Diagnostic]) -> Failure {
    Failure {
        code: INVALID,
        lines: diags.iter().map(|d| format!("{}:{d}", path.display())).collect(),
    }
}

fn load_spec(path: &Path) -> Result<Specification, Failure> {
    parse_spec(&read(path)?).map_err(|d| diagnostics(path, &d))
}

fn explore(spec: &Specification, budget: ExplorationBudget) -> Result<Lts, Failure> {
    generate_lts(spec, budget).map_err(|e| {
        let code = match e {
            SemanticsError::BudgetExceeded { .. } => BUDGET,
            _ => INVALID,
        };
        fail(code, format!("error: {e}"))
    })
}

struct Out {
    format: Format,
    text: String,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn json(&mut self, v: impl Serialize) {
        self.line(serde_json::to_string_pretty(&v).expect("reports serialize"));
    }
}

fn verdict(out: &mut Out, property: &str, lts: &Lts, r: &VerifyResult) -> u8 {
    if out.format == Format::Json {
        out.json(json!({
            "property": property,
            "states": lts.num_states(),
            "transitions": lts.num_transitions(),
            "result": r,
        }));
    } else {
        out.line(format!("{property}: {}", if r.holds() { "holds" } else { "fails" }));
        if let Some(t) = &r.evidence {
            let kind = if r.holds() { "witness" } else { "counterexample" };
            out.line(format!("{kind} (length {}): {t}", t.len()));
        }
    }
    if r.holds() {
        OK
    } else {
        FAILS
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<u8, Failure> {
    match cli.command {
        Command::Check { file } => {
            let spec = load_spec(&file)?;
            if out.format == Format::Json {
                out.json(json!({
                    "specification": spec.name,
                    "gates": spec.top_gates,
                    "sorts": spec.sorts.len(),
                    "processes": spec.processes.len(),
                    "diagnostics": Vec::<Diagnostic>::new(),
                }));
            } else {
                out.line(format!(
                    "ok: specification {} ({} sort(s), {} process(es))",
                    spec.name,
                    spec.sorts.len(),
                    spec.processes.len()
                ));
            }
            Ok(OK)
        }
        Command::Lts { file, budget, output } => {
            let lts = explore(&load_spec(&file)?, budget.budget())?;
            let aut = export_aut(&lts);
            if let Some(path) = &output {
                fs::write(path, &aut).map_err(|e| fail(INVALID, format!("{}: cannot write: {e}", path.display())))?;
            }
            if out.format == Format::Json {
                out.json(json!({
                    "states": lts.num_states(),
                    "transitions": lts.num_transitions(),
                    "aut": if output.is_none() { Some(&aut) } else { None },
                }));
            } else {
                out.line(format!("{} states, {} transitions", lts.num_states(), lts.num_transitions()));
                if output.is_none() {
                    out.text.push_str(&aut);
                }
            }
            Ok(OK)
        }
        Command::Verify {
            file,
            deadlock,
            reach,
            safety,
            no_hide,
            budget,
        } => {
            let mut spec = load_spec(&file)?;
            if no_hide {
                spec = spec.without_hiding();
            }
            let property = if let Some(p) = reach {
                let pattern: LabelPattern = p.parse().map_err(|e| fail(INVALID, format!("error: {e}")))?;
                Some((format!("reach {pattern}"), Some(pattern), None))
            } else if let Some(path) = safety {
                let m = Monitor::parse(&read(&path)?)
                    .map_err(|e| fail(INVALID, format!("{}: {e}", path.display())))?;
                Some((format!("safety {}", m.name), None, Some(m)))
            } else if deadlock {
                Some(("deadlock freedom".to_string(), None, None))
            } else {
                None
            };
            let Some((name, pattern, monitor)) = property else {
                return Err(fail(INVALID, "error: one of --deadlock, --reach or --safety is required".into()));
            };
            let lts = explore(&spec, budget.budget())?;
            let r = match (pattern, monitor) {
                (Some(p), _) => check_reachable(&lts, &p),
                (_, Some(m)) => check_safety(&lts, &m),
                _ => check_deadlock(&lts),
            };
            Ok(verdict(out, &name, &lts, &r))
        }
        Command::Contract { file, facts } => {
            let asc = parse_asc(&read(&file)?).map_err(|d| diagnostics(&file, &d))?;
            let base = parse_facts(&read(&facts)?).map_err(|d| diagnostics(&facts, &d))?;
            let dir = file.parent().unwrap_or(Path::new(""));
            let report = check_asc(&asc, &base, dir);
            if out.format == Format::Json {
                let mut v = serde_json::to_value(&report).expect("reports serialize");
                v["failure_codes"] = json!(report.failure_codes());
                out.json(v);
            } else {
                out.line(report.to_string());
            }
            Ok(if report.pass { OK } else { FAILS })
        }
        Command::Adl { file, emit_lot } => {
            let cfg = load_config(&file).map_err(|e| match e {
                AdlError::Syntax { path, diagnostics: d } => diagnostics(&path, &d),
                e => fail(INVALID, format!("error: {e}")),
            })?;
            let problems = validate_config(&cfg);
            let flat = if problems.is_empty() { flatten(&cfg) } else { Err(problems) };
            let spec = flat.map_err(|ds| Failure {
                code: INVALID,
                lines: ds.iter().map(|d| format!("{}: {d}", file.display())).collect(),
            })?;
            let text = spec_to_string(&spec);
            if let Some(path) = &emit_lot {
                fs::write(path, &text).map_err(|e| fail(INVALID, format!("{}: cannot write: {e}", path.display())))?;
            }
            if out.format == Format::Json {
                out.json(json!({
                    "configuration": cfg.name,
                    "elements": cfg.elements,
                    "diagnostics": Vec::<String>::new(),
                    "top_gates": spec.top_gates,
                    "specification": text,
                }));
            } else {
                out.line(format!(
                    "ok: configuration {} ({} element(s)), gates [{}]",
                    cfg.name,
                    cfg.elements.len(),
                    spec.top_gates.join(", ")
                ));
                if emit_lot.is_none() {
                    out.text.push_str(&text);
                }
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INVALID } else { OK });
        }
    };
    let mut out = Out {
        format: cli.format,
        text: String::new(),
    };
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(f) => {
            let mut err = std::io::stderr().lock();
            for l in f.lines {
                let _ = writeln!(err, "{l}");
            }
            f.code
        }
    };
    let _ = std::io::stdout().lock().write_all(out.text.as_bytes());
    ExitCode::from(code)
}
