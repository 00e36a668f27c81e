//! Component contracts: a structural part (a query over design facts), an
//! interface part (processes, ports and messages) and a behavioral part (a
//! LOTOS specification that must be deadlock free).

pub mod facts;
pub mod interface;
pub mod query;

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::semantics::{generate_lts, ExplorationBudget};
use crate::syntax::parse_spec;
use crate::verify::{check_deadlock, VerifyResult};

pub use facts::{assert_fact, parse_facts, Fact, FactBase, FactError, Predicate};
pub use interface::{check_interface, Flow, InterfaceContract, MessageDecl, PortDecl, Rule, Violation};
pub use query::{eval_query, Atom, Binding, Query, QueryError, QueryResult, Term};

/// Reference to the specification holding a component's behavioral contract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BcRef {
    pub spec_name: String,
    /// Relative to the contract file.
    pub path: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AscContract {
    pub name: String,
    /// Free text, kept but never evaluated.
    pub assertion: Option<String>,
    pub sc: Query,
    pub ic: InterfaceContract,
    pub bc: Option<BcRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BcError {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BcSummary {
    pub spec: String,
    pub path: String,
    pub errors: Vec<BcError>,
    pub states: Option<usize>,
    pub transitions: Option<usize>,
    pub deadlock: Option<VerifyResult>,
}

impl BcSummary {
    pub fn passes(&self) -> bool {
        self.errors.is_empty() && self.deadlock.as_ref().is_some_and(VerifyResult::holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractReport {
    pub component: String,
    pub sc: QueryResult,
    pub ic_violations: Vec<Violation>,
    pub bc: Option<BcSummary>,
    pub pass: bool,
}

impl ContractReport {
    /// Codes of everything that failed, in report order.
    pub fn failure_codes(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.sc.holds() {
            out.push("sc-fails".to_string());
        }
        out.extend(self.ic_violations.iter().map(|v| v.rule.code().to_string()));
        if let Some(bc) = &self.bc {
            out.extend(bc.errors.iter().map(|e| e.code.clone()));
            if bc.deadlock.as_ref().is_some_and(|d| !d.holds()) {
                out.push("deadlock".to_string());
            }
        }
        out
    }
}

impl fmt::Display for ContractReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "component {}", self.component)?;
        match &self.sc {
            QueryResult::Holds(b) => {
                let b: Vec<String> = b.iter().map(|(v, t)| format!("{v}={t}")).collect();
                writeln!(f, "sc: holds [{}]", b.join(", "))?;
            }
            QueryResult::Fails => writeln!(f, "sc: fails")?,
        }
        if self.ic_violations.is_empty() {
            writeln!(f, "ic: ok")?;
        } else {
            writeln!(f, "ic: {} violation(s)", self.ic_violations.len())?;
            for v in &self.ic_violations {
                writeln!(f, "  {v}")?;
            }
        }
        match &self.bc {
            None => writeln!(f, "bc: none")?,
            Some(bc) => {
                write!(f, "bc: {} from {}", bc.spec, bc.path)?;
                if let (Some(s), Some(t)) = (bc.states, bc.transitions) {
                    write!(f, ", {s} states, {t} transitions")?;
                }
                if let Some(d) = &bc.deadlock {
                    match &d.evidence {
                        None => write!(f, ", deadlock free")?,
                        Some(tr) => write!(f, ", deadlock after: {tr}")?,
                    }
                }
                writeln!(f)?;
                for e in &bc.errors {
                    writeln!(f, "  [{}] {}", e.code, e.message)?;
                }
            }
        }
        write!(f, "overall: {}", if self.pass { "pass" } else { "fail" })
    }
}

fn check_bc(bc: &BcRef, ic: &InterfaceContract, dir: &Path) -> BcSummary {
    let mut summary = BcSummary {
        spec: bc.spec_name.clone(),
        path: bc.path.clone(),
        errors: Vec::new(),
        states: None,
        transitions: None,
        deadlock: None,
    };
    let mut error = |code: &str, message: String| {
        summary.errors.push(BcError {
            code: code.to_string(),
            message,
        })
    };
    let text = match std::fs::read_to_string(dir.join(&bc.path)) {
        Ok(t) => t,
        Err(e) => {
            error("missing-file", format!("cannot read `{}`: {e}", bc.path));
            return summary;
        }
    };
    let spec = match parse_spec(&text) {
        Ok(s) => s,
        Err(diags) => {
            for d in diags.iter().filter(|d| d.is_error()) {
                error(d.code.as_str(), format!("{}: {d}", bc.path));
            }
            return summary;
        }
    };
    if spec.name != bc.spec_name {
        error(
            "spec-name-mismatch",
            format!("`{}` defines specification `{}`, not `{}`", bc.path, spec.name, bc.spec_name),
        );
    }
    let ports = ic.port_ids();
    for g in &spec.top_gates {
        if !ports.contains(g.as_str()) {
            error("gate-not-port", format!("gate `{g}` is not a port of the interface contract"));
        }
    }
    match generate_lts(&spec, ExplorationBudget::default()) {
        Ok(lts) => {
            summary.states = Some(lts.num_states());
            summary.transitions = Some(lts.num_transitions());
            summary.deadlock = Some(check_deadlock(&lts));
        }
        Err(e) => error("exploration", e.to_string()),
    }
    summary
}

/// Checks all three parts of `asc`. The behavioral specification is read
/// from `asc.bc.path` relative to `dir`.
pub fn check_asc(asc: &AscContract, base: &FactBase, dir: &Path) -> ContractReport {
    let sc = eval_query(base, &asc.sc);
    let ic_violations = check_interface(&asc.ic);
    let bc = asc.bc.as_ref().map(|bc| check_bc(bc, &asc.ic, dir));
    let pass = sc.holds() && ic_violations.is_empty() && bc.as_ref().is_none_or(BcSummary::passes);
    ContractReport {
        component: asc.name.clone(),
        sc,
        ic_violations,
        bc,
        pass,
    }
}
