//! Static well-formedness: name resolution, arity and scoping.

use std::collections::HashSet;

use super::ast::*;
use super::diag::{Code, Diagnostic, Span};

/// Checks every naming, arity and scoping rule of a specification. Returns
/// one diagnostic per violation, in source order; empty means well formed.
pub fn validate_spec(spec: &Specification) -> Vec<Diagnostic> {
    let mut v = Validator::new(spec);
    v.declarations();
    v.check_gate_list(&spec.top_gates, spec.loc.0, "specification");
    v.behavior(
        &spec.top_behavior,
        &mut Scope::closed(&spec.top_gates),
        &mut Vec::new(),
    );
    for p in &spec.processes {
        v.check_gate_list(&p.formal_gates, p.loc.0, &format!("process `{}`", p.name));
        v.behavior(&p.body, &mut Scope::closed(&p.formal_gates), &mut Vec::new());
    }
    v.diags
}

/// Validates a detached behavior against the declarations of `context`.
/// Gates are treated as free, so gate-scope rules are not checked.
pub fn validate_behavior(b: &BehaviorExpr, context: &Specification) -> Vec<Diagnostic> {
    let mut v = Validator::new(context);
    v.behavior(b, &mut Scope::Open, &mut Vec::new());
    v.diags
}

enum Scope {
    Open,
    Closed(Vec<String>),
}

impl Scope {
    fn closed(gates: &[String]) -> Self {
        Scope::Closed(gates.to_vec())
    }

    fn contains(&self, g: &str) -> bool {
        match self {
            Scope::Open => true,
            Scope::Closed(gs) => gs.iter().any(|x| x == g),
        }
    }
}

struct Validator<'a> {
    spec: &'a Specification,
    diags: Vec<Diagnostic>,
}

impl<'a> Validator<'a> {
    fn new(spec: &'a Specification) -> Self {
        Validator {
            spec,
            diags: Vec::new(),
        }
    }

    fn err(&mut self, code: Code, span: Span, msg: String) {
        self.diags.push(Diagnostic::error(code, span, msg));
    }

    fn declarations(&mut self) {
        let spec = self.spec;
        let mut sort_names = HashSet::new();
        let mut all_values: HashSet<&str> = HashSet::new();
        for s in &spec.sorts {
            if !sort_names.insert(s.name.as_str()) {
                self.err(
                    Code::DuplicateDefinition,
                    s.loc.0,
                    format!("sort `{}` is declared more than once", s.name),
                );
            }
            if s.values.is_empty() {
                self.err(
                    Code::EmptySort,
                    s.loc.0,
                    format!("sort `{}` declares no values", s.name),
                );
            }
            let mut local = HashSet::new();
            for v in &s.values {
                if !local.insert(v.as_str()) {
                    self.err(
                        Code::DuplicateValue,
                        s.loc.0,
                        format!("value `{v}` listed twice in sort `{}`", s.name),
                    );
                } else if !all_values.insert(v.as_str()) {
                    self.err(
                        Code::DuplicateValue,
                        s.loc.0,
                        format!("value `{v}` of sort `{}` is already declared by another sort", s.name),
                    );
                }
            }
        }
        let mut proc_names = HashSet::new();
        for p in &spec.processes {
            if !proc_names.insert(p.name.as_str()) {
                self.err(
                    Code::DuplicateDefinition,
                    p.loc.0,
                    format!("process `{}` is defined more than once", p.name),
                );
            }
        }
    }

    fn check_gate_list(&mut self, gates: &[String], span: Span, owner: &str) {
        let mut seen = HashSet::new();
        for g in gates {
            if !seen.insert(g.as_str()) {
                self.err(
                    Code::DuplicateGate,
                    span,
                    format!("gate `{g}` appears twice in the gate list of {owner}"),
                );
            }
        }
    }

    fn behavior(&mut self, b: &BehaviorExpr, gates: &mut Scope, vars: &mut Vec<(String, String)>) {
        match b {
            BehaviorExpr::Stop | BehaviorExpr::Exit => {}
            BehaviorExpr::Prefix { action, rest, loc } => {
                let before = vars.len();
                if let ActionExpr::Comm { gate, offers } = action {
                    if !gates.contains(gate) {
                        self.err(Code::UnknownGate, loc.0, format!("gate `{gate}` is not in scope"));
                    }
                    for o in offers {
                        match o {
                            OfferExpr::Send(ValueExpr::Var(x)) => {
                                if !vars[..before].iter().any(|(v, _)| v == x) {
                                    self.err(
                                        Code::UnboundVariable,
                                        loc.0,
                                        format!("`{x}` is neither a bound variable nor a declared value"),
                                    );
                                }
                            }
                            OfferExpr::Send(ValueExpr::Literal(v)) => {
                                if self.spec.sort_of_value(v).is_none() {
                                    self.err(
                                        Code::UnknownValue,
                                        loc.0,
                                        format!("value `{v}` is not declared by any sort"),
                                    );
                                }
                            }
                            OfferExpr::Receive { var, sort } => {
                                if self.spec.sort(sort).is_none() {
                                    self.err(
                                        Code::UnknownSort,
                                        loc.0,
                                        format!("sort `{sort}` is not declared"),
                                    );
                                }
                                vars.push((var.clone(), sort.clone()));
                            }
                        }
                    }
                }
                self.behavior(rest, gates, vars);
                vars.truncate(before);
            }
            BehaviorExpr::Choice(l, r) | BehaviorExpr::Seq(l, r) | BehaviorExpr::Disrupt(l, r) => {
                self.behavior(l, gates, vars);
                self.behavior(r, gates, vars);
            }
            BehaviorExpr::Par {
                left,
                sync,
                right,
                loc,
            } => {
                if let SyncSet::Gates(gs) = sync {
                    for g in gs {
                        if !gates.contains(g) {
                            self.err(
                                Code::UnknownGate,
                                loc.0,
                                format!("synchronization gate `{g}` is not in scope"),
                            );
                        }
                    }
                }
                self.behavior(left, gates, vars);
                self.behavior(right, gates, vars);
            }
            BehaviorExpr::Hide { gates: hidden, body, loc } => {
                self.check_gate_list(hidden, loc.0, "`hide`");
                match gates {
                    Scope::Open => self.behavior(body, gates, vars),
                    Scope::Closed(gs) => {
                        let before = gs.len();
                        gs.extend(hidden.iter().cloned());
                        self.behavior(body, gates, vars);
                        if let Scope::Closed(gs) = gates {
                            gs.truncate(before);
                        }
                    }
                }
            }
            BehaviorExpr::Inst {
                process,
                gates: actual,
                loc,
            } => {
                match self.spec.process(process) {
                    None => self.err(
                        Code::UnknownProcess,
                        loc.0,
                        format!("unknown process `{process}`"),
                    ),
                    Some(def) if def.formal_gates.len() != actual.len() => self.err(
                        Code::GateArity,
                        loc.0,
                        format!(
                            "process `{process}` expects {} gate(s), {} given",
                            def.formal_gates.len(),
                            actual.len()
                        ),
                    ),
                    Some(_) => {}
                }
                for g in actual {
                    if !gates.contains(g) {
                        self.err(Code::UnknownGate, loc.0, format!("gate `{g}` is not in scope"));
                    }
                }
            }
        }
    }
}
