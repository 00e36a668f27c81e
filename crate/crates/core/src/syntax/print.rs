//! Canonical text rendering. Output reparses to a structurally equal tree.

use std::fmt::{self, Write};

use super::ast::*;

const HIDE: u8 = 0;
const SEQ: u8 = 1;
const DISRUPT: u8 = 2;
const PAR: u8 = 3;
const CHOICE: u8 = 4;
const PREFIX: u8 = 5;
const ATOM: u8 = 6;

fn level(b: &BehaviorExpr) -> u8 {
    match b {
        BehaviorExpr::Hide { .. } => HIDE,
        BehaviorExpr::Seq(..) => SEQ,
        BehaviorExpr::Disrupt(..) => DISRUPT,
        BehaviorExpr::Par { .. } => PAR,
        BehaviorExpr::Choice(..) => CHOICE,
        BehaviorExpr::Prefix { .. } => PREFIX,
        BehaviorExpr::Stop | BehaviorExpr::Exit | BehaviorExpr::Inst { .. } => ATOM,
    }
}

fn gate_list(out: &mut String, gates: &[String]) {
    out.push('[');
    out.push_str(&gates.join(", "));
    out.push(']');
}

fn write_action(out: &mut String, a: &ActionExpr) {
    match a {
        ActionExpr::Internal => out.push('i'),
        ActionExpr::Comm { gate, offers } => {
            out.push_str(gate);
            for o in offers {
                match o {
                    OfferExpr::Send(v) => {
                        out.push_str(" !");
                        out.push_str(v.name());
                    }
                    OfferExpr::Receive { var, sort } => {
                        let _ = write!(out, " ?{var}:{sort}");
                    }
                }
            }
        }
    }
}

fn write_expr(out: &mut String, b: &BehaviorExpr, min: u8) {
    let lvl = level(b);
    let paren = lvl < min;
    if paren {
        out.push('(');
    }
    match b {
        BehaviorExpr::Stop => out.push_str("stop"),
        BehaviorExpr::Exit => out.push_str("exit"),
        BehaviorExpr::Inst { process, gates, .. } => {
            out.push_str(process);
            if !gates.is_empty() {
                out.push(' ');
                gate_list(out, gates);
            }
        }
        BehaviorExpr::Prefix { action, rest, .. } => {
            write_action(out, action);
            out.push_str("; ");
            write_expr(out, rest, PREFIX);
        }
        BehaviorExpr::Choice(l, r) => binary(out, l, " [] ", r, CHOICE),
        BehaviorExpr::Seq(l, r) => binary(out, l, " >> ", r, SEQ),
        BehaviorExpr::Disrupt(l, r) => binary(out, l, " [> ", r, DISRUPT),
        BehaviorExpr::Par {
            left, sync, right, ..
        } => {
            let op = match sync {
                SyncSet::None => " ||| ".to_string(),
                SyncSet::Full => " || ".to_string(),
                SyncSet::Gates(gs) => format!(" |[{}]| ", gs.join(", ")),
            };
            binary(out, left, &op, right, PAR);
        }
        BehaviorExpr::Hide { gates, body, .. } => {
            out.push_str("hide ");
            out.push_str(&gates.join(", "));
            out.push_str(" in ");
            write_expr(out, body, HIDE);
        }
    }
    if paren {
        out.push(')');
    }
}

fn binary(out: &mut String, l: &BehaviorExpr, op: &str, r: &BehaviorExpr, lvl: u8) {
    write_expr(out, l, lvl);
    out.push_str(op);
    write_expr(out, r, lvl + 1);
}

pub fn behavior_to_string(b: &BehaviorExpr) -> String {
    let mut s = String::new();
    write_expr(&mut s, b, HIDE);
    s
}

impl fmt::Display for BehaviorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&behavior_to_string(self))
    }
}

fn functionality(f: Functionality) -> &'static str {
    match f {
        Functionality::NoExit => "noexit",
        Functionality::Exit => "exit",
    }
}

/// Renders a whole specification in the canonical layout.
pub fn spec_to_string(spec: &Specification) -> String {
    let mut out = String::new();
    out.push_str("specification ");
    out.push_str(&spec.name);
    if !spec.top_gates.is_empty() {
        out.push(' ');
        gate_list(&mut out, &spec.top_gates);
    }
    let _ = writeln!(out, " : {}", functionality(spec.functionality));
    if !spec.sorts.is_empty() {
        out.push_str("sorts\n");
        for s in &spec.sorts {
            let _ = writeln!(out, "  {} = {{{}}}", s.name, s.values.join(", "));
        }
    }
    out.push_str("behaviour\n  ");
    out.push_str(&behavior_to_string(&spec.top_behavior));
    out.push('\n');
    if !spec.processes.is_empty() {
        out.push_str("where\n");
        for p in &spec.processes {
            out.push_str("  process ");
            out.push_str(&p.name);
            if !p.formal_gates.is_empty() {
                out.push(' ');
                gate_list(&mut out, &p.formal_gates);
            }
            let _ = writeln!(out, " : {} :=", functionality(p.functionality));
            out.push_str("    ");
            out.push_str(&behavior_to_string(&p.body));
            out.push_str("\n  endproc\n");
        }
    }
    out.push_str("endspec\n");
    out
}

impl fmt::Display for Specification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&spec_to_string(self))
    }
}
