//! Interface contracts: processes, their input/output ports, and the
//! messages flowing through those ports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

/// A port owned by a process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PortDecl {
    pub port: String,
    pub process: String,
}

/// A message received on (IM) or sent from (OM) a port.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MessageDecl {
    pub message: String,
    pub port: String,
}

/// Informative routing of a message from an output port to an input port.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Flow {
    pub message: String,
    pub from: String,
    pub to: String,
}

/// The tuple `(P, IP, OP, IM, OM, IMI)`, plus optional flows.
///
/// Entries are kept as listed so that duplicates remain observable; the
/// checks themselves never depend on listing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InterfaceContract {
    pub processes: Vec<String>,
    pub in_ports: Vec<PortDecl>,
    pub out_ports: Vec<PortDecl>,
    pub in_msgs: Vec<MessageDecl>,
    pub out_msgs: Vec<MessageDecl>,
    pub external_in: Vec<String>,
    pub flows: Vec<Flow>,
}

impl InterfaceContract {
    /// Port ids of `IP ∪ OP`.
    pub fn port_ids(&self) -> BTreeSet<&str> {
        self.in_ports
            .iter()
            .chain(&self.out_ports)
            .map(|p| p.port.as_str())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// C1: input port ids are pairwise distinct.
    UniqueInputPorts,
    /// C2: output port ids are pairwise distinct.
    UniqueOutputPorts,
    /// C3: every input message is emitted by some output message or arrives
    /// from outside the component.
    InputMessageSource,
    /// C4: every output message is consumed by some input message.
    OutputMessageSink,
    /// A port is owned by a process missing from `P`.
    OwnerUndeclared,
    /// A message refers to a port missing from `IP` (for IM) or `OP` (for OM).
    PortUndeclared,
    /// A flow refers to an undeclared output or input port.
    FlowPortUndeclared,
}

impl Rule {
    pub fn code(self) -> &'static str {
        match self {
            Rule::UniqueInputPorts => "C1",
            Rule::UniqueOutputPorts => "C2",
            Rule::InputMessageSource => "C3",
            Rule::OutputMessageSink => "C4",
            Rule::OwnerUndeclared => "owner-undeclared",
            Rule::PortUndeclared => "port-undeclared",
            Rule::FlowPortUndeclared => "flow-port-undeclared",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub elements: Vec<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for id in ids {
        *counts.entry(id).or_default() += 1;
    }
    counts
        .into_iter()
        .filter(|&(_, n)| n > 1)
        .map(|(id, _)| id)
        .collect()
}

/// Runs C1–C4 in that order, followed by the structural checks. Violations
/// of one rule are sorted by the offending element.
pub fn check_interface(ic: &InterfaceContract) -> Vec<Violation> {
    let mut out = Vec::new();

    for port in duplicates(ic.in_ports.iter().map(|p| p.port.as_str())) {
        out.push(Violation {
            rule: Rule::UniqueInputPorts,
            elements: vec![port.to_string()],
            message: format!("input port `{port}` is declared more than once"),
        });
    }
    for port in duplicates(ic.out_ports.iter().map(|p| p.port.as_str())) {
        out.push(Violation {
            rule: Rule::UniqueOutputPorts,
            elements: vec![port.to_string()],
            message: format!("output port `{port}` is declared more than once"),
        });
    }

    let emitted: BTreeSet<&str> = ic.out_msgs.iter().map(|m| m.message.as_str()).collect();
    let received: BTreeSet<&str> = ic.in_msgs.iter().map(|m| m.message.as_str()).collect();
    let external: BTreeSet<&str> = ic.external_in.iter().map(String::as_str).collect();

    for m in &received {
        if !emitted.contains(m) && !external.contains(m) {
            out.push(Violation {
                rule: Rule::InputMessageSource,
                elements: vec![m.to_string()],
                message: format!(
                    "input message `{m}` is neither sent by an output port nor listed as external"
                ),
            });
        }
    }
    for m in &emitted {
        if !received.contains(m) {
            out.push(Violation {
                rule: Rule::OutputMessageSink,
                elements: vec![m.to_string()],
                message: format!("output message `{m}` is not received by any input port"),
            });
        }
    }

    let processes: BTreeSet<&str> = ic.processes.iter().map(String::as_str).collect();
    let mut owners: BTreeSet<(&str, &str)> = BTreeSet::new();
    for p in ic.in_ports.iter().chain(&ic.out_ports) {
        if !processes.contains(p.process.as_str()) {
            owners.insert((p.port.as_str(), p.process.as_str()));
        }
    }
    for (port, process) in owners {
        out.push(Violation {
            rule: Rule::OwnerUndeclared,
            elements: vec![port.to_string(), process.to_string()],
            message: format!("port `{port}` is owned by undeclared process `{process}`"),
        });
    }

    let in_ids: BTreeSet<&str> = ic.in_ports.iter().map(|p| p.port.as_str()).collect();
    let out_ids: BTreeSet<&str> = ic.out_ports.iter().map(|p| p.port.as_str()).collect();
    let mut dangling: BTreeSet<(&str, &str, &str)> = BTreeSet::new();
    for m in &ic.in_msgs {
        if !in_ids.contains(m.port.as_str()) {
            dangling.insert((m.message.as_str(), m.port.as_str(), "input"));
        }
    }
    for m in &ic.out_msgs {
        if !out_ids.contains(m.port.as_str()) {
            dangling.insert((m.message.as_str(), m.port.as_str(), "output"));
        }
    }
    for (message, port, dir) in dangling {
        out.push(Violation {
            rule: Rule::PortUndeclared,
            elements: vec![message.to_string(), port.to_string()],
            message: format!("message `{message}` uses undeclared {dir} port `{port}`"),
        });
    }

    let mut bad_flows: BTreeSet<(&str, &str)> = BTreeSet::new();
    for f in &ic.flows {
        if !out_ids.contains(f.from.as_str()) {
            bad_flows.insert((f.message.as_str(), f.from.as_str()));
        }
        if !in_ids.contains(f.to.as_str()) {
            bad_flows.insert((f.message.as_str(), f.to.as_str()));
        }
    }
    for (message, port) in bad_flows {
        out.push(Violation {
            rule: Rule::FlowPortUndeclared,
            elements: vec![message.to_string(), port.to_string()],
            message: format!("flow of `{message}` refers to undeclared port `{port}`"),
        });
    }
    out
}
