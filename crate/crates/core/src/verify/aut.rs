//! Aldebaran `.aut` text.

use std::collections::HashMap;
use std::fmt::Write;

use crate::semantics::{Action, Lts, Transition, Value};

use super::VerifyError;

/// `des (0, T, S)` followed by one `(src, "label", dst)` line per transition,
/// in the LTS's transition order.
pub fn export_aut(lts: &Lts) -> String {
    let mut s = format!("des (0, {}, {})\n", lts.num_transitions(), lts.num_states());
    for t in lts.transitions() {
        let _ = writeln!(s, "({}, \"{}\", {})", t.source, lts.label_text(t.label), t.target);
    }
    s
}

fn parse_label(text: &str) -> Action {
    match text {
        "i" => Action::Internal,
        "exit" => Action::Terminate,
        _ => {
            let mut parts = text.split(" !");
            let gate = parts.next().unwrap_or_default().to_string();
            let offers = parts
                .map(|v| Value {
                    sort: String::new(),
                    name: v.to_string(),
                })
                .collect();
            Action::Observable { gate, offers }
        }
    }
}

/// Reads `.aut` text. The format carries no sorts, so offered values come
/// back with an empty sort name.
pub fn read_aut(text: &str) -> Result<Lts, VerifyError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let err = |line: usize, reason: &str| VerifyError::Aut {
        line: line + 1,
        reason: reason.to_string(),
    };
    let (hl, header) = lines.next().ok_or_else(|| err(0, "missing header"))?;
    let nums = header
        .trim()
        .strip_prefix("des")
        .and_then(|r| r.trim().strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err(hl, "expected `des (0, T, S)`"))?;
    let nums: Vec<usize> = nums
        .split(',')
        .map(|n| n.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| err(hl, "header fields must be integers"))?;
    let [init, ntrans, nstates] = nums[..] else {
        return Err(err(hl, "header has three fields"));
    };
    if init != 0 || nstates == 0 {
        return Err(err(hl, "initial state must be 0 of at least one state"));
    }
    let mut labels: Vec<Action> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut transitions = Vec::new();
    for (ln, line) in lines {
        let body = line
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err(ln, "expected `(src, \"label\", dst)`"))?;
        let (src, rest) = body.split_once(',').ok_or_else(|| err(ln, "missing label"))?;
        let (label, dst) = rest.rsplit_once(',').ok_or_else(|| err(ln, "missing target"))?;
        let label = label
            .trim()
            .strip_prefix('"')
            .and_then(|l| l.strip_suffix('"'))
            .ok_or_else(|| err(ln, "label must be quoted"))?;
        let source: usize = src.trim().parse().map_err(|_| err(ln, "bad source state"))?;
        let target: usize = dst.trim().parse().map_err(|_| err(ln, "bad target state"))?;
        if source >= nstates || target >= nstates {
            return Err(err(ln, "state out of range"));
        }
        let label = *ids.entry(label.to_string()).or_insert_with(|| {
            labels.push(parse_label(label));
            labels.len() - 1
        });
        transitions.push(Transition { source, label, target });
    }
    if transitions.len() != ntrans {
        return Err(err(hl, "transition count disagrees with header"));
    }
    Ok(Lts::new(nstates, labels, transitions))
}
