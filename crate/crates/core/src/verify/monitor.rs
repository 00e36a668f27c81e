//! Safety monitors.
//!
//! ```text
//! # comment
//! monitor OrderS1S2
//! states wait, done, bad
//! initial wait
//! bad bad
//! wait -> bad  on inv !Service2 !*
//! wait -> done on ter !Service1 !*
//! end
//! ```
//!
//! For a given monitor state the first rule whose pattern matches the action
//! fires; actions with no matching rule leave the monitor where it is.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::semantics::Lts;

use super::{trace_to, LabelPattern, VerifyError, VerifyResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonitorRule {
    pub from: usize,
    pub pattern: LabelPattern,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monitor {
    pub name: String,
    pub states: Vec<String>,
    pub initial: usize,
    pub bad: BTreeSet<usize>,
    pub rules: Vec<MonitorRule>,
}

impl Monitor {
    pub fn step(&self, state: usize, action: &crate::semantics::Action) -> usize {
        self.rules
            .iter()
            .find(|r| r.from == state && r.pattern.matches(action))
            .map_or(state, |r| r.to)
    }

    pub fn parse(text: &str) -> Result<Monitor, VerifyError> {
        let mut name = None;
        let mut states: Vec<String> = Vec::new();
        let mut initial = None;
        let mut bad = BTreeSet::new();
        let mut rules = Vec::new();
        let mut ended = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |reason: String| VerifyError::Monitor { line: line_no, reason };
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            if ended {
                return Err(err("text after `end`".into()));
            }
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let lookup = |s: &str, states: &[String]| {
                states
                    .iter()
                    .position(|x| x == s)
                    .ok_or_else(|| err(format!("undeclared monitor state `{s}`")))
            };
            match kw {
                "monitor" if name.is_none() && !rest.is_empty() => name = Some(rest.to_string()),
                "states" if states.is_empty() => {
                    for s in rest.split(',').map(str::trim) {
                        if s.is_empty() || states.iter().any(|x| x == s) {
                            return Err(err(format!("bad or repeated state name `{s}`")));
                        }
                        states.push(s.to_string());
                    }
                }
                "initial" if initial.is_none() => initial = Some(lookup(rest, &states)?),
                "bad" => {
                    for s in rest.split(',').map(str::trim) {
                        bad.insert(lookup(s, &states)?);
                    }
                }
                "end" if rest.is_empty() => ended = true,
                _ => {
                    let (lhs, pattern) = line
                        .split_once(" on ")
                        .ok_or_else(|| err(format!("unrecognized line `{line}`")))?;
                    let (from, to) = lhs
                        .split_once("->")
                        .ok_or_else(|| err("expected `<state> -> <state> on <pattern>`".into()))?;
                    rules.push(MonitorRule {
                        from: lookup(from.trim(), &states)?,
                        to: lookup(to.trim(), &states)?,
                        pattern: pattern.trim().parse()?,
                    });
                }
            }
        }
        let missing = |what: &str| VerifyError::Monitor {
            line: text.lines().count(),
            reason: format!("missing `{what}`"),
        };
        if !ended {
            return Err(missing("end"));
        }
        Ok(Monitor {
            name: name.ok_or_else(|| missing("monitor <name>"))?,
            initial: initial.ok_or_else(|| missing("initial"))?,
            states,
            bad,
            rules,
        })
    }
}

/// A system state and a monitor state.
type Pair = (usize, usize);

/// Result of a safety check together with the number of product states
/// explored.
pub fn check_safety_with_stats(lts: &Lts, m: &Monitor) -> (VerifyResult, usize) {
    let start = (lts.initial(), m.initial);
    if m.bad.contains(&m.initial) {
        return (VerifyResult::failing(Some(Default::default())), 1);
    }
    let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for t in lts.outgoing(cur.0) {
            let next = (t.target, m.step(cur.1, lts.action(t.label)));
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some((cur, t.label)));
            if m.bad.contains(&next.1) {
                let trace = trace_to(lts, next, |s| parent[&s]);
                return (VerifyResult::failing(Some(trace)), parent.len());
            }
            queue.push_back(next);
        }
    }
    (VerifyResult::holding(None), parent.len())
}

/// Fails iff the synchronous product of `lts` and `m` reaches a bad monitor
/// state; the counterexample is a shortest such trace.
pub fn check_safety(lts: &Lts, m: &Monitor) -> VerifyResult {
    check_safety_with_stats(lts, m).0
}
