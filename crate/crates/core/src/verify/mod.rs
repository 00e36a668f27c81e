//! Property checking on explicit transition systems.
//!
//! All evidence traces are shortest; ties go to the earlier transition in the
//! LTS's canonical order.
//!
//! ```
//! use lotos_asc::semantics::{generate_lts, ExplorationBudget};
//! use lotos_asc::syntax::parse_spec;
//! use lotos_asc::verify::check_deadlock;
//!
//! let spec = parse_spec("specification D [a, b] : noexit behaviour a; stop |[a, b]| b; stop endspec").unwrap();
//! let r = check_deadlock(&generate_lts(&spec, ExplorationBudget::default()).unwrap());
//! assert!(!r.holds());
//! assert!(r.evidence.unwrap().0.is_empty());
//! ```

mod aut;
mod bisim;
mod monitor;
mod pattern;

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::semantics::{Action, Lts};

pub use aut::{export_aut, read_aut};
pub use bisim::{bisim_equiv, minimize};
pub use monitor::{check_safety, check_safety_with_stats, Monitor, MonitorRule};
pub use pattern::LabelPattern;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("invalid label pattern `{text}`: {reason}")]
    Pattern { text: String, reason: String },
    #[error("monitor line {line}: {reason}")]
    Monitor { line: usize, reason: String },
    #[error(".aut line {line}: {reason}")]
    Aut { line: usize, reason: String },
}

/// Actions from the initial state to a distinguished state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace(pub Vec<Action>);

impl Trace {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Trace {
    /// Labels joined by `; `, or `<empty>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<empty>");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl Serialize for Trace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(ToString::to_string))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyResult {
    pub verdict: Verdict,
    pub evidence: Option<Trace>,
}

impl VerifyResult {
    pub(crate) fn holding(evidence: Option<Trace>) -> Self {
        VerifyResult {
            verdict: Verdict::Holds,
            evidence,
        }
    }

    pub(crate) fn failing(evidence: Option<Trace>) -> Self {
        VerifyResult {
            verdict: Verdict::Fails,
            evidence,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Walks parent links back from `end` and returns the labels in order.
pub(crate) fn trace_to<N: Copy + Eq + Hash>(lts: &Lts, end: N, parent: impl Fn(N) -> Option<(N, usize)>) -> Trace {
    let mut labels = Vec::new();
    let mut cur = end;
    while let Some((prev, label)) = parent(cur) {
        labels.push(lts.action(label).clone());
        cur = prev;
    }
    labels.reverse();
    Trace(labels)
}

/// States with at least one incoming transition, all of them `exit`.
fn terminated(lts: &Lts) -> Vec<bool> {
    let mut any = vec![false; lts.num_states()];
    let mut other = vec![false; lts.num_states()];
    for t in lts.transitions() {
        any[t.target] = true;
        if *lts.action(t.label) != Action::Terminate {
            other[t.target] = true;
        }
    }
    any.iter().zip(other).map(|(&a, o)| a && !o).collect()
}

/// Breadth-first search from the initial state for the first state
/// satisfying `goal`, in discovery order.
fn search(lts: &Lts, goal: impl Fn(usize) -> bool) -> Option<(usize, Trace)> {
    let mut parent: HashMap<usize, Option<(usize, usize)>> = HashMap::new();
    parent.insert(lts.initial(), None);
    let mut queue = VecDeque::from([lts.initial()]);
    while let Some(s) = queue.pop_front() {
        if goal(s) {
            return Some((s, trace_to(lts, s, |x| parent[&x])));
        }
        for t in lts.outgoing(s) {
            if let Entry::Vacant(e) = parent.entry(t.target) {
                e.insert(Some((s, t.label)));
                queue.push_back(t.target);
            }
        }
    }
    None
}

/// Fails iff a reachable state has no outgoing transitions and was not
/// entered exclusively through `exit`.
pub fn check_deadlock(lts: &Lts) -> VerifyResult {
    let done = terminated(lts);
    match search(lts, |s| lts.outgoing(s).is_empty() && !done[s]) {
        Some((_, trace)) => VerifyResult::failing(Some(trace)),
        None => VerifyResult::holding(None),
    }
}

/// Holds iff some reachable transition matches `p`. The witness ends with
/// the matching transition.
pub fn check_reachable(lts: &Lts, p: &LabelPattern) -> VerifyResult {
    let first = |s: usize| lts.outgoing(s).iter().find(|t| p.matches(lts.action(t.label)));
    match search(lts, |s| first(s).is_some()) {
        Some((s, mut trace)) => {
            trace.0.push(lts.action(first(s).unwrap().label).clone());
            VerifyResult::holding(Some(trace))
        }
        None => VerifyResult::failing(None),
    }
}
