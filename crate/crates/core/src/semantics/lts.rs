use std::fmt;

use serde::Serialize;

/// A concrete value offered at a gate, tagged with its sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Value {
    pub sort: String,
    pub name: String,
}

/// A transition label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Action {
    Internal,
    /// Successful termination, produced by `exit`.
    Terminate,
    Observable { gate: String, offers: Vec<Value> },
}

impl Action {
    pub fn gate(&self) -> Option<&str> {
        match self {
            Action::Observable { gate, .. } => Some(gate),
            _ => None,
        }
    }
}

impl fmt::Display for Action {
    /// Canonical rendering: `i`, `exit`, or `gate !v1 !v2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Internal => f.write_str("i"),
            Action::Terminate => f.write_str("exit"),
            Action::Observable { gate, offers } => {
                f.write_str(gate)?;
                for v in offers {
                    write!(f, " !{}", v.name)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Transition {
    pub source: usize,
    /// Index into [`Lts::labels`].
    pub label: usize,
    pub target: usize,
}

/// An explicit labelled transition system with initial state 0.
///
/// Transitions are grouped by source state; within a source they keep the
/// order they were given in, which for generated systems is the canonical
/// order (label text, then target).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    num_states: usize,
    labels: Vec<Action>,
    label_text: Vec<String>,
    transitions: Vec<Transition>,
    offsets: Vec<usize>,
}

impl Lts {
    /// Builds an LTS. Duplicate transitions are dropped.
    ///
    /// # Panics
    ///
    /// If `num_states` is zero or a transition refers to a missing state or
    /// label.
    pub fn new(num_states: usize, labels: Vec<Action>, mut transitions: Vec<Transition>) -> Self {
        assert!(num_states > 0, "an LTS has at least its initial state");
        for t in &transitions {
            assert!(t.source < num_states && t.target < num_states, "dangling transition {t:?}");
            assert!(t.label < labels.len(), "unknown label in {t:?}");
        }
        transitions.sort_by_key(|t| t.source);
        let mut seen = std::collections::HashSet::new();
        transitions.retain(|t| seen.insert(*t));
        let mut offsets = vec![0; num_states + 1];
        for t in &transitions {
            offsets[t.source + 1] += 1;
        }
        for i in 0..num_states {
            offsets[i + 1] += offsets[i];
        }
        let label_text = labels.iter().map(ToString::to_string).collect();
        Lts {
            num_states,
            labels,
            label_text,
            transitions,
            offsets,
        }
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, state: usize) -> &[Transition] {
        &self.transitions[self.offsets[state]..self.offsets[state + 1]]
    }

    pub fn labels(&self) -> &[Action] {
        &self.labels
    }

    pub fn action(&self, label: usize) -> &Action {
        &self.labels[label]
    }

    /// Canonical text of a label.
    pub fn label_text(&self, label: usize) -> &str {
        &self.label_text[label]
    }
}
