//! Operational semantics and state-space exploration.
//!
//! A [`Specification`] is compiled into a [`Program`]; [`generate_lts`]
//! explores it breadth first into an [`Lts`].
//!
//! ```
//! use lotos_asc::semantics::{generate_lts, ExplorationBudget};
//! use lotos_asc::syntax::parse_spec;
//!
//! let spec = parse_spec("specification S [a, b] : noexit behaviour a; stop ||| b; stop endspec").unwrap();
//! let lts = generate_lts(&spec, ExplorationBudget::default()).unwrap();
//! assert_eq!((lts.num_states(), lts.num_transitions()), (4, 4));
//! ```

mod lts;
mod step;
mod term;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::Specification;

pub use lts::{Action, Lts, Transition, Value};
pub use term::Program;

use step::Step;
use term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExplorationBudget {
    pub max_states: usize,
    pub max_transitions: usize,
}

impl Default for ExplorationBudget {
    fn default() -> Self {
        ExplorationBudget {
            max_states: 100_000,
            max_transitions: 500_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("ill-formed specification: {0}")]
    Ill(String),
    #[error("unguarded recursion in process `{process}`")]
    UnguardedRecursion { process: String },
    #[error("gate `{gate}` hidden inside process `{process}` is passed back into it")]
    HiddenGateCapture { process: String, gate: String },
    #[error(
        "state-space bound exceeded: {states} states and {transitions} transitions found, \
         {frontier} states unexplored (budget {} states, {} transitions)",
        budget.max_states,
        budget.max_transitions
    )]
    BudgetExceeded {
        states: usize,
        transitions: usize,
        frontier: usize,
        budget: ExplorationBudget,
    },
}

/// A closed behavior reached during exploration. Equality is state identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateForm(Arc<Term>);

impl StateForm {
    /// Applies the simplifications used during exploration. Idempotent, and
    /// never changes the derivable steps.
    pub fn normalize(&self) -> StateForm {
        StateForm(term::normalize(&self.0))
    }
}

/// A [`StateForm`] rendered as behavior text.
pub struct Render<'a>(&'a Program, &'a StateForm);

impl fmt::Display for Render<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render(&self.1 .0))
    }
}

impl Program {
    pub fn initial(&self) -> StateForm {
        StateForm(term::normalize(&self.top))
    }

    /// All steps derivable from `state`, in canonical order (label text, then
    /// target) and without duplicates.
    pub fn successors(&self, state: &StateForm) -> Result<Vec<(Action, StateForm)>, SemanticsError> {
        let mut out: Vec<(String, Action, StateForm)> = self
            .steps(&state.0)?
            .into_iter()
            .map(|(s, t)| {
                let a = self.action(&s);
                (a.to_string(), a, StateForm(t))
            })
            .collect();
        out.sort_by(|x, y| (&x.0, &x.2).cmp(&(&y.0, &y.2)));
        out.dedup_by(|x, y| x.0 == y.0 && x.2 == y.2);
        Ok(out.into_iter().map(|(_, a, t)| (a, t)).collect())
    }

    pub fn display<'a>(&'a self, state: &'a StateForm) -> Render<'a> {
        Render(self, state)
    }

    fn action(&self, s: &Step) -> Action {
        match s {
            Step::Internal => Action::Internal,
            Step::Terminate => Action::Terminate,
            Step::Obs(g, vs) => Action::Observable {
                gate: self.gate_name(*g).to_string(),
                offers: vs
                    .iter()
                    .map(|v| Value {
                        sort: self.sort_names[self.value_sort[*v as usize] as usize].clone(),
                        name: self.value_name(*v).to_string(),
                    })
                    .collect(),
            },
        }
    }

    /// Breadth-first closure from the initial state. State ids follow
    /// discovery order.
    pub fn explore(&self, budget: ExplorationBudget) -> Result<Lts, SemanticsError> {
        let mut ids: HashMap<StateForm, usize> = HashMap::new();
        let mut queue: Vec<StateForm> = Vec::new();
        let mut label_ids: HashMap<String, usize> = HashMap::new();
        let mut labels: Vec<Action> = Vec::new();
        let mut transitions: Vec<Transition> = Vec::new();

        let init = self.initial();
        ids.insert(init.clone(), 0);
        queue.push(init);
        let mut head = 0;
        while head < queue.len() {
            let source = head;
            let succ = self.successors(&queue[head])?;
            head += 1;
            for (action, target) in succ {
                let next = ids.len();
                let target = *ids.entry(target.clone()).or_insert_with(|| {
                    queue.push(target);
                    next
                });
                let text = action.to_string();
                let label = *label_ids.entry(text).or_insert_with(|| {
                    labels.push(action);
                    labels.len() - 1
                });
                transitions.push(Transition { source, label, target });
                if ids.len() > budget.max_states || transitions.len() > budget.max_transitions {
                    return Err(SemanticsError::BudgetExceeded {
                        states: ids.len(),
                        transitions: transitions.len(),
                        frontier: queue.len() - head,
                        budget,
                    });
                }
            }
        }
        Ok(Lts::new(ids.len(), labels, transitions))
    }
}

/// Compiles `spec` and explores its state space.
pub fn generate_lts(spec: &Specification, budget: ExplorationBudget) -> Result<Lts, SemanticsError> {
    Program::compile(spec)?.explore(budget)
}
