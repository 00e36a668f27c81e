//! Abstract syntax of Basic LOTOS with finite-sort value offers.

use super::diag::Loc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functionality {
    NoExit,
    Exit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specification {
    pub name: String,
    pub top_gates: Vec<String>,
    pub functionality: Functionality,
    pub sorts: Vec<SortDecl>,
    pub processes: Vec<ProcessDef>,
    pub top_behavior: BehaviorExpr,
    pub loc: Loc,
}

impl Specification {
    pub fn process(&self, name: &str) -> Option<&ProcessDef> {
        self.processes.iter().find(|p| p.name == name)
    }

    pub fn sort(&self, name: &str) -> Option<&SortDecl> {
        self.sorts.iter().find(|s| s.name == name)
    }

    /// The sort declaring value `value`, if any.
    pub fn sort_of_value(&self, value: &str) -> Option<&SortDecl> {
        self.sorts
            .iter()
            .find(|s| s.values.iter().any(|v| v == value))
    }
}

/// A finite enumerated sort: `RESULT = {r1, r2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortDecl {
    pub name: String,
    pub values: Vec<String>,
    pub loc: Loc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessDef {
    pub name: String,
    pub formal_gates: Vec<String>,
    pub functionality: Functionality,
    pub body: BehaviorExpr,
    pub loc: Loc,
}

/// Synchronization set of a parallel composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SyncSet {
    /// `|||`
    None,
    /// `||`
    Full,
    /// `|[g1, ..., gn]|`
    Gates(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BehaviorExpr {
    Stop,
    Exit,
    Prefix {
        action: ActionExpr,
        rest: Box<BehaviorExpr>,
        loc: Loc,
    },
    Choice(Box<BehaviorExpr>, Box<BehaviorExpr>),
    Par {
        left: Box<BehaviorExpr>,
        sync: SyncSet,
        right: Box<BehaviorExpr>,
        loc: Loc,
    },
    Hide {
        gates: Vec<String>,
        body: Box<BehaviorExpr>,
        loc: Loc,
    },
    /// `left >> right`
    Seq(Box<BehaviorExpr>, Box<BehaviorExpr>),
    /// `left [> right`
    Disrupt(Box<BehaviorExpr>, Box<BehaviorExpr>),
    Inst {
        process: String,
        gates: Vec<String>,
        loc: Loc,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ActionExpr {
    /// The unobservable action `i`.
    Internal,
    Comm { gate: String, offers: Vec<OfferExpr> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OfferExpr {
    /// `!e`
    Send(ValueExpr),
    /// `?x:S`
    Receive { var: String, sort: String },
}

/// Operand of a send offer. The parser resolves a bare identifier to a
/// variable when a receive on the current path binds it, and to a literal
/// otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValueExpr {
    Literal(String),
    Var(String),
}

impl ValueExpr {
    pub fn name(&self) -> &str {
        match self {
            ValueExpr::Literal(s) | ValueExpr::Var(s) => s,
        }
    }
}

// Convenience constructors, mostly for tests and programmatic construction.
impl BehaviorExpr {
    pub fn prefix(action: ActionExpr, rest: BehaviorExpr) -> Self {
        BehaviorExpr::Prefix {
            action,
            rest: Box::new(rest),
            loc: Loc::default(),
        }
    }

    /// `g; rest` with no offers.
    pub fn gate(gate: &str, rest: BehaviorExpr) -> Self {
        Self::prefix(ActionExpr::gate(gate), rest)
    }

    pub fn internal(rest: BehaviorExpr) -> Self {
        Self::prefix(ActionExpr::Internal, rest)
    }

    pub fn choice(left: BehaviorExpr, right: BehaviorExpr) -> Self {
        BehaviorExpr::Choice(Box::new(left), Box::new(right))
    }

    pub fn par(left: BehaviorExpr, sync: SyncSet, right: BehaviorExpr) -> Self {
        BehaviorExpr::Par {
            left: Box::new(left),
            sync,
            right: Box::new(right),
            loc: Loc::default(),
        }
    }

    pub fn hide(gates: &[&str], body: BehaviorExpr) -> Self {
        BehaviorExpr::Hide {
            gates: gates.iter().map(|g| g.to_string()).collect(),
            body: Box::new(body),
            loc: Loc::default(),
        }
    }

    pub fn seq(left: BehaviorExpr, right: BehaviorExpr) -> Self {
        BehaviorExpr::Seq(Box::new(left), Box::new(right))
    }

    pub fn disrupt(left: BehaviorExpr, right: BehaviorExpr) -> Self {
        BehaviorExpr::Disrupt(Box::new(left), Box::new(right))
    }

    pub fn inst(process: &str, gates: &[&str]) -> Self {
        BehaviorExpr::Inst {
            process: process.to_string(),
            gates: gates.iter().map(|g| g.to_string()).collect(),
            loc: Loc::default(),
        }
    }

    /// A copy of this expression with every `hide` removed, exposing the
    /// formerly hidden gates.
    pub fn without_hiding(&self) -> BehaviorExpr {
        use BehaviorExpr::*;
        match self {
            Stop => Stop,
            Exit => Exit,
            Prefix { action, rest, loc } => Prefix {
                action: action.clone(),
                rest: Box::new(rest.without_hiding()),
                loc: *loc,
            },
            Choice(l, r) => Choice(Box::new(l.without_hiding()), Box::new(r.without_hiding())),
            Par {
                left,
                sync,
                right,
                loc,
            } => Par {
                left: Box::new(left.without_hiding()),
                sync: sync.clone(),
                right: Box::new(right.without_hiding()),
                loc: *loc,
            },
            Hide { body, .. } => body.without_hiding(),
            Seq(l, r) => Seq(Box::new(l.without_hiding()), Box::new(r.without_hiding())),
            Disrupt(l, r) => Disrupt(Box::new(l.without_hiding()), Box::new(r.without_hiding())),
            Inst { .. } => self.clone(),
        }
    }
}

impl ActionExpr {
    pub fn gate(gate: &str) -> Self {
        ActionExpr::Comm {
            gate: gate.to_string(),
            offers: Vec::new(),
        }
    }
}

impl Specification {
    /// Strips every `hide` from the top behavior and all process bodies.
    pub fn without_hiding(&self) -> Specification {
        let mut spec = self.clone();
        spec.top_behavior = spec.top_behavior.without_hiding();
        for p in &mut spec.processes {
            p.body = p.body.without_hiding();
        }
        spec
    }
}
