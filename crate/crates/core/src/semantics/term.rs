//! Closed behavior terms over interned names.
//!
//! Gates, values, sorts, variables and processes are interned to small
//! integers. Every `hide` occurrence gets gate ids of its own (displayed with
//! the source name), so substituting actual gates for formals can never be
//! captured by a hide inside the body. The one way to defeat this, passing a
//! process's own hidden gate back into it through recursion, is rejected at
//! compile time.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;
use std::sync::Arc;

use crate::syntax::ast::{ActionExpr, BehaviorExpr, OfferExpr, Specification, SyncSet, ValueExpr};

use super::SemanticsError;

pub(crate) type GateId = u32;
pub(crate) type ValueId = u32;
pub(crate) type SortId = u32;
pub(crate) type VarId = u32;
pub(crate) type ProcId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Val {
    Lit(ValueId),
    Var(VarId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Offer {
    Send(Val),
    Recv(VarId, SortId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Act {
    Internal,
    Comm { gate: GateId, offers: Vec<Offer> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Sync {
    None,
    Full,
    /// Sorted, duplicate-free.
    Gates(Vec<GateId>),
}

impl Sync {
    pub fn contains(&self, g: GateId) -> bool {
        match self {
            Sync::None => false,
            Sync::Full => true,
            Sync::Gates(gs) => gs.binary_search(&g).is_ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Term {
    Stop,
    Exit,
    Prefix(Act, Arc<Term>),
    Choice(Arc<Term>, Arc<Term>),
    Par(Arc<Term>, Sync, Arc<Term>),
    /// Hidden gates are sorted and duplicate-free.
    Hide(Vec<GateId>, Arc<Term>),
    Seq(Arc<Term>, Arc<Term>),
    Disrupt(Arc<Term>, Arc<Term>),
    Inst(ProcId, Vec<GateId>),
}

/// Hide with local simplification: hiding over a terminated or dead term is
/// dropped and nested hides are merged. Neither changes the derivable steps.
pub(crate) fn mk_hide(gates: Vec<GateId>, body: Arc<Term>) -> Arc<Term> {
    match &*body {
        Term::Stop | Term::Exit => body,
        Term::Hide(inner, b) => {
            let merged: BTreeSet<GateId> = gates.iter().chain(inner.iter()).copied().collect();
            Arc::new(Term::Hide(merged.into_iter().collect(), b.clone()))
        }
        _ if gates.is_empty() => body,
        _ => Arc::new(Term::Hide(gates, body)),
    }
}

/// Rebuilds `t` bottom-up through the simplifying constructors.
pub(crate) fn normalize(t: &Arc<Term>) -> Arc<Term> {
    match &**t {
        Term::Stop | Term::Exit | Term::Inst(..) => t.clone(),
        Term::Prefix(a, b) => Arc::new(Term::Prefix(a.clone(), normalize(b))),
        Term::Choice(l, r) => Arc::new(Term::Choice(normalize(l), normalize(r))),
        Term::Par(l, s, r) => Arc::new(Term::Par(normalize(l), s.clone(), normalize(r))),
        Term::Hide(g, b) => mk_hide(g.clone(), normalize(b)),
        Term::Seq(l, r) => Arc::new(Term::Seq(normalize(l), normalize(r))),
        Term::Disrupt(l, r) => Arc::new(Term::Disrupt(normalize(l), normalize(r))),
    }
}

pub(crate) struct Proc {
    pub name: String,
    pub formals: Vec<GateId>,
    pub body: Arc<Term>,
}

/// A specification compiled for stepping.
pub struct Program {
    pub(crate) gate_names: Vec<String>,
    pub(crate) sort_names: Vec<String>,
    pub(crate) sort_values: Vec<Vec<ValueId>>,
    pub(crate) value_names: Vec<String>,
    pub(crate) value_sort: Vec<SortId>,
    pub(crate) var_names: Vec<String>,
    pub(crate) procs: Vec<Proc>,
    pub(crate) top: Arc<Term>,
}

struct Compiler<'a> {
    spec: &'a Specification,
    free_gates: HashMap<String, GateId>,
    gate_names: Vec<String>,
    vars: HashMap<String, VarId>,
    var_names: Vec<String>,
    values: HashMap<&'a str, ValueId>,
    sorts: HashMap<&'a str, SortId>,
    procs: HashMap<&'a str, ProcId>,
}

impl<'a> Compiler<'a> {
    fn free_gate(&mut self, name: &str) -> GateId {
        if let Some(&g) = self.free_gates.get(name) {
            return g;
        }
        let g = self.gate_names.len() as GateId;
        self.gate_names.push(name.to_string());
        self.free_gates.insert(name.to_string(), g);
        g
    }

    fn fresh_gate(&mut self, name: &str) -> GateId {
        let g = self.gate_names.len() as GateId;
        self.gate_names.push(name.to_string());
        g
    }

    fn var(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.vars.get(name) {
            return v;
        }
        let v = self.var_names.len() as VarId;
        self.var_names.push(name.to_string());
        self.vars.insert(name.to_string(), v);
        v
    }

    /// `scope` maps names of hide-bound gates currently in scope, innermost last.
    fn gate(&mut self, name: &str, scope: &[(String, GateId)]) -> GateId {
        match scope.iter().rev().find(|(n, _)| n == name) {
            Some(&(_, g)) => g,
            None => self.free_gate(name),
        }
    }

    fn term(
        &mut self,
        b: &BehaviorExpr,
        scope: &mut Vec<(String, GateId)>,
    ) -> Result<Arc<Term>, SemanticsError> {
        Ok(match b {
            BehaviorExpr::Stop => Arc::new(Term::Stop),
            BehaviorExpr::Exit => Arc::new(Term::Exit),
            BehaviorExpr::Prefix { action, rest, .. } => {
                let act = match action {
                    ActionExpr::Internal => Act::Internal,
                    ActionExpr::Comm { gate, offers } => {
                        let gate = self.gate(gate, scope);
                        let mut out = Vec::with_capacity(offers.len());
                        for o in offers {
                            out.push(match o {
                                OfferExpr::Send(ValueExpr::Literal(v)) => {
                                    let id = *self
                                        .values
                                        .get(v.as_str())
                                        .ok_or_else(|| SemanticsError::Ill(format!("undeclared value `{v}`")))?;
                                    Offer::Send(Val::Lit(id))
                                }
                                OfferExpr::Send(ValueExpr::Var(x)) => Offer::Send(Val::Var(self.var(x))),
                                OfferExpr::Receive { var, sort } => {
                                    let s = *self
                                        .sorts
                                        .get(sort.as_str())
                                        .ok_or_else(|| SemanticsError::Ill(format!("undeclared sort `{sort}`")))?;
                                    Offer::Recv(self.var(var), s)
                                }
                            });
                        }
                        Act::Comm { gate, offers: out }
                    }
                };
                Arc::new(Term::Prefix(act, self.term(rest, scope)?))
            }
            BehaviorExpr::Choice(l, r) => Arc::new(Term::Choice(self.term(l, scope)?, self.term(r, scope)?)),
            BehaviorExpr::Seq(l, r) => Arc::new(Term::Seq(self.term(l, scope)?, self.term(r, scope)?)),
            BehaviorExpr::Disrupt(l, r) => Arc::new(Term::Disrupt(self.term(l, scope)?, self.term(r, scope)?)),
            BehaviorExpr::Par { left, sync, right, .. } => {
                let sync = match sync {
                    SyncSet::None => Sync::None,
                    SyncSet::Full => Sync::Full,
                    SyncSet::Gates(gs) => {
                        let set: BTreeSet<GateId> = gs.iter().map(|g| self.gate(g, scope)).collect();
                        Sync::Gates(set.into_iter().collect())
                    }
                };
                Arc::new(Term::Par(self.term(left, scope)?, sync, self.term(right, scope)?))
            }
            BehaviorExpr::Hide { gates, body, .. } => {
                let before = scope.len();
                let mut ids = BTreeSet::new();
                for g in gates {
                    let id = self.fresh_gate(g);
                    scope.push((g.clone(), id));
                    ids.insert(id);
                }
                let body = self.term(body, scope);
                scope.truncate(before);
                mk_hide(ids.into_iter().collect(), body?)
            }
            BehaviorExpr::Inst { process, gates, .. } => {
                let p = *self
                    .procs
                    .get(process.as_str())
                    .ok_or_else(|| SemanticsError::Ill(format!("unknown process `{process}`")))?;
                let def = &self.spec.processes[p as usize];
                if def.formal_gates.len() != gates.len() {
                    return Err(SemanticsError::Ill(format!(
                        "process `{process}` expects {} gate(s), {} given",
                        def.formal_gates.len(),
                        gates.len()
                    )));
                }
                let actual = gates.iter().map(|g| self.gate(g, scope)).collect();
                Arc::new(Term::Inst(p, actual))
            }
        })
    }
}

impl Program {
    /// Compiles `spec`. The specification is expected to be well formed
    /// (see [`crate::syntax::validate_spec`]); remaining resolution failures
    /// are reported as [`SemanticsError::Ill`].
    pub fn compile(spec: &Specification) -> Result<Program, SemanticsError> {
        let mut value_names = Vec::new();
        let mut value_sort = Vec::new();
        let mut sort_values = Vec::new();
        let mut values = HashMap::new();
        let mut sorts = HashMap::new();
        for (si, s) in spec.sorts.iter().enumerate() {
            sorts.insert(s.name.as_str(), si as SortId);
            let mut ids = Vec::new();
            for v in &s.values {
                let id = *values.entry(v.as_str()).or_insert_with(|| {
                    value_names.push(v.clone());
                    value_sort.push(si as SortId);
                    (value_names.len() - 1) as ValueId
                });
                ids.push(id);
            }
            sort_values.push(ids);
        }
        let procs: HashMap<&str, ProcId> = spec
            .processes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.as_str(), i as ProcId))
            .collect();
        let mut c = Compiler {
            spec,
            free_gates: HashMap::new(),
            gate_names: Vec::new(),
            vars: HashMap::new(),
            var_names: Vec::new(),
            values,
            sorts,
            procs,
        };
        for g in &spec.top_gates {
            c.free_gate(g);
        }
        let mut compiled = Vec::new();
        for p in &spec.processes {
            let formals: Vec<GateId> = p.formal_gates.iter().map(|g| c.free_gate(g)).collect();
            let body = c.term(&p.body, &mut Vec::new())?;
            compiled.push(Proc {
                name: p.name.clone(),
                formals,
                body,
            });
        }
        let top = c.term(&spec.top_behavior, &mut Vec::new())?;
        let program = Program {
            gate_names: c.gate_names,
            sort_names: spec.sorts.iter().map(|s| s.name.clone()).collect(),
            sort_values,
            value_names,
            value_sort,
            var_names: c.var_names,
            procs: compiled,
            top,
        };
        program.check_recursion()?;
        program.check_capture()?;
        Ok(program)
    }

    /// Processes instantiated anywhere inside `t`.
    fn calls(t: &Term, guarded_too: bool, out: &mut BTreeSet<ProcId>) {
        match t {
            Term::Stop | Term::Exit => {}
            Term::Prefix(_, b) => {
                if guarded_too {
                    Self::calls(b, guarded_too, out)
                }
            }
            Term::Seq(l, r) => {
                Self::calls(l, guarded_too, out);
                if guarded_too {
                    Self::calls(r, guarded_too, out)
                }
            }
            Term::Choice(l, r) | Term::Disrupt(l, r) | Term::Par(l, _, r) => {
                Self::calls(l, guarded_too, out);
                Self::calls(r, guarded_too, out);
            }
            Term::Hide(_, b) => Self::calls(b, guarded_too, out),
            Term::Inst(p, _) => {
                out.insert(*p);
            }
        }
    }

    fn reachable_procs(&self) -> BTreeSet<ProcId> {
        let mut seen = BTreeSet::new();
        let mut todo = BTreeSet::new();
        Self::calls(&self.top, true, &mut todo);
        while let Some(p) = todo.pop_first() {
            if seen.insert(p) {
                Self::calls(&self.procs[p as usize].body, true, &mut todo);
            }
        }
        seen
    }

    /// Rejects instantiation cycles that pass through no action prefix and no
    /// `>>` right operand: stepping such a process would unfold forever.
    fn check_recursion(&self) -> Result<(), SemanticsError> {
        let unguarded: Vec<BTreeSet<ProcId>> = self
            .procs
            .iter()
            .map(|p| {
                let mut s = BTreeSet::new();
                Self::calls(&p.body, false, &mut s);
                s
            })
            .collect();
        for p in self.reachable_procs() {
            // Depth-first search for a path back to p.
            let mut stack: Vec<ProcId> = unguarded[p as usize].iter().copied().collect();
            let mut seen = BTreeSet::new();
            while let Some(q) = stack.pop() {
                if q == p {
                    return Err(SemanticsError::UnguardedRecursion {
                        process: self.procs[p as usize].name.clone(),
                    });
                }
                if seen.insert(q) {
                    stack.extend(unguarded[q as usize].iter().copied());
                }
            }
        }
        Ok(())
    }

    fn hides(t: &Term, out: &mut BTreeSet<GateId>) {
        match t {
            Term::Stop | Term::Exit | Term::Inst(..) => {}
            Term::Prefix(_, b) => Self::hides(b, out),
            Term::Hide(g, b) => {
                out.extend(g.iter().copied());
                Self::hides(b, out)
            }
            Term::Choice(l, r) | Term::Seq(l, r) | Term::Disrupt(l, r) | Term::Par(l, _, r) => {
                Self::hides(l, out);
                Self::hides(r, out);
            }
        }
    }

    fn insts<'t>(t: &'t Term, out: &mut Vec<(ProcId, &'t [GateId])>) {
        match t {
            Term::Stop | Term::Exit => {}
            Term::Inst(p, g) => out.push((*p, g)),
            Term::Prefix(_, b) | Term::Hide(_, b) => Self::insts(b, out),
            Term::Choice(l, r) | Term::Seq(l, r) | Term::Disrupt(l, r) | Term::Par(l, _, r) => {
                Self::insts(l, out);
                Self::insts(r, out);
            }
        }
    }

    fn check_capture(&self) -> Result<(), SemanticsError> {
        // Hide ids reachable from each process through instantiation.
        let n = self.procs.len();
        let mut reach: Vec<BTreeSet<GateId>> = Vec::with_capacity(n);
        for p in 0..n {
            let mut procs = BTreeSet::new();
            let mut todo = vec![p as ProcId];
            let mut gates = BTreeSet::new();
            while let Some(q) = todo.pop() {
                if procs.insert(q) {
                    Self::hides(&self.procs[q as usize].body, &mut gates);
                    let mut cs = BTreeSet::new();
                    Self::calls(&self.procs[q as usize].body, true, &mut cs);
                    todo.extend(cs);
                }
            }
            reach.push(gates);
        }
        let mut sites = Vec::new();
        Self::insts(&self.top, &mut sites);
        for p in &self.procs {
            Self::insts(&p.body, &mut sites);
        }
        for (q, actual) in sites {
            if let Some(g) = actual.iter().find(|g| reach[q as usize].contains(g)) {
                return Err(SemanticsError::HiddenGateCapture {
                    process: self.procs[q as usize].name.clone(),
                    gate: self.gate_names[*g as usize].clone(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn value_name(&self, v: ValueId) -> &str {
        &self.value_names[v as usize]
    }

    pub(crate) fn gate_name(&self, g: GateId) -> &str {
        &self.gate_names[g as usize]
    }

    pub(crate) fn render(&self, t: &Term) -> String {
        let mut s = String::new();
        self.render_into(&mut s, t, 0);
        s
    }

    fn render_into(&self, out: &mut String, t: &Term, min: u8) {
        let lvl = match t {
            Term::Hide(..) => 0,
            Term::Seq(..) => 1,
            Term::Disrupt(..) => 2,
            Term::Par(..) => 3,
            Term::Choice(..) => 4,
            Term::Prefix(..) => 5,
            _ => 6,
        };
        if lvl < min {
            out.push('(');
        }
        let gates = |gs: &[GateId]| gs.iter().map(|g| self.gate_name(*g)).collect::<Vec<_>>().join(", ");
        match t {
            Term::Stop => out.push_str("stop"),
            Term::Exit => out.push_str("exit"),
            Term::Inst(p, gs) => {
                out.push_str(&self.procs[*p as usize].name);
                if !gs.is_empty() {
                    let _ = write!(out, " [{}]", gates(gs));
                }
            }
            Term::Prefix(a, b) => {
                match a {
                    Act::Internal => out.push('i'),
                    Act::Comm { gate, offers } => {
                        out.push_str(self.gate_name(*gate));
                        for o in offers {
                            match o {
                                Offer::Send(Val::Lit(v)) => {
                                    let _ = write!(out, " !{}", self.value_name(*v));
                                }
                                Offer::Send(Val::Var(x)) => {
                                    let _ = write!(out, " !{}", self.var_names[*x as usize]);
                                }
                                Offer::Recv(x, s) => {
                                    let _ = write!(
                                        out,
                                        " ?{}:{}",
                                        self.var_names[*x as usize], self.sort_names[*s as usize]
                                    );
                                }
                            }
                        }
                    }
                }
                out.push_str("; ");
                self.render_into(out, b, 5);
            }
            Term::Choice(l, r) => self.binary(out, l, " [] ", r, 4),
            Term::Seq(l, r) => self.binary(out, l, " >> ", r, 1),
            Term::Disrupt(l, r) => self.binary(out, l, " [> ", r, 2),
            Term::Par(l, s, r) => {
                let op = match s {
                    Sync::None => " ||| ".to_string(),
                    Sync::Full => " || ".to_string(),
                    Sync::Gates(gs) => format!(" |[{}]| ", gates(gs)),
                };
                self.binary(out, l, &op, r, 3);
            }
            Term::Hide(gs, b) => {
                let _ = write!(out, "hide {} in ", gates(gs));
                self.render_into(out, b, 0);
            }
        }
        if lvl < min {
            out.push(')');
        }
    }

    fn binary(&self, out: &mut String, l: &Term, op: &str, r: &Term, lvl: u8) {
        self.render_into(out, l, lvl);
        out.push_str(op);
        self.render_into(out, r, lvl + 1);
    }
}

/// Replaces gates in `t` through `map` (formal to actual).
pub(crate) fn subst_gates(t: &Arc<Term>, map: &HashMap<GateId, GateId>) -> Arc<Term> {
    let g = |x: &GateId| *map.get(x).unwrap_or(x);
    match &**t {
        Term::Stop | Term::Exit => t.clone(),
        Term::Prefix(a, b) => {
            let a = match a {
                Act::Internal => Act::Internal,
                Act::Comm { gate, offers } => Act::Comm {
                    gate: g(gate),
                    offers: offers.clone(),
                },
            };
            Arc::new(Term::Prefix(a, subst_gates(b, map)))
        }
        Term::Choice(l, r) => Arc::new(Term::Choice(subst_gates(l, map), subst_gates(r, map))),
        Term::Seq(l, r) => Arc::new(Term::Seq(subst_gates(l, map), subst_gates(r, map))),
        Term::Disrupt(l, r) => Arc::new(Term::Disrupt(subst_gates(l, map), subst_gates(r, map))),
        Term::Par(l, s, r) => {
            let s = match s {
                Sync::Gates(gs) => {
                    let set: BTreeSet<GateId> = gs.iter().map(g).collect();
                    Sync::Gates(set.into_iter().collect())
                }
                other => other.clone(),
            };
            Arc::new(Term::Par(subst_gates(l, map), s, subst_gates(r, map)))
        }
        Term::Hide(gs, b) => Arc::new(Term::Hide(gs.clone(), subst_gates(b, map))),
        Term::Inst(p, gs) => Arc::new(Term::Inst(*p, gs.iter().map(g).collect())),
    }
}

/// Replaces free occurrences of variable `x` in `t` by value `v`.
pub(crate) fn subst_var(t: &Arc<Term>, x: VarId, v: ValueId) -> Arc<Term> {
    match &**t {
        Term::Stop | Term::Exit | Term::Inst(..) => t.clone(),
        Term::Prefix(a, b) => {
            let (a, rebinds) = match a {
                Act::Internal => (Act::Internal, false),
                Act::Comm { gate, offers } => {
                    let mut rebinds = false;
                    let offers = offers
                        .iter()
                        .map(|o| match o {
                            Offer::Send(Val::Var(y)) if *y == x => Offer::Send(Val::Lit(v)),
                            Offer::Recv(y, _) => {
                                rebinds |= *y == x;
                                o.clone()
                            }
                            _ => o.clone(),
                        })
                        .collect();
                    (Act::Comm { gate: *gate, offers }, rebinds)
                }
            };
            let b = if rebinds { b.clone() } else { subst_var(b, x, v) };
            Arc::new(Term::Prefix(a, b))
        }
        Term::Choice(l, r) => Arc::new(Term::Choice(subst_var(l, x, v), subst_var(r, x, v))),
        Term::Seq(l, r) => Arc::new(Term::Seq(subst_var(l, x, v), subst_var(r, x, v))),
        Term::Disrupt(l, r) => Arc::new(Term::Disrupt(subst_var(l, x, v), subst_var(r, x, v))),
        Term::Par(l, s, r) => Arc::new(Term::Par(subst_var(l, x, v), s.clone(), subst_var(r, x, v))),
        Term::Hide(gs, b) => Arc::new(Term::Hide(gs.clone(), subst_var(b, x, v))),
    }
}
