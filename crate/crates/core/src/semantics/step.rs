//! One-step derivation.

use std::collections::HashMap;
use std::sync::Arc;

use super::term::{mk_hide, subst_gates, subst_var, Act, GateId, Offer, Program, Term, Val, ValueId};
use super::SemanticsError;

/// Consecutive instantiation unfoldings allowed before an action must appear.
pub(crate) const UNFOLD_LIMIT: usize = 1000;

/// A concrete action over interned ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Step {
    Internal,
    Terminate,
    Obs(GateId, Vec<ValueId>),
}

pub(crate) type Steps = Vec<(Step, Arc<Term>)>;

impl Program {
    pub(crate) fn steps(&self, t: &Arc<Term>) -> Result<Steps, SemanticsError> {
        let mut out = Vec::new();
        self.derive(t, 0, &mut out)?;
        Ok(out)
    }

    fn derive(&self, t: &Arc<Term>, depth: usize, out: &mut Steps) -> Result<(), SemanticsError> {
        match &**t {
            Term::Stop => {}
            Term::Exit => out.push((Step::Terminate, Arc::new(Term::Stop))),
            Term::Prefix(act, rest) => self.prefix(act, rest, out)?,
            Term::Choice(l, r) => {
                self.derive(l, depth, out)?;
                self.derive(r, depth, out)?;
            }
            Term::Par(l, sync, r) => {
                let ls = self.steps_at(l, depth)?;
                let rs = self.steps_at(r, depth)?;
                let synced = |s: &Step| match s {
                    Step::Internal => false,
                    Step::Terminate => true,
                    Step::Obs(g, _) => sync.contains(*g),
                };
                for (a, l2) in &ls {
                    if !synced(a) {
                        out.push((a.clone(), Arc::new(Term::Par(l2.clone(), sync.clone(), r.clone()))));
                    }
                }
                for (a, r2) in &rs {
                    if !synced(a) {
                        out.push((a.clone(), Arc::new(Term::Par(l.clone(), sync.clone(), r2.clone()))));
                    }
                }
                for (a, l2) in ls.iter().filter(|(a, _)| synced(a)) {
                    for (_, r2) in rs.iter().filter(|(b, _)| b == a) {
                        out.push((a.clone(), Arc::new(Term::Par(l2.clone(), sync.clone(), r2.clone()))));
                    }
                }
            }
            Term::Hide(gates, body) => {
                for (a, b2) in self.steps_at(body, depth)? {
                    let a = match a {
                        Step::Obs(g, _) if gates.binary_search(&g).is_ok() => Step::Internal,
                        other => other,
                    };
                    out.push((a, mk_hide(gates.clone(), b2)));
                }
            }
            Term::Seq(l, r) => {
                for (a, l2) in self.steps_at(l, depth)? {
                    match a {
                        Step::Terminate => out.push((Step::Internal, r.clone())),
                        a => out.push((a, Arc::new(Term::Seq(l2, r.clone())))),
                    }
                }
            }
            Term::Disrupt(l, r) => {
                for (a, l2) in self.steps_at(l, depth)? {
                    match a {
                        Step::Terminate => out.push((Step::Terminate, l2)),
                        a => out.push((a, Arc::new(Term::Disrupt(l2, r.clone())))),
                    }
                }
                self.derive(r, depth, out)?;
            }
            Term::Inst(p, actual) => {
                let proc = &self.procs[*p as usize];
                if depth >= UNFOLD_LIMIT {
                    return Err(SemanticsError::UnguardedRecursion {
                        process: proc.name.clone(),
                    });
                }
                let map: HashMap<GateId, GateId> = proc.formals.iter().copied().zip(actual.iter().copied()).collect();
                let body = subst_gates(&proc.body, &map);
                self.derive(&body, depth + 1, out)?;
            }
        }
        Ok(())
    }

    fn steps_at(&self, t: &Arc<Term>, depth: usize) -> Result<Steps, SemanticsError> {
        let mut out = Vec::new();
        self.derive(t, depth, &mut out)?;
        Ok(out)
    }

    /// Expands receive offers over their sorts, in declaration order, leftmost
    /// offer varying slowest.
    fn prefix(&self, act: &Act, rest: &Arc<Term>, out: &mut Steps) -> Result<(), SemanticsError> {
        let (gate, offers) = match act {
            Act::Internal => {
                out.push((Step::Internal, rest.clone()));
                return Ok(());
            }
            Act::Comm { gate, offers } => (*gate, offers),
        };
        let mut partial: Vec<(Vec<ValueId>, Arc<Term>)> = vec![(Vec::new(), rest.clone())];
        for o in offers {
            let mut next = Vec::with_capacity(partial.len());
            for (vals, cont) in partial {
                match o {
                    Offer::Send(Val::Lit(v)) => {
                        let mut vals = vals;
                        vals.push(*v);
                        next.push((vals, cont));
                    }
                    Offer::Send(Val::Var(x)) => {
                        return Err(SemanticsError::Ill(format!(
                            "variable `{}` is not bound",
                            self.var_names[*x as usize]
                        )))
                    }
                    Offer::Recv(x, s) => {
                        for &v in &self.sort_values[*s as usize] {
                            let mut vs = vals.clone();
                            vs.push(v);
                            next.push((vs, subst_var(&cont, *x, v)));
                        }
                    }
                }
            }
            partial = next;
        }
        for (vals, cont) in partial {
            out.push((Step::Obs(gate, vals), cont));
        }
        Ok(())
    }
}
