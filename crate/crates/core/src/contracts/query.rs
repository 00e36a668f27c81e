//! Existential-conjunctive queries over a [`FactBase`].
//!
//! Evaluation is a depth-first join: conjuncts are matched left to right and
//! each conjunct scans its predicate's facts in argument order. Because the
//! fact base is sorted, the first satisfying assignment found is the
//! lexicographically least one when variables are ordered by first occurrence.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::facts::{parse_predicate_name, Fact, FactBase, Predicate};
use crate::syntax::lexer::Tok;
use crate::syntax::parser::{PResult, Parser};
use crate::syntax::{Code, Diagnostic};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Term {
    Var(String),
    Const(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Atom {
    pub predicate: Predicate,
    pub args: Vec<Term>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Query {
    pub exists_vars: Vec<String>,
    pub conjuncts: Vec<Atom>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("variable `{0}` is not existentially quantified")]
    FreeVariable(String),
    #[error("predicate `{predicate}` takes {expected} argument(s), {found} given")]
    Arity {
        predicate: Predicate,
        expected: usize,
        found: usize,
    },
}

impl Query {
    pub fn new(exists_vars: Vec<String>, conjuncts: Vec<Atom>) -> Result<Query, QueryError> {
        for a in &conjuncts {
            if a.args.len() != a.predicate.arity() {
                return Err(QueryError::Arity {
                    predicate: a.predicate,
                    expected: a.predicate.arity(),
                    found: a.args.len(),
                });
            }
            for t in &a.args {
                if let Term::Var(v) = t {
                    if !exists_vars.contains(v) {
                        return Err(QueryError::FreeVariable(v.clone()));
                    }
                }
            }
        }
        Ok(Query {
            exists_vars,
            conjuncts,
        })
    }

    /// Variables in the order the evaluator binds them: first occurrence in
    /// the conjuncts, then quantified-but-unused variables.
    pub fn binding_order(&self) -> Vec<&str> {
        let mut order: Vec<&str> = Vec::new();
        for a in &self.conjuncts {
            for t in &a.args {
                if let Term::Var(v) = t {
                    if !order.contains(&v.as_str()) {
                        order.push(v);
                    }
                }
            }
        }
        for v in &self.exists_vars {
            if !order.contains(&v.as_str()) {
                order.push(v);
            }
        }
        order
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.exists_vars.is_empty() {
            write!(f, "exists {} : ", self.exists_vars.join(", "))?;
        }
        for (i, a) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            let args: Vec<&str> = a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(s) | Term::Const(s) => s.as_str(),
                })
                .collect();
            write!(f, "{}({})", a.predicate, args.join(", "))?;
        }
        Ok(())
    }
}

/// Variable assignment, listed in `exists_vars` order.
pub type Binding = Vec<(String, String)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum QueryResult {
    Holds(Binding),
    Fails,
}

impl QueryResult {
    pub fn holds(&self) -> bool {
        matches!(self, QueryResult::Holds(_))
    }
}

pub fn eval_query(base: &FactBase, q: &Query) -> QueryResult {
    let mut env: Vec<(String, String)> = Vec::new();
    if !join(base, &q.conjuncts, &mut env) {
        return QueryResult::Fails;
    }
    // Quantified variables no conjunct mentions range over the whole universe.
    let unused: Vec<&String> = q
        .exists_vars
        .iter()
        .filter(|v| !env.iter().any(|(x, _)| x == *v))
        .collect();
    if !unused.is_empty() {
        let Some(first) = base.universe().into_iter().next().map(str::to_string) else {
            return QueryResult::Fails;
        };
        for v in unused {
            env.push((v.clone(), first.clone()));
        }
    }
    let binding = q
        .exists_vars
        .iter()
        .map(|v| {
            let t = env.iter().find(|(x, _)| x == v).map(|(_, t)| t.clone());
            (v.clone(), t.unwrap_or_default())
        })
        .collect();
    QueryResult::Holds(binding)
}

fn join(base: &FactBase, conjuncts: &[Atom], env: &mut Vec<(String, String)>) -> bool {
    let Some((atom, rest)) = conjuncts.split_first() else {
        return true;
    };
    for fact in base.with_predicate(atom.predicate) {
        let mark = env.len();
        if unify(atom, fact, env) && join(base, rest, env) {
            return true;
        }
        env.truncate(mark);
    }
    false
}

fn unify(atom: &Atom, fact: &Fact, env: &mut Vec<(String, String)>) -> bool {
    for (t, g) in atom.args.iter().zip(&fact.args) {
        match t {
            Term::Const(c) => {
                if c != g {
                    return false;
                }
            }
            Term::Var(v) => match env.iter().find(|(x, _)| x == v) {
                Some((_, bound)) => {
                    if bound != g {
                        return false;
                    }
                }
                None => env.push((v.clone(), g.clone())),
            },
        }
    }
    true
}

/// `exists x, y : p(x) and q(x, y)`; the quantifier prefix is optional and
/// `∃` / `∧` may be used in place of the keywords.
pub(crate) fn parse_query(p: &mut Parser, terminator: &Tok) -> PResult<Query> {
    let mut vars = Vec::new();
    if p.eat_kw("exists") || p.eat(&Tok::Exists) {
        vars.push(p.any_ident("variable")?.0);
        while p.eat(&Tok::Comma) {
            vars.push(p.any_ident("variable")?.0);
        }
        if !(p.eat(&Tok::Colon) || p.eat(&Tok::Dot)) {
            let found = p.peek().clone();
            return p.error(format!("expected `:` after quantified variables, found {found}"));
        }
    }
    let mut conjuncts = Vec::new();
    if p.at(terminator) {
        return Ok(Query {
            exists_vars: vars,
            conjuncts,
        });
    }
    loop {
        let start = p.span();
        let predicate = parse_predicate_name(p)?;
        p.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        loop {
            let (name, _) = p.any_ident("term")?;
            args.push(if vars.contains(&name) {
                Term::Var(name)
            } else {
                Term::Const(name)
            });
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
        p.expect(&Tok::RParen)?;
        if args.len() != predicate.arity() {
            p.diags.push(Diagnostic::error(
                Code::PredicateArity,
                start.to(p.prev_span()),
                format!(
                    "predicate `{predicate}` takes {} argument(s), {} given",
                    predicate.arity(),
                    args.len()
                ),
            ));
            return Err(());
        }
        conjuncts.push(Atom { predicate, args });
        if !(p.eat_kw("and") || p.eat(&Tok::Wedge)) {
            break;
        }
    }
    Ok(Query {
        exists_vars: vars,
        conjuncts,
    })
}
