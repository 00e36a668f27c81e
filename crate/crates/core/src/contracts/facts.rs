//! Entity and relationship predicates describing pattern participants, and
//! the `.facts` file format (`pred(arg1, arg2).`, `#` line comments).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::lexer::{LexOptions, Tok};
use crate::syntax::parser::{PResult, Parser};
use crate::syntax::{Code, Diagnostic};

/// The closed predicate vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "&'static str")]
pub enum Predicate {
    AbstractClass,
    AbstractAspect,
    Class,
    Aspect,
    Inherit,
    Associate,
    Aggregate,
    Invoke,
    New,
    Return,
    DeclareParent,
    Call,
    Advice,
}

impl Predicate {
    pub const ALL: [Predicate; 13] = [
        Predicate::AbstractClass,
        Predicate::AbstractAspect,
        Predicate::Class,
        Predicate::Aspect,
        Predicate::Inherit,
        Predicate::Associate,
        Predicate::Aggregate,
        Predicate::Invoke,
        Predicate::New,
        Predicate::Return,
        Predicate::DeclareParent,
        Predicate::Call,
        Predicate::Advice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::AbstractClass => "abstract_class",
            Predicate::AbstractAspect => "abstract_aspect",
            Predicate::Class => "class",
            Predicate::Aspect => "aspect",
            Predicate::Inherit => "inherit",
            Predicate::Associate => "associate",
            Predicate::Aggregate => "aggregate",
            Predicate::Invoke => "invoke",
            Predicate::New => "new",
            Predicate::Return => "return",
            Predicate::DeclareParent => "declare_parent",
            Predicate::Call => "call",
            Predicate::Advice => "advice",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Predicate::AbstractClass | Predicate::AbstractAspect | Predicate::Class | Predicate::Aspect => 1,
            Predicate::Inherit | Predicate::Associate | Predicate::Aggregate => 2,
            Predicate::New
            | Predicate::Return
            | Predicate::DeclareParent
            | Predicate::Call
            | Predicate::Advice => 3,
            Predicate::Invoke => 4,
        }
    }
}

impl From<Predicate> for &'static str {
    fn from(p: Predicate) -> Self {
        p.name()
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{predicate}` takes {expected} argument(s), {found} given")]
    Arity {
        predicate: Predicate,
        expected: usize,
        found: usize,
    },
}

impl FromStr for Predicate {
    type Err = FactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| FactError::UnknownPredicate(s.to_string()))
    }
}

/// A ground atom, e.g. `inherit(Subject, ConcreteSubject)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fact {
    pub predicate: Predicate,
    pub args: Vec<String>,
}

impl Fact {
    pub fn new<S: Into<String>>(
        predicate: Predicate,
        args: impl IntoIterator<Item = S>,
    ) -> Result<Fact, FactError> {
        let args: Vec<String> = args.into_iter().map(Into::into).collect();
        if args.len() != predicate.arity() {
            return Err(FactError::Arity {
                predicate,
                expected: predicate.arity(),
                found: args.len(),
            });
        }
        Ok(Fact { predicate, args })
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.args.join(", "))
    }
}

/// A duplicate-free set of facts, ordered by predicate then arguments.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactBase {
    facts: BTreeSet<Fact>,
}

impl FactBase {
    pub fn new() -> Self {
        FactBase::default()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn contains(&self, f: &Fact) -> bool {
        self.facts.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    /// Facts of one predicate, in argument order.
    pub fn with_predicate(&self, p: Predicate) -> impl Iterator<Item = &Fact> {
        self.facts.iter().filter(move |f| f.predicate == p)
    }

    /// Every ground term mentioned by some fact, sorted.
    pub fn universe(&self) -> BTreeSet<&str> {
        self.facts
            .iter()
            .flat_map(|f| f.args.iter().map(String::as_str))
            .collect()
    }

    pub fn insert(&mut self, f: Fact) -> bool {
        self.facts.insert(f)
    }
}

impl FromIterator<Fact> for FactBase {
    fn from_iter<I: IntoIterator<Item = Fact>>(iter: I) -> Self {
        FactBase {
            facts: iter.into_iter().collect(),
        }
    }
}

/// Adds `f` to `base`. Asserting a fact already present leaves the base
/// unchanged.
pub fn assert_fact(mut base: FactBase, f: Fact) -> Result<FactBase, FactError> {
    if f.args.len() != f.predicate.arity() {
        return Err(FactError::Arity {
            predicate: f.predicate,
            expected: f.predicate.arity(),
            found: f.args.len(),
        });
    }
    base.insert(f);
    Ok(base)
}

/// `name(args)` where `name` must be in the vocabulary and `args` match its
/// arity. Used by both `.facts` and `sc { ... }` parsing.
pub(crate) fn parse_predicate_name(p: &mut Parser) -> PResult<Predicate> {
    let (name, span) = p.any_ident("predicate name")?;
    match name.parse::<Predicate>() {
        Ok(pred) => Ok(pred),
        Err(e) => {
            p.diags.push(Diagnostic::error(
                Code::UnknownPredicate,
                span,
                format!("{e}; expected one of: {}", vocabulary()),
            ));
            Err(())
        }
    }
}

fn vocabulary() -> String {
    Predicate::ALL
        .iter()
        .map(|p| format!("{}/{}", p.name(), p.arity()))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Parses a `.facts` file.
pub fn parse_facts(text: &str) -> Result<FactBase, Vec<Diagnostic>> {
    let mut p = Parser::new(
        text,
        LexOptions {
            hash_comments: true,
        },
    );
    let mut base = FactBase::new();
    let mut ok = true;
    while !p.at(&Tok::Eof) {
        match fact(&mut p) {
            Ok(f) => {
                base.insert(f);
            }
            Err(()) => {
                ok = false;
                // Resynchronize after the next `.`.
                while !p.at(&Tok::Eof) && !p.eat(&Tok::Dot) {
                    p.bump();
                }
            }
        }
    }
    if ok && p.diags.is_empty() {
        Ok(base)
    } else {
        Err(p.diags)
    }
}

fn fact(p: &mut Parser) -> PResult<Fact> {
    let start = p.span();
    let pred = parse_predicate_name(p)?;
    p.expect(&Tok::LParen)?;
    let mut args = vec![p.any_ident("term")?.0];
    while p.eat(&Tok::Comma) {
        args.push(p.any_ident("term")?.0);
    }
    p.expect(&Tok::RParen)?;
    p.expect(&Tok::Dot)?;
    match Fact::new(pred, args) {
        Ok(f) => Ok(f),
        Err(e) => {
            p.diags.push(Diagnostic::error(
                Code::PredicateArity,
                start.to(p.prev_span()),
                e.to_string(),
            ));
            Err(())
        }
    }
}
