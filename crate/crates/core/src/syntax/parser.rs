//! Recursive-descent parser for `.lot` specifications.
//!
//! Operator precedence, loosest first:
//!
//! | level | form                               | assoc |
//! |-------|------------------------------------|-------|
//! | 0     | `hide g1, ..., gn in B`            | right (extends as far as possible) |
//! | 1     | `B1 >> B2`                         | left  |
//! | 2     | `B1 [> B2`                         | left  |
//! | 3     | `B1 ||| B2`, `B1 || B2`, `B1 |[G]| B2` | left |
//! | 4     | `B1 [] B2`                         | left  |
//! | 5     | `a; B`                             | right |
//! | 6     | `stop`, `exit`, `P[g..]`, `(B)`    |       |

use super::ast::*;
use super::diag::{Code, Diagnostic, Loc, Span};
use super::lexer::{tokenize, LexOptions, Tok, Token};

/// Words that cannot be used as identifiers inside `.lot` text.
pub const RESERVED: &[&str] = &[
    "specification",
    "behaviour",
    "behavior",
    "where",
    "endspec",
    "process",
    "endproc",
    "endprocess",
    "noexit",
    "exit",
    "stop",
    "hide",
    "in",
    "i",
    "sorts",
    "library",
    "endlib",
];

pub(crate) type PResult<T> = Result<T, ()>;

/// Token cursor shared by every text format in the crate.
pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    pub diags: Vec<Diagnostic>,
    /// Values declared by the sorts in scope.
    values: Vec<String>,
    /// Receive-bound variables on the current path.
    bound: Vec<String>,
    /// Processes declared in nested `where` blocks, hoisted to the top.
    hoisted: Vec<ProcessDef>,
}

impl Parser {
    pub fn new(text: &str, opts: LexOptions) -> Self {
        let (toks, diags) = tokenize(text, opts);
        Parser {
            toks,
            pos: 0,
            diags,
            values: Vec::new(),
            bound: Vec::new(),
            hoisted: Vec::new(),
        }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    pub fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at(&self, tok: &Tok) -> bool {
        self.peek() == tok
    }

    pub fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error<T>(&mut self, message: impl Into<String>) -> PResult<T> {
        let span = self.span();
        self.diags
            .push(Diagnostic::error(Code::Syntax, span, message.into()));
        Err(())
    }

    pub fn expect(&mut self, tok: &Tok) -> PResult<Span> {
        if self.at(tok) {
            Ok(self.bump().span)
        } else {
            let found = self.peek().clone();
            self.error(format!("expected {tok}, found {found}"))
        }
    }

    pub fn expect_kw(&mut self, kw: &str) -> PResult<Span> {
        if self.at_kw(kw) {
            Ok(self.bump().span)
        } else {
            let found = self.peek().clone();
            self.error(format!("expected `{kw}`, found {found}"))
        }
    }

    /// Any identifier, reserved or not.
    pub fn any_ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.bump().span;
                Ok((s, span))
            }
            found => self.error(format!("expected {what}, found {found}")),
        }
    }

    /// An identifier that is not a `.lot` keyword.
    pub fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        if let Tok::Ident(s) = self.peek() {
            if RESERVED.contains(&s.as_str()) {
                let s = s.clone();
                return self.error(format!("expected {what}, found keyword `{s}`"));
            }
        }
        self.any_ident(what)
    }

    pub fn string(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Str(s) => {
                let span = self.bump().span;
                Ok((s, span))
            }
            found => self.error(format!("expected {what}, found {found}")),
        }
    }

    /// `a, b, c` with at least one element.
    pub fn ident_list(&mut self, what: &str) -> PResult<Vec<String>> {
        let mut out = vec![self.ident(what)?.0];
        while self.eat(&Tok::Comma) {
            out.push(self.ident(what)?.0);
        }
        Ok(out)
    }

    /// `[a, b]`; an empty list is written `[]`.
    pub(crate) fn gate_list(&mut self) -> PResult<Vec<String>> {
        if self.eat(&Tok::Choice) {
            return Ok(Vec::new());
        }
        self.expect(&Tok::LBracket)?;
        let gates = self.ident_list("gate identifier")?;
        self.expect(&Tok::RBracket)?;
        Ok(gates)
    }

    pub fn finish(&mut self) -> PResult<()> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            let found = self.peek().clone();
            self.error(format!("unexpected {found} after end of input"))
        }
    }

    // ---------------------------------------------------------------------
    // Specifications

    fn functionality(&mut self) -> PResult<Functionality> {
        if self.eat_kw("noexit") {
            Ok(Functionality::NoExit)
        } else if self.eat_kw("exit") {
            Ok(Functionality::Exit)
        } else {
            let found = self.peek().clone();
            self.error(format!("expected `noexit` or `exit`, found {found}"))
        }
    }

    pub fn specification(&mut self) -> PResult<Specification> {
        let start = self.expect_kw("specification")?;
        let (name, _) = self.ident("specification name")?;
        let top_gates = if matches!(self.peek(), Tok::LBracket | Tok::Choice) {
            self.gate_list()?
        } else {
            Vec::new()
        };
        self.expect(&Tok::Colon)?;
        let functionality = self.functionality()?;
        self.eat(&Tok::Assign);

        let mut sorts = Vec::new();
        loop {
            if self.at_kw("sorts") {
                self.bump();
                self.sort_decls(&mut sorts)?;
            } else if self.at_kw("library") {
                self.library_stanza()?;
            } else {
                break;
            }
        }
        self.values = sorts.iter().flat_map(|s| s.values.clone()).collect();

        if !(self.eat_kw("behaviour") || self.eat_kw("behavior")) {
            let found = self.peek().clone();
            return self.error(format!("expected `behaviour`, found {found}"));
        }
        let top_behavior = self.behavior()?;
        let mut processes = Vec::new();
        if self.eat_kw("where") {
            while self.at_kw("process") {
                let p = self.process_def()?;
                processes.push(p);
            }
        }
        let end = self.expect_kw("endspec")?;
        processes.append(&mut self.hoisted);
        Ok(Specification {
            name,
            top_gates,
            functionality,
            sorts,
            processes,
            top_behavior,
            loc: Loc(start.to(end)),
        })
    }

    pub(crate) fn sort_decls(&mut self, sorts: &mut Vec<SortDecl>) -> PResult<()> {
        loop {
            let (name, start) = self.ident("sort name")?;
            self.expect(&Tok::Eq)?;
            self.expect(&Tok::LBrace)?;
            if self.at(&Tok::RBrace) {
                return self.error(format!("sort `{name}` must declare at least one value"));
            }
            let values = self.ident_list("value identifier")?;
            let end = self.expect(&Tok::RBrace)?;
            sorts.push(SortDecl {
                name,
                values,
                loc: Loc(start.to(end)),
            });
            // Another declaration follows only if `Name =` comes next.
            if !(matches!(self.peek(), Tok::Ident(s) if !RESERVED.contains(&s.as_str()))
                && self.peek_at(1) == &Tok::Eq)
            {
                return Ok(());
            }
        }
    }

    fn library_stanza(&mut self) -> PResult<()> {
        let start = self.bump().span;
        while !self.at_kw("endlib") && !self.at(&Tok::Eof) {
            self.bump();
        }
        let end = self.expect_kw("endlib")?;
        self.diags.push(Diagnostic::error(
            Code::LibraryUnsupported,
            start.to(end),
            "`library` imports are not supported; declare finite sorts inline with \
             `sorts NAME = {v1, ..., vn}`",
        ));
        Ok(())
    }

    fn process_def(&mut self) -> PResult<ProcessDef> {
        let start = self.expect_kw("process")?;
        let (name, _) = self.ident("process name")?;
        let formal_gates = if matches!(self.peek(), Tok::LBracket | Tok::Choice) {
            self.gate_list()?
        } else {
            Vec::new()
        };
        self.expect(&Tok::Colon)?;
        let functionality = self.functionality()?;
        self.expect(&Tok::Assign)?;
        let body = self.behavior()?;
        if self.eat_kw("where") {
            while self.at_kw("process") {
                let p = self.process_def()?;
                self.hoisted.push(p);
            }
        }
        let end = if self.at_kw("endproc") || self.at_kw("endprocess") {
            self.bump().span
        } else {
            let found = self.peek().clone();
            return self.error(format!("expected `endproc`, found {found}"));
        };
        Ok(ProcessDef {
            name,
            formal_gates,
            functionality,
            body,
            loc: Loc(start.to(end)),
        })
    }

    // ---------------------------------------------------------------------
    // Behavior expressions

    pub fn set_values(&mut self, values: Vec<String>) {
        self.values = values;
    }

    pub fn behavior(&mut self) -> PResult<BehaviorExpr> {
        if self.at_kw("hide") {
            let start = self.bump().span;
            let gates = self.ident_list("gate identifier")?;
            self.expect_kw("in")?;
            let body = self.behavior()?;
            let end = self.prev_span();
            return Ok(BehaviorExpr::Hide {
                gates,
                body: Box::new(body),
                loc: Loc(start.to(end)),
            });
        }
        let mut left = self.disrupt()?;
        while self.eat(&Tok::Enable) {
            let right = self.disrupt()?;
            left = BehaviorExpr::seq(left, right);
        }
        Ok(left)
    }

    fn disrupt(&mut self) -> PResult<BehaviorExpr> {
        let mut left = self.parallel()?;
        while self.eat(&Tok::Disrupt) {
            let right = self.parallel()?;
            left = BehaviorExpr::disrupt(left, right);
        }
        Ok(left)
    }

    fn parallel(&mut self) -> PResult<BehaviorExpr> {
        let mut left = self.choice()?;
        loop {
            let start = self.span();
            let sync = match self.peek() {
                Tok::Interleave => {
                    self.bump();
                    SyncSet::None
                }
                Tok::FullSync => {
                    self.bump();
                    SyncSet::Full
                }
                Tok::SyncOpen => {
                    self.bump();
                    let gates = self.ident_list("gate identifier")?;
                    self.expect(&Tok::RBracket)?;
                    self.expect(&Tok::Bar)?;
                    SyncSet::Gates(gates)
                }
                _ => return Ok(left),
            };
            let loc = Loc(start.to(self.prev_span()));
            let right = self.choice()?;
            left = BehaviorExpr::Par {
                left: Box::new(left),
                sync,
                right: Box::new(right),
                loc,
            };
        }
    }

    fn choice(&mut self) -> PResult<BehaviorExpr> {
        let mut left = self.prefix()?;
        while self.eat(&Tok::Choice) {
            let right = self.prefix()?;
            left = BehaviorExpr::choice(left, right);
        }
        Ok(left)
    }

    fn starts_action(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) if s == "i" => true,
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                matches!(self.peek_at(1), Tok::Semi | Tok::Bang | Tok::Query)
            }
            _ => false,
        }
    }

    fn prefix(&mut self) -> PResult<BehaviorExpr> {
        if !self.starts_action() {
            return self.atom();
        }
        let start = self.span();
        let action = if self.eat_kw("i") {
            ActionExpr::Internal
        } else {
            let (gate, _) = self.ident("gate identifier")?;
            let mut offers = Vec::new();
            loop {
                if self.eat(&Tok::Bang) {
                    let (name, _) = self.ident("value or variable")?;
                    let value = if self.bound.iter().rev().any(|v| *v == name) {
                        ValueExpr::Var(name)
                    } else if self.values.contains(&name) {
                        ValueExpr::Literal(name)
                    } else {
                        // Neither bound nor declared: validation reports it.
                        ValueExpr::Var(name)
                    };
                    offers.push(OfferExpr::Send(value));
                } else if self.eat(&Tok::Query) {
                    let (var, _) = self.ident("variable")?;
                    self.expect(&Tok::Colon)?;
                    let (sort, _) = self.ident("sort name")?;
                    offers.push(OfferExpr::Receive { var, sort });
                } else {
                    break;
                }
            }
            ActionExpr::Comm { gate, offers }
        };
        let loc = Loc(start.to(self.prev_span()));
        self.expect(&Tok::Semi)?;

        let before = self.bound.len();
        if let ActionExpr::Comm { offers, .. } = &action {
            for o in offers {
                if let OfferExpr::Receive { var, .. } = o {
                    self.bound.push(var.clone());
                }
            }
        }
        let rest = self.prefix();
        self.bound.truncate(before);
        Ok(BehaviorExpr::Prefix {
            action,
            rest: Box::new(rest?),
            loc,
        })
    }

    fn atom(&mut self) -> PResult<BehaviorExpr> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "stop" => {
                self.bump();
                Ok(BehaviorExpr::Stop)
            }
            Tok::Ident(s) if s == "exit" => {
                self.bump();
                Ok(BehaviorExpr::Exit)
            }
            Tok::LParen => {
                self.bump();
                let b = self.behavior()?;
                self.expect(&Tok::RParen)?;
                Ok(b)
            }
            Tok::Ident(s) if s == "hide" => {
                self.error("`hide` must be parenthesized in this position")
            }
            Tok::Ident(_) => {
                let (process, start) = self.ident("process name")?;
                let gates = if self.at(&Tok::LBracket) {
                    self.gate_list()?
                } else {
                    Vec::new()
                };
                Ok(BehaviorExpr::Inst {
                    process,
                    gates,
                    loc: Loc(start.to(self.prev_span())),
                })
            }
            found => self.error(format!("expected a behaviour expression, found {found}")),
        }
    }
}

/// Syntax only: tokens to tree, without name resolution checks.
pub(crate) fn parse_spec_syntax(text: &str) -> Result<Specification, Vec<Diagnostic>> {
    let mut p = Parser::new(text, LexOptions::default());
    let res = p.specification().and_then(|s| p.finish().map(|_| s));
    match res {
        Ok(spec) if !super::diag::has_errors(&p.diags) => Ok(spec),
        _ => Err(p.diags),
    }
}

pub(crate) fn parse_behavior_syntax(
    text: &str,
    values: Vec<String>,
) -> Result<BehaviorExpr, Vec<Diagnostic>> {
    let mut p = Parser::new(text, LexOptions::default());
    p.set_values(values);
    let res = p.behavior().and_then(|b| p.finish().map(|_| b));
    match res {
        Ok(b) if !super::diag::has_errors(&p.diags) => Ok(b),
        _ => Err(p.diags),
    }
}
