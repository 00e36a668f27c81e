//! `.adl` configuration files.
//!
//! ```text
//! configuration <Name>
//!   use "<path>.lot"
//!   sorts { S = {v1, v2} ... }                 (optional)
//!   components { name = Process[g1, g2], ... }
//!   connectors { name = Process[g1, g2], ... }
//!   composition { <expr> }
//! end
//! ```
//!
//! Composition expressions use element names, `|||`, `||`, `|[g, ...]|`,
//! `hide g, ... in` and parentheses, with the same precedence as in `.lot`
//! files.

use super::ast::{SortDecl, SyncSet};
use super::diag::{has_errors, Diagnostic, Span};
use super::lexer::{LexOptions, Tok};
use super::parser::{PResult, Parser};
use crate::adl::{ConfigExpr, ElementKind};

/// An element declaration as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementDecl {
    pub kind: ElementKind,
    pub name: String,
    pub process: String,
    pub gates: Vec<String>,
    pub span: Span,
}

/// A parsed `.adl` file, before the `use`d specification is loaded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdlFile {
    pub name: String,
    pub uses: Option<String>,
    pub sorts: Vec<SortDecl>,
    pub elements: Vec<ElementDecl>,
    pub composition: ConfigExpr,
}

pub fn parse_adl(text: &str) -> Result<AdlFile, Vec<Diagnostic>> {
    let mut p = Parser::new(text, LexOptions::default());
    let res = file(&mut p).and_then(|f| p.finish().map(|_| f));
    match res {
        Ok(f) if !has_errors(&p.diags) => Ok(f),
        _ => Err(p.diags),
    }
}

fn file(p: &mut Parser) -> PResult<AdlFile> {
    p.expect_kw("configuration")?;
    let (name, _) = p.ident("configuration name")?;
    let uses = if p.eat_kw("use") {
        Some(p.string("quoted path")?.0)
    } else {
        None
    };
    let mut sorts = Vec::new();
    if p.eat_kw("sorts") {
        let braced = p.eat(&Tok::LBrace);
        if !(braced && p.at(&Tok::RBrace)) {
            p.sort_decls(&mut sorts)?;
        }
        if braced {
            p.expect(&Tok::RBrace)?;
        }
    }
    let mut elements = Vec::new();
    for (kw, kind) in [("components", ElementKind::Component), ("connectors", ElementKind::Connector)] {
        if p.eat_kw(kw) {
            p.expect(&Tok::LBrace)?;
            while !p.at(&Tok::RBrace) {
                let (name, start) = p.ident("element name")?;
                p.expect(&Tok::Eq)?;
                let (process, _) = p.ident("process name")?;
                let gates = if matches!(p.peek(), Tok::LBracket | Tok::Choice) {
                    p.gate_list()?
                } else {
                    Vec::new()
                };
                elements.push(ElementDecl {
                    kind,
                    name,
                    process,
                    gates,
                    span: start.to(p.prev_span()),
                });
                p.eat(&Tok::Comma);
            }
            p.expect(&Tok::RBrace)?;
        }
    }
    p.expect_kw("composition")?;
    p.expect(&Tok::LBrace)?;
    let composition = expr(p)?;
    p.expect(&Tok::RBrace)?;
    p.expect_kw("end")?;
    Ok(AdlFile {
        name,
        uses,
        sorts,
        elements,
        composition,
    })
}

fn expr(p: &mut Parser) -> PResult<ConfigExpr> {
    if p.eat_kw("hide") {
        let gates = p.ident_list("gate identifier")?;
        p.expect_kw("in")?;
        let body = expr(p)?;
        return Ok(ConfigExpr::Hide(gates, Box::new(body)));
    }
    let mut left = atom(p)?;
    loop {
        let sync = match p.peek() {
            Tok::Interleave => {
                p.bump();
                SyncSet::None
            }
            Tok::FullSync => {
                p.bump();
                SyncSet::Full
            }
            Tok::SyncOpen => {
                p.bump();
                let gates = p.ident_list("gate identifier")?;
                p.expect(&Tok::RBracket)?;
                p.expect(&Tok::Bar)?;
                SyncSet::Gates(gates)
            }
            _ => return Ok(left),
        };
        let right = atom(p)?;
        left = ConfigExpr::Par(Box::new(left), sync, Box::new(right));
    }
}

fn atom(p: &mut Parser) -> PResult<ConfigExpr> {
    if p.eat(&Tok::LParen) {
        let e = expr(p)?;
        p.expect(&Tok::RParen)?;
        return Ok(e);
    }
    if p.at_kw("hide") {
        return p.error("`hide` must be parenthesized in this position");
    }
    let (name, _) = p.ident("element name")?;
    Ok(ConfigExpr::Element(name))
}
