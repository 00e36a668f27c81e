//! `.asc` contract files.
//!
//! ```text
//! component <Name> where
//!   assert { <free text, stored verbatim> }
//!   sc { [exists v1, ..., vn :] atom and atom ... }
//!   ic {
//!     processes   { P1, P2 }
//!     in_ports    { port : Process, ... }
//!     out_ports   { port : Process, ... }
//!     in_msgs     { message : port, ... }
//!     out_msgs    { message : port, ... }
//!     external_in { message, ... }
//!     flows       { message : out_port -> in_port, ... }
//!   }
//!   bc <SpecName> from "<path>.lot"      (or: bc none)
//! end
//! ```
//!
//! Every section is optional but they must appear in the order above. Inside
//! `ic`, subsections may appear in any order, at most once each.

use super::diag::{has_errors, Code, Diagnostic};
use super::lexer::{LexOptions, Tok};
use super::parser::{PResult, Parser};
use crate::contracts::interface::{Flow, InterfaceContract, MessageDecl, PortDecl};
use crate::contracts::query::{parse_query, Query};
use crate::contracts::{AscContract, BcRef};

/// Blanks out an `assert { ... }` block, returning its trimmed body. Newlines
/// are kept so positions in the rest of the file stay accurate.
fn extract_assertion(text: &str) -> (String, Option<String>) {
    let bytes = text.as_bytes();
    let mut search = 0;
    while let Some(off) = text[search..].find("assert") {
        let at = search + off;
        let before_ok = at == 0 || !(bytes[at - 1].is_ascii_alphanumeric() || bytes[at - 1] == b'_');
        let after = at + "assert".len();
        let rest = &text[after..];
        let trimmed = rest.trim_start();
        if before_ok && trimmed.starts_with('{') {
            let open = after + (rest.len() - trimmed.len());
            if let Some(close_off) = text[open..].find('}') {
                let close = open + close_off;
                let body = text[open + 1..close].trim().to_string();
                let mut out = String::with_capacity(text.len());
                out.push_str(&text[..at]);
                out.extend(text[at..=close].chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
                out.push_str(&text[close + 1..]);
                return (out, Some(body));
            }
        }
        search = after;
    }
    (text.to_string(), None)
}

pub fn parse_asc(text: &str) -> Result<AscContract, Vec<Diagnostic>> {
    let (text, assertion) = extract_assertion(text);
    let mut p = Parser::new(&text, LexOptions::default());
    let res = contract(&mut p, assertion).and_then(|c| p.finish().map(|_| c));
    match res {
        Ok(c) if !has_errors(&p.diags) => Ok(c),
        _ => Err(p.diags),
    }
}

fn contract(p: &mut Parser, assertion: Option<String>) -> PResult<AscContract> {
    p.expect_kw("component")?;
    let (name, _) = p.any_ident("component name")?;
    p.expect_kw("where")?;

    let mut sc = Query::default();
    if p.eat_kw("sc") {
        p.expect(&Tok::LBrace)?;
        sc = parse_query(p, &Tok::RBrace)?;
        p.expect(&Tok::RBrace)?;
    }
    let mut ic = InterfaceContract::default();
    if p.eat_kw("ic") {
        ic = interface(p)?;
    }
    let mut bc = None;
    if p.eat_kw("bc") && !p.eat_kw("none") {
        let (spec_name, _) = p.any_ident("specification name")?;
        p.expect_kw("from")?;
        let (path, _) = p.string("quoted path")?;
        bc = Some(BcRef { spec_name, path });
    }
    p.expect_kw("end")?;
    Ok(AscContract {
        name,
        assertion,
        sc,
        ic,
        bc,
    })
}

const IC_SECTIONS: &[&str] = &[
    "processes",
    "in_ports",
    "out_ports",
    "in_msgs",
    "out_msgs",
    "external_in",
    "flows",
];

fn malformed<T>(p: &mut Parser, message: String) -> PResult<T> {
    let span = p.span();
    p.diags
        .push(Diagnostic::error(Code::MalformedInterface, span, message));
    Err(())
}

fn interface(p: &mut Parser) -> PResult<InterfaceContract> {
    p.expect(&Tok::LBrace)?;
    let mut ic = InterfaceContract::default();
    let mut seen: Vec<String> = Vec::new();
    while !p.at(&Tok::RBrace) {
        let section = match p.peek().clone() {
            Tok::Ident(s) if IC_SECTIONS.contains(&s.as_str()) => s,
            Tok::Ident(s) => {
                return malformed(
                    p,
                    format!(
                        "unknown interface section `{s}`; expected one of {}",
                        IC_SECTIONS.join(", ")
                    ),
                )
            }
            found => return malformed(p, format!("expected an interface section, found {found}")),
        };
        if seen.contains(&section) {
            return malformed(p, format!("interface section `{section}` appears twice"));
        }
        p.bump();
        p.expect(&Tok::LBrace)?;
        match section.as_str() {
            "processes" => ic.processes = names(p)?,
            "external_in" => ic.external_in = names(p)?,
            "in_ports" => ic.in_ports = pairs(p, "port", "process")?.into_iter().map(|(port, process)| PortDecl { port, process }).collect(),
            "out_ports" => ic.out_ports = pairs(p, "port", "process")?.into_iter().map(|(port, process)| PortDecl { port, process }).collect(),
            "in_msgs" => ic.in_msgs = pairs(p, "message", "port")?.into_iter().map(|(message, port)| MessageDecl { message, port }).collect(),
            "out_msgs" => ic.out_msgs = pairs(p, "message", "port")?.into_iter().map(|(message, port)| MessageDecl { message, port }).collect(),
            "flows" => ic.flows = flows(p)?,
            _ => unreachable!(),
        }
        p.expect(&Tok::RBrace)?;
        seen.push(section);
    }
    p.expect(&Tok::RBrace)?;
    Ok(ic)
}

fn names(p: &mut Parser) -> PResult<Vec<String>> {
    let mut out = Vec::new();
    while !p.at(&Tok::RBrace) {
        out.push(p.any_ident("identifier")?.0);
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    Ok(out)
}

fn pairs(p: &mut Parser, left: &str, right: &str) -> PResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    while !p.at(&Tok::RBrace) {
        let (a, _) = p.any_ident(left)?;
        if !p.eat(&Tok::Colon) {
            return malformed(p, format!("expected `{a} : <{right}>`"));
        }
        let (b, _) = p.any_ident(right)?;
        out.push((a, b));
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    Ok(out)
}

fn flows(p: &mut Parser) -> PResult<Vec<Flow>> {
    let mut out = Vec::new();
    while !p.at(&Tok::RBrace) {
        let (message, _) = p.any_ident("message")?;
        if !p.eat(&Tok::Colon) {
            return malformed(p, format!("expected `{message} : <out_port> -> <in_port>`"));
        }
        let (from, _) = p.any_ident("output port")?;
        if !p.eat(&Tok::Arrow) {
            return malformed(p, "expected `->` in flow".to_string());
        }
        let (to, _) = p.any_ident("input port")?;
        out.push(Flow { message, from, to });
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_contract() {
        let c = parse_asc("component X where sc { } ic { } bc none end").unwrap();
        assert_eq!(c.name, "X");
        assert!(c.sc.conjuncts.is_empty());
        assert_eq!(c.ic, InterfaceContract::default());
        assert!(c.bc.is_none());
        assert!(c.assertion.is_none());
    }

    #[test]
    fn assertion_is_stored_verbatim() {
        let c = parse_asc(
            "component X where\n  assert { observers see every change; (x > 0) }\n  sc { class(A) }\nend",
        )
        .unwrap();
        assert_eq!(
            c.assertion.as_deref(),
            Some("observers see every change; (x > 0)")
        );
        assert_eq!(c.sc.conjuncts.len(), 1);
    }

    #[test]
    fn misspelled_predicate() {
        let diags = parse_asc("component X where sc { exists a, b : Inherits(a, b) } end").unwrap_err();
        assert_eq!(diags[0].code, Code::UnknownPredicate);
        assert_eq!(diags[0].span.start.column, 38);
    }

    #[test]
    fn malformed_interface_section() {
        let diags = parse_asc("component X where ic { ports { a : B } } end").unwrap_err();
        assert_eq!(diags[0].code, Code::MalformedInterface);
        let diags = parse_asc("component X where ic { in_ports { a B } } end").unwrap_err();
        assert_eq!(diags[0].code, Code::MalformedInterface);
    }

    #[test]
    fn bc_reference() {
        let c = parse_asc("component X where bc Obs from \"obs.lot\" end").unwrap();
        let bc = c.bc.unwrap();
        assert_eq!(bc.spec_name, "Obs");
        assert_eq!(bc.path, "obs.lot");
    }
}
