//! Abstract syntax and text formats: `.lot` specifications, `.asc` contracts
//! and `.adl` configurations.

pub mod adl;
pub mod asc;
pub mod ast;
pub mod diag;
pub(crate) mod lexer;
pub(crate) mod parser;
pub mod print;
pub mod validate;

pub use asc::parse_asc;
pub use ast::*;
pub use diag::{Code, Diagnostic, Loc, Position, Severity, Span};
pub use print::{behavior_to_string, spec_to_string};
pub use validate::{validate_behavior, validate_spec};

use diag::has_errors;

/// Parses and validates a `.lot` specification.
///
/// ```
/// use lotos_asc::syntax::{parse_spec, BehaviorExpr};
///
/// let spec = parse_spec("specification S [a] : noexit behaviour stop endspec").unwrap();
/// assert_eq!(spec.name, "S");
/// assert_eq!(spec.top_behavior, BehaviorExpr::Stop);
/// ```
pub fn parse_spec(text: &str) -> Result<Specification, Vec<Diagnostic>> {
    let spec = parser::parse_spec_syntax(text)?;
    let diags = validate_spec(&spec);
    if has_errors(&diags) {
        Err(diags)
    } else {
        Ok(spec)
    }
}

/// Parses a standalone behavior expression, resolving processes, sorts and
/// values against `context`. Gates are left free.
pub fn parse_behavior(text: &str, context: &Specification) -> Result<BehaviorExpr, Vec<Diagnostic>> {
    let values = context
        .sorts
        .iter()
        .flat_map(|s| s.values.iter().cloned())
        .collect();
    let b = parser::parse_behavior_syntax(text, values)?;
    let diags = validate_behavior(&b, context);
    if has_errors(&diags) {
        Err(diags)
    } else {
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_context() -> Specification {
        parse_spec("specification Ctx : noexit behaviour stop endspec").unwrap()
    }

    fn ctx_with_p1_p2() -> Specification {
        parse_spec(
            "specification Ctx [a, b, c] : noexit behaviour stop where
               process P1 [x, y] : noexit := x; y; stop endproc
               process P2 [x, y] : noexit := x; y; stop endproc
             endspec",
        )
        .unwrap()
    }

    #[test]
    fn smallest_specification() {
        let s = parse_spec("specification S [a] : noexit behaviour stop endspec").unwrap();
        assert_eq!(s.top_gates, vec!["a"]);
        assert!(s.processes.is_empty());
    }

    #[test]
    fn two_branch_choice() {
        let b = parse_behavior("a; stop [] b; stop", &empty_context()).unwrap();
        assert_eq!(
            b,
            BehaviorExpr::choice(
                BehaviorExpr::gate("a", BehaviorExpr::Stop),
                BehaviorExpr::gate("b", BehaviorExpr::Stop)
            )
        );
    }

    #[test]
    fn hidden_synchronization() {
        let b = parse_behavior("hide b in P1[a,b] |[b]| P2[b,c]", &ctx_with_p1_p2()).unwrap();
        assert_eq!(
            b,
            BehaviorExpr::hide(
                &["b"],
                BehaviorExpr::par(
                    BehaviorExpr::inst("P1", &["a", "b"]),
                    SyncSet::Gates(vec!["b".into()]),
                    BehaviorExpr::inst("P2", &["b", "c"])
                )
            )
        );
    }

    #[test]
    fn enable_operator() {
        let b = parse_behavior("exit >> stop", &empty_context()).unwrap();
        assert_eq!(b, BehaviorExpr::seq(BehaviorExpr::Exit, BehaviorExpr::Stop));
    }

    #[test]
    fn prefix_binds_tighter_than_choice() {
        let b = parse_behavior("a; b; stop [] c; stop", &empty_context()).unwrap();
        assert_eq!(
            b,
            BehaviorExpr::choice(
                BehaviorExpr::gate("a", BehaviorExpr::gate("b", BehaviorExpr::Stop)),
                BehaviorExpr::gate("c", BehaviorExpr::Stop)
            )
        );
    }

    #[test]
    fn parallel_forms() {
        let ctx = empty_context();
        let b = parse_behavior("a; stop ||| b; stop || c; stop", &ctx).unwrap();
        match b {
            BehaviorExpr::Par { left, sync, .. } => {
                assert_eq!(sync, SyncSet::Full);
                assert!(matches!(*left, BehaviorExpr::Par { sync: SyncSet::None, .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_process() {
        let d = parse_spec("specification S [a]: noexit behaviour P[a] endspec").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::UnknownProcess);
        assert_eq!(d[0].span.start, Position { line: 1, column: 39 });
    }

    #[test]
    fn unbound_variable() {
        let d = parse_spec(
            "specification S [g] : noexit sorts V = {v1} behaviour P[g] where
               process P [g] : noexit := g !x; stop endproc
             endspec",
        )
        .unwrap_err();
        assert_eq!(d.iter().map(|d| d.code).collect::<Vec<_>>(), vec![Code::UnboundVariable]);
        assert_eq!(d[0].span.start.line, 2);
    }

    #[test]
    fn gate_arity_mismatch() {
        let d = parse_spec(
            "specification S [a, b, c] : noexit behaviour P[a, b, c] where
               process P [x, y] : noexit := x; y; stop endproc
             endspec",
        )
        .unwrap_err();
        assert_eq!(d[0].code, Code::GateArity);
    }

    #[test]
    fn distinct_error_codes() {
        let cases = [
            ("specification S : noexit behaviour a @ stop endspec", Code::Lexical),
            ("specification S : noexit behaviour stop stop endspec", Code::Syntax),
            (
                "specification S : noexit behaviour stop where
                   process P : noexit := stop endproc
                   process P : noexit := stop endproc endspec",
                Code::DuplicateDefinition,
            ),
            ("specification S [a] : noexit behaviour a ?x:T; stop endspec", Code::UnknownSort),
            ("specification S [a] : noexit behaviour b; stop endspec", Code::UnknownGate),
            (
                "specification S [a] : noexit library RESULT endlib behaviour stop endspec",
                Code::LibraryUnsupported,
            ),
            (
                "specification S : noexit sorts A = {x} B = {x} behaviour stop endspec",
                Code::DuplicateValue,
            ),
        ];
        for (text, code) in cases {
            let d = parse_spec(text).unwrap_err();
            assert_eq!(d[0].code, code, "{text}: {d:?}");
        }
    }

    #[test]
    fn variable_scope_ends_at_enable() {
        let ctx = parse_spec("specification C : noexit sorts V = {v} behaviour stop endspec").unwrap();
        assert!(parse_behavior("a ?x:V; b !x; exit", &ctx).is_ok());
        let d = parse_behavior("a ?x:V; exit >> b !x; stop", &ctx).unwrap_err();
        assert_eq!(d[0].code, Code::UnboundVariable);
    }

    #[test]
    fn hide_scopes_gates() {
        assert!(parse_spec("specification S [a] : noexit behaviour hide b in a; b; stop endspec").is_ok());
        let d = parse_spec("specification S [a] : noexit behaviour (hide b in a; stop) ||| b; stop endspec")
            .unwrap_err();
        assert_eq!(d[0].code, Code::UnknownGate);
    }

    #[test]
    fn nested_where_is_hoisted() {
        let s = parse_spec(
            "specification S [a] : noexit behaviour P[a] where
               process P [g] : noexit := Q[g] where
                 process Q [h] : noexit := h; stop endproc
               endproc
             endspec",
        )
        .unwrap();
        let names: Vec<_> = s.processes.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, vec!["P", "Q"]);
    }

    #[test]
    fn endprocess_synonym_and_c_comments() {
        let s = parse_spec(
            "specification S [a] : noexit := /* header */ behaviour P[a] where
               process P [g] : noexit := g; P[g] (* loop *) endprocess
             endspec",
        );
        assert!(s.is_ok(), "{s:?}");
    }

    #[test]
    fn pretty_print_round_trip() {
        let text = "specification S [a, b] : noexit sorts V = {v1, v2}
            behaviour hide b in (P[a, b] |[b]| b ?x:V; a !x; stop) >> (exit [> i; stop)
            where process P [x, y] : exit := x; y !v1; exit [] y !v2; P[x, y] endproc endspec";
        let s = parse_spec(text).unwrap();
        let printed = spec_to_string(&s);
        let again = parse_spec(&printed).unwrap();
        assert_eq!(s, again);
        assert_eq!(printed, spec_to_string(&again));
    }
}
