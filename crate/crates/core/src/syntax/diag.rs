use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

/// A 1-based line/column position in source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Position {
    pub line: u32,
    pub column: u32,
}

/// Half-open source range, `start` inclusive and `end` exclusive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Span {
    pub start: Position,
    pub end: Position,
}

impl Span {
    pub fn new(start: Position, end: Position) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span {
            start: self.start,
            end: other.end,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start.line, self.start.column)
    }
}

/// Source location attached to an AST node.
///
/// Locations never take part in structural comparison: two trees parsed from
/// differently formatted text compare equal when their shape is equal.
#[derive(Clone, Copy, Debug, Default)]
pub struct Loc(pub Span);

impl PartialEq for Loc {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Loc {}

impl Hash for Loc {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl From<Span> for Loc {
    fn from(span: Span) -> Self {
        Loc(span)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Stable diagnostic identifiers. The string form (see [`Code::as_str`]) is
/// part of the CLI's output contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    Lexical,
    Syntax,
    DuplicateDefinition,
    UnknownProcess,
    UnknownSort,
    UnknownGate,
    UnknownValue,
    GateArity,
    UnboundVariable,
    DuplicateGate,
    DuplicateValue,
    EmptySort,
    LibraryUnsupported,
    UnknownPredicate,
    PredicateArity,
    MalformedInterface,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Lexical => "lexical-error",
            Code::Syntax => "syntax-error",
            Code::DuplicateDefinition => "duplicate-definition",
            Code::UnknownProcess => "unknown-process",
            Code::UnknownSort => "unknown-sort",
            Code::UnknownGate => "unknown-gate",
            Code::UnknownValue => "unknown-value",
            Code::GateArity => "gate-arity-mismatch",
            Code::UnboundVariable => "unbound-variable",
            Code::DuplicateGate => "duplicate-gate",
            Code::DuplicateValue => "duplicate-value",
            Code::EmptySort => "empty-sort",
            Code::LibraryUnsupported => "library-unsupported",
            Code::UnknownPredicate => "unknown-predicate",
            Code::PredicateArity => "predicate-arity",
            Code::MalformedInterface => "malformed-interface",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub code: Code,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            span,
            code,
            message: message.into(),
        }
    }

    pub fn warning(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            span,
            code,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {}[{}]: {}", self.span, sev, self.code, self.message)
    }
}

pub(crate) fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
