use std::fmt;

use super::diag::{Code, Diagnostic, Position, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Assign,
    Semi,
    Choice,
    Disrupt,
    SyncOpen,
    Interleave,
    FullSync,
    Bar,
    Enable,
    Bang,
    Query,
    Eq,
    Dot,
    Arrow,
    Star,
    Exists,
    Wedge,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Str(s) => return write!(f, "\"{s}\""),
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Assign => ":=",
            Tok::Semi => ";",
            Tok::Choice => "[]",
            Tok::Disrupt => "[>",
            Tok::SyncOpen => "|[",
            Tok::Interleave => "|||",
            Tok::FullSync => "||",
            Tok::Bar => "|",
            Tok::Enable => ">>",
            Tok::Bang => "!",
            Tok::Query => "?",
            Tok::Eq => "=",
            Tok::Dot => ".",
            Tok::Arrow => "->",
            Tok::Star => "*",
            Tok::Exists => "∃",
            Tok::Wedge => "∧",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LexOptions {
    /// Treat `#` as the start of a line comment.
    pub hash_comments: bool,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Position,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Splits `text` into tokens. Lexical errors are reported and the offending
/// character skipped, so the token stream always ends with [`Tok::Eof`].
pub fn tokenize(text: &str, opts: LexOptions) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        pos: Position { line: 1, column: 1 },
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.pos;
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if opts.hash_comments && c == '#' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        cur.bump();
        let tok = match c {
            '(' if cur.peek() == Some('*') => {
                cur.bump();
                if !skip_block_comment(&mut cur, '*', ')') {
                    diags.push(Diagnostic::error(
                        Code::Lexical,
                        Span::new(start, cur.pos),
                        "unterminated `(*` comment",
                    ));
                }
                continue;
            }
            '/' if cur.peek() == Some('*') => {
                cur.bump();
                if !skip_block_comment(&mut cur, '*', '/') {
                    diags.push(Diagnostic::error(
                        Code::Lexical,
                        Span::new(start, cur.pos),
                        "unterminated `/*` comment",
                    ));
                }
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '!' => Tok::Bang,
            '?' => Tok::Query,
            '=' => Tok::Eq,
            '.' => Tok::Dot,
            '*' => Tok::Star,
            '∃' => Tok::Exists,
            '∧' => Tok::Wedge,
            ':' => {
                if cur.eat('=') {
                    Tok::Assign
                } else {
                    Tok::Colon
                }
            }
            '[' => {
                if cur.eat(']') {
                    Tok::Choice
                } else if cur.eat('>') {
                    Tok::Disrupt
                } else {
                    Tok::LBracket
                }
            }
            ']' => Tok::RBracket,
            '|' => {
                if cur.eat('[') {
                    Tok::SyncOpen
                } else if cur.eat('|') {
                    if cur.eat('|') {
                        Tok::Interleave
                    } else {
                        Tok::FullSync
                    }
                } else {
                    Tok::Bar
                }
            }
            '>' if cur.peek() == Some('>') => {
                cur.bump();
                Tok::Enable
            }
            '-' if cur.peek() == Some('>') => {
                cur.bump();
                Tok::Arrow
            }
            '"' => {
                let mut s = String::new();
                let mut closed = false;
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                    if c == '"' {
                        closed = true;
                        break;
                    }
                    s.push(c);
                }
                if !closed {
                    diags.push(Diagnostic::error(
                        Code::Lexical,
                        Span::new(start, cur.pos),
                        "unterminated string literal",
                    ));
                }
                Tok::Str(s)
            }
            c if is_ident_char(c) => {
                let mut s = String::from(c);
                while let Some(c) = cur.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    cur.bump();
                }
                Tok::Ident(s)
            }
            other => {
                diags.push(Diagnostic::error(
                    Code::Lexical,
                    Span::new(start, cur.pos),
                    format!("unexpected character `{other}`"),
                ));
                continue;
            }
        };
        tokens.push(Token {
            tok,
            span: Span::new(start, cur.pos),
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: Span::new(cur.pos, cur.pos),
    });
    (tokens, diags)
}

fn skip_block_comment(cur: &mut Cursor<'_>, star: char, close: char) -> bool {
    while let Some(c) = cur.bump() {
        if c == star && cur.peek() == Some(close) {
            cur.bump();
            return true;
        }
    }
    false
}
