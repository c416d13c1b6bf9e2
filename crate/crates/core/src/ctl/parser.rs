//! Recursive-descent parser for CTL formulas and `SPEC` files.
//!
//! ```text
//! formula := impl
//! impl    := disj ("->" impl)?
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "!" unary | ("AX"|"EX"|"AF"|"EF"|"AG"|"EG") unary
//!          | ("A"|"E") "[" formula "U" formula "]" | "(" formula ")"
//!          | "true" | "false" | atom
//! atom    := ident ("." ident)* (cmp value)?
//! ```
//!
//! Comparison atoms are folded into a single [`Formula::Atom`] whose name
//! has the whitespace removed, e.g. `light0.wait <= 54` becomes
//! `Atom("light0.wait<=54")`. The Unicode arrows `→`, `≤`, `≥` and `≠`
//! are accepted as aliases.

use std::fmt;

use thiserror::Error;

use super::formula::{CmpOp, Formula};
use super::SpecEntry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: expected {}, found {}",
            self.line,
            self.column,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Dot,
    Colon,
    Cmp(CmpOp),
    Bang,
    Amp,
    Pipe,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(s) => format!("'{s}'"),
            Tok::Dot => "'.'".into(),
            Tok::Colon => "':'".into(),
            Tok::Cmp(op) => format!("'{op}'"),
            Tok::Bang => "'!'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const TEMPORAL: [&str; 6] = ["AX", "EX", "AF", "EF", "AG", "EG"];
const RESERVED: [&str; 11] = ["true", "false", "AX", "EX", "AF", "EF", "AG", "EG", "A", "E", "U"];

fn lex(text: &str, first_line: usize) -> Result<Vec<Token>, SyntaxError> {
    let mut tokens = Vec::new();
    let mut line = first_line;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tok_line, tok_column) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                Tok::Int(s)
            }
            _ => {
                bump(&mut chars);
                let next = chars.peek().copied();
                let mut two = |tok: Tok| {
                    bump(&mut chars);
                    tok
                };
                match (c, next) {
                    ('-', Some('>')) => two(Tok::Arrow),
                    ('!', Some('=')) => two(Tok::Cmp(CmpOp::Ne)),
                    ('<', Some('=')) => two(Tok::Cmp(CmpOp::Le)),
                    ('>', Some('=')) => two(Tok::Cmp(CmpOp::Ge)),
                    ('-', Some(d)) if d.is_ascii_digit() => {
                        let mut s = String::from("-");
                        while let Some(&c) = chars.peek() {
                            if c.is_ascii_digit() {
                                s.push(bump(&mut chars));
                            } else {
                                break;
                            }
                        }
                        Tok::Int(s)
                    }
                    ('→', _) => Tok::Arrow,
                    ('≤', _) => Tok::Cmp(CmpOp::Le),
                    ('≥', _) => Tok::Cmp(CmpOp::Ge),
                    ('≠', _) => Tok::Cmp(CmpOp::Ne),
                    ('=', _) => Tok::Cmp(CmpOp::Eq),
                    ('<', _) => Tok::Cmp(CmpOp::Lt),
                    ('>', _) => Tok::Cmp(CmpOp::Gt),
                    ('!', _) => Tok::Bang,
                    ('&', _) => Tok::Amp,
                    ('|', _) => Tok::Pipe,
                    ('(', _) => Tok::LParen,
                    (')', _) => Tok::RParen,
                    ('[', _) => Tok::LBracket,
                    (']', _) => Tok::RBracket,
                    ('.', _) => Tok::Dot,
                    (':', _) => Tok::Colon,
                    (other, _) => {
                        return Err(SyntaxError {
                            line: tok_line,
                            column: tok_column,
                            expected: vec!["a formula token".into()],
                            found: format!("'{other}'"),
                        })
                    }
                }
            }
        };
        tokens.push(Token {
            tok,
            line: tok_line,
            column: tok_column,
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn advance(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let t = &self.tokens[self.pos];
        SyntaxError {
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.advance();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.advance();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.advance();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(word) => match word.as_str() {
                "true" => {
                    self.advance();
                    Ok(Formula::True)
                }
                "false" => {
                    self.advance();
                    Ok(Formula::False)
                }
                w if TEMPORAL.contains(&w) => {
                    self.advance();
                    let inner = self.unary()?;
                    Ok(match w {
                        "AX" => Formula::ax(inner),
                        "EX" => Formula::ex(inner),
                        "AF" => Formula::af(inner),
                        "EF" => Formula::ef(inner),
                        "AG" => Formula::ag(inner),
                        _ => Formula::eg(inner),
                    })
                }
                "A" | "E" if *self.peek_at(1) == Tok::LBracket => {
                    let universal = word == "A";
                    self.advance();
                    self.advance();
                    let lhs = self.formula()?;
                    if !self.is_keyword("U") {
                        return Err(self.error(&["'U'", "'&'", "'|'", "'->'"]));
                    }
                    self.advance();
                    let rhs = self.formula()?;
                    self.expect(Tok::RBracket, "']'")?;
                    Ok(if universal {
                        Formula::au(lhs, rhs)
                    } else {
                        Formula::eu(lhs, rhs)
                    })
                }
                w if RESERVED.contains(&w) => Err(self.error(&["a formula"])),
                _ => self.atom(),
            },
            _ => Err(self.error(&["'!'", "'('", "a temporal operator", "'true'", "'false'", "an atom"])),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let mut name = match self.advance() {
            Tok::Ident(s) => s,
            _ => unreachable!("atom() is only entered on an identifier"),
        };
        while *self.peek() == Tok::Dot {
            self.advance();
            match self.advance() {
                Tok::Ident(s) => {
                    name.push('.');
                    name.push_str(&s);
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.error(&["an identifier"]));
                }
            }
        }
        if let Tok::Cmp(op) = *self.peek() {
            self.advance();
            let value = match self.peek().clone() {
                Tok::Ident(s) | Tok::Int(s) => {
                    self.advance();
                    s
                }
                _ => return Err(self.error(&["an identifier", "an integer"])),
            };
            name.push_str(op.as_str());
            name.push_str(&value);
        }
        Ok(Formula::Atom(name))
    }
}

fn parse_tokens(tokens: Vec<Token>) -> Result<Formula, SyntaxError> {
    let mut parser = Parser { tokens, pos: 0 };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(&["'&'", "'|'", "'->'", "end of input"]));
    }
    Ok(f)
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    parse_tokens(lex(text, 1)?)
}

/// Parses a line-oriented spec file: one `SPEC [name:] formula` per line,
/// `--` starts a comment, blank lines are skipped.
pub fn parse_spec_file(text: &str) -> Result<Vec<SpecEntry>, SyntaxError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find("--") {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = lex(line, line_no)?;
        match tokens.first() {
            Some(Token {
                tok: Tok::Ident(kw), ..
            }) if kw == "SPEC" => {}
            _ => {
                let parser = Parser { tokens, pos: 0 };
                return Err(parser.error(&["'SPEC'"]));
            }
        }
        let mut skip = 1;
        let mut name = None;
        if let (Some(Tok::Ident(n)), Some(Tok::Colon)) = (tokens.get(1).map(|t| &t.tok), tokens.get(2).map(|t| &t.tok))
        {
            name = Some(n.clone());
            skip = 3;
        }
        // the formula text starts at the column of its first token
        let start_col = tokens[skip].column;
        let source_text = line.chars().skip(start_col - 1).collect::<String>().trim().to_string();
        tokens.drain(..skip);
        let formula = parse_tokens(tokens)?;
        entries.push(SpecEntry {
            name,
            source_text,
            formula,
        });
    }
    Ok(entries)
}
