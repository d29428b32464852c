//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! expr    := or ( "->" expr )?
//! or      := and ( "|" or )?
//! and     := unary ( "&" and )?
//! unary   := "!" unary | coal "X" unary | coal "G" unary | coal "F" unary
//!          | coal "(" expr "U" expr ")" | primary
//! primary := "p" digits | alias | "true" | "false" | "(" expr ")"
//! coal    := "<<" ( int ( "," int )* )? ">>"
//! ```

use std::collections::HashMap;

use thiserror::Error;

use super::{Coalition, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    OpenCoal,
    CloseCoal,
    Comma,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Int(usize),
    Ident(String),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::OpenCoal => "'<<'".into(),
            Tok::CloseCoal => "'>>'".into(),
            Tok::Comma => "','".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    let err = |line, column, message: String| ParseError { line, column, message };

    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let ch = chars.next();
            if ch == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            ch
        };
        if ch.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match ch {
            '<' => {
                bump(&mut chars);
                if bump(&mut chars) != Some('<') {
                    return Err(err(l, c, "expected '<<'".into()));
                }
                Tok::OpenCoal
            }
            '>' => {
                bump(&mut chars);
                if bump(&mut chars) != Some('>') {
                    return Err(err(l, c, "expected '>>'".into()));
                }
                Tok::CloseCoal
            }
            '-' => {
                bump(&mut chars);
                if bump(&mut chars) != Some('>') {
                    return Err(err(l, c, "expected '->'".into()));
                }
                Tok::Arrow
            }
            ',' | '(' | ')' | '!' | '&' | '|' => {
                bump(&mut chars);
                match ch {
                    ',' => Tok::Comma,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '!' => Tok::Bang,
                    '&' => Tok::Amp,
                    _ => Tok::Pipe,
                }
            }
            d if d.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                let n = s.parse().map_err(|_| err(l, c, format!("number '{s}' too large")))?;
                Tok::Int(n)
            }
            a if a.is_alphabetic() || a == '_' => {
                let mut s = String::new();
                while let Some(&a) = chars.peek() {
                    if !(a.is_alphanumeric() || a == '_') {
                        break;
                    }
                    s.push(a);
                    bump(&mut chars);
                }
                Tok::Ident(s)
            }
            other => return Err(err(l, c, format!("unexpected character '{other}'"))),
        };
        out.push(Spanned { tok, line: l, column: c });
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    aliases: &'a HashMap<String, usize>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, column: t.column, message: message.into() }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn expr(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.expr()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.and()?;
        if *self.peek() == Tok::Pipe {
            self.advance();
            let rhs = self.or()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Amp {
            self.advance();
            let rhs = self.and()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::OpenCoal => {
                let coalition = self.coalition()?;
                self.temporal(coalition)
            }
            _ => self.primary(),
        }
    }

    fn coalition(&mut self) -> Result<Coalition, ParseError> {
        self.expect(Tok::OpenCoal)?;
        let mut members = Vec::new();
        if *self.peek() != Tok::CloseCoal {
            loop {
                match self.peek().clone() {
                    Tok::Int(n) => {
                        if members.contains(&n) {
                            return Err(self.error_here(format!("agent {n} listed twice")));
                        }
                        self.advance();
                        members.push(n);
                    }
                    other => return Err(self.error_here(format!("expected agent index, found {}", other.describe()))),
                }
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::CloseCoal)?;
        Ok(Coalition::new(members).expect("duplicates rejected above"))
    }

    fn temporal(&mut self, c: Coalition) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(op) if op == "X" || op == "G" || op == "F" => {
                self.advance();
                let body = self.unary()?;
                Ok(match op.as_str() {
                    "X" => Formula::next(c, body),
                    "G" => Formula::globally(c, body),
                    _ => Formula::eventually(c, body),
                })
            }
            Tok::LParen => {
                self.advance();
                let lhs = self.expr()?;
                match self.peek() {
                    Tok::Ident(u) if u == "U" => {
                        self.advance();
                    }
                    other => return Err(self.error_here(format!("expected 'U', found {}", other.describe()))),
                }
                let rhs = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::until(c, lhs, rhs))
            }
            other => {
                Err(self
                    .error_here(format!("expected 'X', 'G', 'F' or '(' after coalition, found {}", other.describe())))
            }
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let f = match name.as_str() {
                    "true" => Formula::True,
                    "false" => Formula::False,
                    "X" | "G" | "F" | "U" => {
                        return Err(self.error_here(format!("temporal operator '{name}' must follow a coalition")))
                    }
                    _ => {
                        if let Some(&i) = self.aliases.get(&name) {
                            Formula::Prop(i)
                        } else if let Some(i) = prop_index(&name) {
                            Formula::Prop(i)
                        } else {
                            return Err(self.error_here(format!("unknown proposition '{name}'")));
                        }
                    }
                };
                self.advance();
                Ok(f)
            }
            other => Err(self.error_here(format!("expected formula, found {}", other.describe()))),
        }
    }
}

fn prop_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('p')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with_aliases(text, &HashMap::new())
}

/// Parses with extra proposition names, e.g. `p -> 0`, `q -> 1`.
pub fn parse_formula_with_aliases(text: &str, aliases: &HashMap<String, usize>) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, aliases };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error_here(format!("unexpected {}", p.peek().describe())));
    }
    Ok(f)
}
