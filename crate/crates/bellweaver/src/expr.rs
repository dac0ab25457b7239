//! Projector expressions such as `|1> - i*|3>` or `exp(i 1.5708)*|-3> + |3>`.
//!
//! ```text
//! expr  := [sign] term (("+" | "-") term)*
//! term  := [coeff "*"] "|" int ">"
//! coeff := real | "i" | "exp(" "i" ["*"] [sign] real ")"
//! ```
//!
//! Whitespace is ignored. Positions in errors are 1-based character columns.

use std::collections::BTreeMap;
use std::fmt;

use bellweaver_core::modes::{Path, Pol, SingleModeLabel, SinglePhotonState};
use bellweaver_core::C64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// Offending token text; empty at end of input.
    pub token: String,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.token.is_empty() {
            write!(f, "{} at end of input (position {})", self.message, self.position)
        } else {
            write!(f, "{}: unexpected '{}' at position {}", self.message, self.token, self.position)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Bar,
    Gt,
    LParen,
    RParen,
    Number(f64),
    Ident(String),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    text: String,
    pos: usize,
}

fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '|' => Some(Tok::Bar),
            '>' => Some(Tok::Gt),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, text: c.to_string(), pos });
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j], '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<f64>().map_err(|_| ParseError {
                message: "malformed number".into(),
                token: text.clone(),
                position: pos,
            })?;
            out.push(Token { tok: Tok::Number(value), text, pos });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Ident(text.clone()), text, pos });
        } else {
            return Err(ParseError { message: "unrecognized character".into(), token: c.to_string(), position: pos });
        }
    }
    out.push(Token { tok: Tok::End, text: String::new(), pos: chars.len() + 1 });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, message: &str) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError { message: message.into(), token: t.text.clone(), position: t.pos })
    }

    fn expect(&mut self, tok: Tok, message: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(message)
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == name)
    }

    fn expr(&mut self) -> Result<Vec<(i32, C64)>, ParseError> {
        let mut terms = Vec::new();
        let mut sign = 1.0;
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                sign = -1.0;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let (l, c) = self.term()?;
            terms.push((l, c * sign));
            sign = match self.peek().tok {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                Tok::End => break,
                _ => return self.fail("expected '+', '-' or end of expression"),
            };
            self.bump();
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(i32, C64), ParseError> {
        let coeff = if self.peek().tok == Tok::Bar {
            C64::new(1.0, 0.0)
        } else {
            let c = self.coeff()?;
            self.expect(Tok::Star, "expected '*' after coefficient")?;
            c
        };
        self.expect(Tok::Bar, "expected '|' to open a ket")?;
        let l = self.int()?;
        self.expect(Tok::Gt, "expected '>' to close the ket")?;
        Ok((l, coeff))
    }

    fn coeff(&mut self) -> Result<C64, ParseError> {
        match self.peek().tok.clone() {
            Tok::Number(x) => {
                self.bump();
                Ok(C64::new(x, 0.0))
            }
            Tok::Ident(_) if self.is_ident("i") => {
                self.bump();
                Ok(C64::new(0.0, 1.0))
            }
            Tok::Ident(_) if self.is_ident("exp") => {
                self.bump();
                self.expect(Tok::LParen, "expected '(' after exp")?;
                if !self.is_ident("i") {
                    return self.fail("expected 'i' inside exp(...)");
                }
                self.bump();
                if self.peek().tok == Tok::Star {
                    self.bump();
                }
                let phase = self.signed_real()?;
                self.expect(Tok::RParen, "expected ')' to close exp(...)")?;
                Ok(C64::from_polar(1.0, phase))
            }
            _ => self.fail("expected a coefficient or '|'"),
        }
    }

    fn signed_real(&mut self) -> Result<f64, ParseError> {
        let sign = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                -1.0
            }
            Tok::Plus => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        match self.peek().tok {
            Tok::Number(x) => {
                self.bump();
                Ok(sign * x)
            }
            _ => self.fail("expected a real number"),
        }
    }

    fn int(&mut self) -> Result<i32, ParseError> {
        let sign = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(_) if t.text.bytes().all(|b| b.is_ascii_digit()) => {
                let v: i32 = t.text.parse().map_err(|_| ParseError {
                    message: "OAM index out of range".into(),
                    token: t.text.clone(),
                    position: t.pos,
                })?;
                self.bump();
                Ok(sign * v)
            }
            _ => self.fail("expected an integer OAM index"),
        }
    }
}

/// Parses an expression into merged `(ℓ, amplitude)` terms in OAM order,
/// without normalization.
pub fn parse_terms(input: &str) -> Result<Vec<(i32, C64)>, ParseError> {
    let mut p = Parser { tokens: lex(input)?, at: 0 };
    if p.peek().tok == Tok::End {
        return p.fail("empty expression");
    }
    let mut merged: BTreeMap<i32, C64> = BTreeMap::new();
    for (l, c) in p.expr()? {
        *merged.entry(l).or_default() += c;
    }
    Ok(merged.into_iter().collect())
}

/// Parses a normalized horizontally polarized detector state on `path`.
pub fn parse_projector(input: &str, path: Path) -> Result<SinglePhotonState, ParseError> {
    let terms = parse_terms(input)?;
    let state = SinglePhotonState::from_terms(terms.into_iter().map(|(l, c)| (SingleModeLabel::new(path, Pol::H, l), c)));
    state.normalized().map_err(|_| ParseError {
        message: "expression has zero norm".into(),
        token: String::new(),
        position: input.chars().count() + 1,
    })
}
