//! Parser for the plain-text system format.
//!
//! Line 1 is `vars:` followed by whitespace-separated identifiers. Every
//! later non-empty line that does not start with `#` is one polynomial
//! expression built from identifiers, decimal literals, `+ - * ^` and
//! parentheses. Multiplication must be written explicitly (`x*y`, never
//! `xy`). An `expr = expr` line is rewritten as `left - right`. Expressions
//! are expanded to canonical form while parsing.

use super::{PolySystem, Polynomial};
use crate::C64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Plus,
    Minus,
    Star,
    Caret,
    Equals,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let col = self.col();
            match c {
                b' ' | b'\t' | b'\r' => self.pos += 1,
                b'+' => {
                    out.push((Tok::Plus, col));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((Tok::Minus, col));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((Tok::Star, col));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((Tok::Caret, col));
                    self.pos += 1;
                }
                b'=' => {
                    out.push((Tok::Equals, col));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((Tok::LParen, col));
                    self.pos += 1;
                }
                b')' => {
                    out.push((Tok::RParen, col));
                    self.pos += 1;
                }
                b'0'..=b'9' | b'.' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && matches!(self.src[self.pos], b'0'..=b'9' | b'.')
                    {
                        self.pos += 1;
                    }
                    // Optional exponent part of a float literal.
                    if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
                        let mut k = self.pos + 1;
                        if k < self.src.len() && matches!(self.src[k], b'+' | b'-') {
                            k += 1;
                        }
                        if k < self.src.len() && self.src[k].is_ascii_digit() {
                            self.pos = k;
                            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit()
                            {
                                self.pos += 1;
                            }
                        }
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    match text.parse::<f64>() {
                        Ok(v) if v.is_finite() => out.push((Tok::Number(v), col)),
                        _ => return err(self.line, col, format!("bad number literal '{text}'")),
                    }
                }
                b'A'..=b'Z' | b'a'..=b'z' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && matches!(self.src[self.pos],
                            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'_')
                    {
                        self.pos += 1;
                    }
                    let text =
                        std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                    out.push((Tok::Ident(text), col));
                }
                other => {
                    return err(
                        self.line,
                        col,
                        format!("unexpected character '{}'", other as char),
                    )
                }
            }
        }
        Ok(out)
    }
}

struct ExprParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    line_len: usize,
    vars: &'a [String],
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn cur_col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.line_len + 1)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t);
        self.pos += 1;
        t
    }

    // expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t).expect("same nvars");
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t).expect("same nvars");
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f).expect("same nvars");
        }
        Ok(acc)
    }

    // factor := ['-'] atom ('^' exponent)?
    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let mut base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let col = self.cur_col();
            match self.bump() {
                Some(Tok::Number(v)) => {
                    let v = *v;
                    if v.fract() != 0.0 || v < 0.0 || v > u32::MAX as f64 {
                        return err(
                            self.line,
                            col,
                            format!("exponent must be a non-negative integer, got {v}"),
                        );
                    }
                    base = base.pow(v as u32);
                }
                _ => {
                    return err(self.line, col, "exponent must be a non-negative integer")
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let col = self.cur_col();
        match self.bump().cloned() {
            Some(Tok::Number(v)) => {
                Ok(Polynomial::constant(C64::new(v, 0.0), self.vars.len()))
            }
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Polynomial::var(i, self.vars.len()).expect("index in range")),
                None => err(self.line, col, format!("unknown identifier '{name}'")),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => err(self.line, self.cur_col() - 1, "expected ')'"),
                }
            }
            Some(other) => err(self.line, col, format!("unexpected token {other:?}")),
            None => err(self.line, col, "unexpected end of expression"),
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a system file into canonical expanded form.
pub fn parse_system(text: &str) -> Result<PolySystem, ParseError> {
    let mut lines = text.lines().enumerate();
    let mut var_names: Option<Vec<String>> = None;
    let mut polys = Vec::new();

    for (idx, raw) in &mut lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if var_names.is_none() {
            let rest = match line.strip_prefix("vars:") {
                Some(rest) => rest,
                None => return err(lineno, 1, "first line must start with 'vars:'"),
            };
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return err(lineno, 6, "no variables declared");
            }
            for n in &names {
                if !is_ident(n) {
                    return err(lineno, 1, format!("invalid variable name '{n}'"));
                }
            }
            for (i, n) in names.iter().enumerate() {
                if names[..i].contains(n) {
                    return err(lineno, 1, format!("duplicate variable name '{n}'"));
                }
            }
            var_names = Some(names);
            continue;
        }

        let vars = var_names.as_ref().unwrap();
        let toks = Lexer::new(raw, lineno).tokens()?;
        // "lhs = rhs" is rewritten as lhs - rhs.
        let eq_positions: Vec<usize> = toks
            .iter()
            .enumerate()
            .filter(|(_, (t, _))| *t == Tok::Equals)
            .map(|(i, _)| i)
            .collect();
        let poly = match eq_positions.len() {
            0 => parse_full_expr(&toks, lineno, raw.len(), vars)?,
            1 => {
                let split = eq_positions[0];
                let lhs = parse_full_expr(&toks[..split], lineno, raw.len(), vars)?;
                let rhs = parse_full_expr(&toks[split + 1..], lineno, raw.len(), vars)?;
                lhs.sub(&rhs).expect("same nvars")
            }
            _ => {
                let (_, col) = toks[eq_positions[1]];
                return err(lineno, col, "more than one '=' in equation");
            }
        };
        polys.push(poly);
    }

    let var_names = match var_names {
        Some(v) => v,
        None => return err(1, 1, "empty input: expected a 'vars:' line"),
    };
    Ok(PolySystem { var_names, polys })
}

fn parse_full_expr(
    toks: &[(Tok, usize)],
    line: usize,
    line_len: usize,
    vars: &[String],
) -> Result<Polynomial, ParseError> {
    let mut p = ExprParser { toks, pos: 0, line, line_len, vars };
    let poly = p.expr()?;
    if p.pos != toks.len() {
        let (t, col) = &toks[p.pos];
        return err(line, *col, format!("unexpected token {t:?} after expression"));
    }
    Ok(poly)
}
