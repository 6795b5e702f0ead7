//! Parser for the prescribed-function term language.
//!
//! ```text
//! spec   := ['+' | '-'] term (('+' | '-') term)*
//! term   := [number '*'] atom | number
//! atom   := 'const' number
//!         | 'mono' number factor*          factor := ('x'|'y'|'z')+ ['^' integer]
//!         | 'bump' number ['@'] number ',' number ',' number
//!         | 'legendre' integer number
//! ```
//!
//! Numbers may carry their own sign inside an atom. A bare number is a
//! constant term.

use super::function::Term;
use crate::error::{Error, Result};
use crate::sphere::normalized;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Word(String),
    Plus,
    Minus,
    Star,
    At,
    Comma,
    Caret,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '@' => Some(Tok::At),
            ',' => Some(Tok::Comma),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = single {
            out.push((i, t));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let v: f64 = text
                .parse()
                .map_err(|_| Error::Parse { pos: start, msg: format!("malformed number '{text}'") })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push((start, Tok::Word(src[start..i].to_ascii_lowercase())));
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<f64> {
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected a number"),
        }
    }

    fn integer(&mut self) -> Result<u32> {
        let at = self.here();
        let v = self.number()?;
        if v < 0.0 || v.fract() != 0.0 || v > 1e6 {
            return Err(Error::Parse { pos: at, msg: format!("expected a nonnegative integer, got {v}") });
        }
        Ok(v as u32)
    }

    fn spec(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(&Tok::Minus) {
            -1.0
        } else {
            self.eat(&Tok::Plus);
            1.0
        };
        loop {
            terms.push(self.term(sign)?);
            match self.bump() {
                None => break,
                Some(Tok::Plus) => sign = 1.0,
                Some(Tok::Minus) => sign = -1.0,
                Some(_) => {
                    self.pos -= 1;
                    return self.err("expected '+' or '-' between terms");
                }
            }
        }
        Ok(terms)
    }

    fn term(&mut self, sign: f64) -> Result<Term> {
        let mut factor = sign;
        if self.peek() == Some(&Tok::Minus)
            && matches!(self.toks.get(self.pos + 1), Some((_, Tok::Num(_))))
        {
            self.pos += 1;
            factor = -factor;
        }
        if let Some(Tok::Num(v)) = self.peek() {
            let v = *v;
            self.pos += 1;
            if !self.eat(&Tok::Star) {
                return Ok(Term::Const { value: factor * v });
            }
            factor *= v;
        }
        let word = match self.bump() {
            Some(Tok::Word(w)) => w,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return self.err("expected a term: const, mono, bump or legendre");
            }
        };
        match word.as_str() {
            "const" => Ok(Term::Const { value: factor * self.number()? }),
            "mono" => {
                let coeff = factor * self.number()?;
                let mut powers = [0u32; 3];
                while let Some(Tok::Word(w)) = self.peek() {
                    let w = w.clone();
                    if w.is_empty() || !w.chars().all(|c| matches!(c, 'x' | 'y' | 'z')) {
                        break;
                    }
                    self.pos += 1;
                    let exp = if self.eat(&Tok::Caret) { self.integer()? } else { 1 };
                    let n = w.len();
                    for (k, c) in w.chars().enumerate() {
                        let e = if k + 1 == n { exp } else { 1 };
                        powers[(c as u8 - b'x') as usize] += e;
                    }
                }
                Ok(Term::Monomial { coeff, powers })
            }
            "bump" => {
                let sharpness = self.number()?;
                if sharpness < 0.0 {
                    return self.err("bump sharpness must be nonnegative");
                }
                self.eat(&Tok::At);
                let at = self.here();
                let a = self.number()?;
                if !self.eat(&Tok::Comma) {
                    return self.err("expected ',' in bump center");
                }
                let b = self.number()?;
                if !self.eat(&Tok::Comma) {
                    return self.err("expected ',' in bump center");
                }
                let c = self.number()?;
                let center = normalized([a, b, c])
                    .ok_or(Error::Parse { pos: at, msg: "bump center must be nonzero".into() })?;
                Ok(Term::Bump { amplitude: factor, sharpness, center })
            }
            "legendre" => {
                let degree = self.integer()? as usize;
                let coeff = factor * self.number()?;
                Ok(Term::Legendre { degree, coeff })
            }
            other => {
                self.pos -= 1;
                self.err(format!("unknown term '{other}'"))
            }
        }
    }
}

/// Parses a term-language string.
pub fn parse_terms(src: &str) -> Result<Vec<Term>> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty function specification".into() });
    }
    let mut p = Parser { toks, pos: 0, end: src.len() };
    p.spec()
}
