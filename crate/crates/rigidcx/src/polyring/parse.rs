//! Parser for polynomial expressions such as `x^2 - 3*x*y + 1/2`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{Poly, PolyCtx};
use crate::error::{Error, Result};
use crate::exactlin::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[st..i].iter().collect();
            out.push((Tok::Num(text.parse().expect("digits")), st));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[st..i].iter().collect()), st));
        } else if "+-*^()/".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(perr(i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

fn perr(col: usize, message: String) -> Error {
    Error::Parse {
        line: 1,
        column: col + 1,
        message,
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a PolyCtx,
    names: &'a [String],
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.len)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            neg = true;
        } else if self.peek() == Some(&Tok::Op('+')) {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg(self.ctx);
        }
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(self.ctx, &t);
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(self.ctx, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(self.ctx, &f);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let col = self.col();
                    let f = self.factor()?;
                    let c = f
                        .constant_value()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| perr(col, "division only by nonzero constants".into()))?;
                    if !self.ctx.base.is_unit(&c) && self.ctx.base.is_field() {
                        return Err(perr(col, "divisor is not invertible".into()));
                    }
                    acc = acc.scale(self.ctx, &self.ctx.div_coeff(&Q::from_integer(1.into()), &c));
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    let f = self.factor()?;
                    acc = acc.mul(self.ctx, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Op('^')) {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| perr(col, "exponent too large".into()))?;
                    Ok(base.pow(self.ctx, e))
                }
                _ => Err(perr(col, "expected a non-negative integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.ctx, Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.names.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(self.ctx, i)),
                    None => Err(perr(col, format!("undefined symbol {name}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(perr(self.col(), "expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                let f = self.factor()?;
                Ok(f.neg(self.ctx))
            }
            _ => Err(perr(col, "malformed polynomial".into())),
        }
    }
}

/// Parses a polynomial over the given variable names. Errors carry a 1-based column on
/// line 1; callers embedding the text elsewhere shift the position.
pub fn parse_poly(ctx: &PolyCtx, names: &[String], text: &str) -> Result<Poly> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ctx,
        names,
        len: text.chars().count(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(p.col(), "unexpected trailing input".into()));
    }
    Ok(e)
}
