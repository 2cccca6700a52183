//! Reading operators written as `sigma^2 - (q^2*x + 1)*sigma + q*x`.
//!
//! Products are skew products, so `sigma*x` and `x*sigma` differ. Tokens are the
//! ring's generator name (`sigma`, `dq`, `sigmap`, …), its variable (`x` or `z`),
//! `q`, `p` = 1/q, and `qt` for the chosen root q̃ when the field is an extension.

use crate::arith::{RatFun, Scalar};
use crate::error::{Error, Result};

use super::operator::{Form, SkewOp, SkewRing};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().map_err(|_| Error::Parse(format!("number too large: {txt}")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' at {i}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a SkewRing,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SkewOp> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SkewOp> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.order() != 0 || d.is_zero() {
                    return Err(Error::Parse("division only by a nonzero function of the variable".into()));
                }
                acc = acc.mul(&self.ring.elem(d.coeff(0).inv()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SkewOp> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let v = match self.toks.get(self.pos) {
            Some(Tok::Num(v)) => *v,
            _ => return Err(Error::Parse("expected an integer exponent".into())),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(Error::Parse("missing ')' after exponent".into()));
        }
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self) -> Result<SkewOp> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let k = self.exponent()?;
        if k >= 0 {
            return Ok(base.pow(k as u32));
        }
        if base.order() != 0 || base.is_zero() {
            return Err(Error::Parse("negative powers only of nonzero functions".into()));
        }
        Ok(self.ring.elem(base.coeff(0).pow(k)))
    }

    fn atom(&mut self) -> Result<SkewOp> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(self.ring.scalar(Scalar::from_i64(v))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Tok::Sym(c) => Err(Error::Parse(format!("unexpected '{c}'"))),
            Tok::Ident(name) => self.ident(&name),
        }
    }

    fn ident(&self, name: &str) -> Result<SkewOp> {
        let r = self.ring;
        let field = r.field;
        if name == r.gen_name() || (r.form == Form::Sigma && name == "sigma_q" && r.twist == field.q()) {
            return Ok(r.gen());
        }
        if name == r.var_name() {
            return Ok(r.var_op());
        }
        match name {
            "q" => Ok(r.scalar(field.q())),
            "p" => Ok(r.scalar(field.p())),
            "qt" => Ok(r.scalar(field.qt())),
            "sigma" | "dq" | "sigmap" | "dp" | "sigmaqt" | "dqt" | "sigmapt" | "dpt" => Err(Error::Parse(format!(
                "generator '{name}' does not belong to this ring (expected '{}')",
                r.gen_name()
            ))),
            _ => Err(Error::Parse(format!("unknown symbol '{name}'"))),
        }
    }
}

/// Parse an operator in the given ring.
pub fn parse_operator(text: &str, ring: &SkewRing) -> Result<SkewOp> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty operator".into()));
    }
    let mut p = Parser { toks, pos: 0, ring };
    let op = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input after token {}", p.pos)));
    }
    Ok(op)
}

/// Parse a rational function of the ring's variable.
pub fn parse_ratfun(text: &str, ring: &SkewRing) -> Result<RatFun> {
    let op = parse_operator(text, ring)?;
    match op.order() {
        0 => Ok(op.coeff(0)),
        _ => Err(Error::Parse(format!("'{text}' involves the generator"))),
    }
}

/// Guess the form from the generator token used, defaulting to σ.
pub fn detect_form(text: &str) -> Form {
    let toks = lex(text).unwrap_or_default();
    let has_d = toks.iter().any(|t| matches!(t, Tok::Ident(s) if s.starts_with('d')));
    if has_d {
        Form::Dq
    } else {
        Form::Sigma
    }
}
