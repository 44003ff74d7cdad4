//! Text form of polynomials.
//!
//! Grammar: sums and differences of products of factors; a factor is a rational
//! literal, a variable, `i` (the imaginary unit ζ), or a parenthesised
//! expression, optionally raised to `^n`, `^-n` or `^(p/q)`. Display names of
//! square-root variables accept half-integer exponents (`t^(1/2)`); internal
//! names are accepted as well. Division is exact division in the Laurent ring.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::context::VarContext;
use super::gauss::GaussRational;
use super::poly::{exponent, MultiLaurent, ONE_KEY};
use super::rat::Rat;
use super::LaurentError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, LaurentError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(LaurentError::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    ctx: &'a Arc<VarContext>,
    bindings: &'a [(&'a str, MultiLaurent)],
}

enum Atom {
    Poly(MultiLaurent),
    /// A display variable with the given internal index and root.
    Display(usize, u8),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LaurentError> {
        Err(LaurentError::Parse { pos: self.here(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiLaurent, LaurentError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc.add_assign_ref(&t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc.sub_assign_ref(&t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiLaurent, LaurentError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let f = self.unary()?;
                acc = acc.mul_ref(&f);
            } else if self.eat('/') {
                let at = self.here();
                let f = self.unary()?;
                if f.is_zero() {
                    return Err(LaurentError::Parse { pos: at, msg: "division by zero".into() });
                }
                acc = acc
                    .div_exact(&f)
                    .ok_or(LaurentError::Parse { pos: at, msg: "division is not exact in the Laurent ring".into() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiLaurent, LaurentError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg_ref());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn int(&mut self) -> Result<i64, LaurentError> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let v: i64 = i64::try_from(n).or_else(|_| self.err("exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn exponent(&mut self) -> Result<Rat, LaurentError> {
        if self.eat('(') {
            let p = self.int()?;
            let q = if self.eat('/') { self.int()? } else { 1 };
            if q == 0 {
                return self.err("zero denominator in exponent");
            }
            if !self.eat(')') {
                return self.err("expected `)`");
            }
            Ok(Rat::new(p, q))
        } else if self.eat('-') {
            if self.eat('(') {
                self.pos -= 1;
                Ok(self.exponent()?.neg())
            } else {
                Ok(Rat::from_int(-self.int()?))
            }
        } else {
            Ok(Rat::from_int(self.int()?))
        }
    }

    fn power(&mut self) -> Result<MultiLaurent, LaurentError> {
        let at = self.here();
        let atom = self.atom()?;
        let e = if self.eat('^') { Some(self.exponent()?) } else { None };
        let bad = |msg: &str| LaurentError::Parse { pos: at, msg: msg.to_string() };
        match atom {
            Atom::Display(i, root) => {
                let e = e.unwrap_or(Rat::one()).mul(&Rat::from_int(root as i64));
                if !e.is_integer() {
                    return Err(bad("fractional exponent does not match the variable's root"));
                }
                let k = match e {
                    Rat::Small(n, 1) if n.abs() < 1 << 14 => n as i32,
                    _ => return Err(bad("exponent out of range")),
                };
                let mut ex = vec![0; self.ctx.len()];
                ex[i] = k;
                Ok(MultiLaurent::monomial(self.ctx, GaussRational::one(), &ex))
            }
            Atom::Poly(p) => match e {
                None => Ok(p),
                Some(Rat::Small(n, 1)) if n.abs() < 1 << 14 => p.pow(n as i32).map_err(|_| bad("negative power of a non-monomial")),
                Some(_) => Err(bad("non-integer exponent")),
            },
        }
    }

    fn atom(&mut self) -> Result<Atom, LaurentError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Atom::Poly(MultiLaurent::constant(self.ctx, GaussRational::real(Rat::from_bigints(n, BigInt::from(1))))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some((_, v)) = self.bindings.iter().find(|(n, _)| *n == name) {
                    return Ok(Atom::Poly(v.clone()));
                }
                if name == "i" || name == "zeta" {
                    return Ok(Atom::Poly(MultiLaurent::zeta(self.ctx)));
                }
                if let Some(j) = self.ctx.index_of_display(&name) {
                    return Ok(Atom::Display(j, self.ctx.vars()[j].root));
                }
                if let Some(j) = self.ctx.index_of(&name) {
                    return Ok(Atom::Display(j, 1));
                }
                Err(LaurentError::UnknownVariable(name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(Atom::Poly(e))
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

impl MultiLaurent {
    /// Parse a polynomial in `ctx`.
    pub fn parse(ctx: &Arc<VarContext>, s: &str) -> Result<Self, LaurentError> {
        Self::parse_with(ctx, s, &[])
    }

    /// Parse with extra named constants or expressions (e.g. `r`).
    pub fn parse_with(ctx: &Arc<VarContext>, s: &str, bindings: &[(&str, MultiLaurent)]) -> Result<Self, LaurentError> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(LaurentError::Parse { pos: 0, msg: "empty expression".into() });
        }
        let mut p = Parser { toks, pos: 0, len: s.len(), ctx, bindings };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

fn fmt_monomial(ctx: &VarContext, k: u64) -> String {
    let mut parts = Vec::new();
    for (i, v) in ctx.vars().iter().enumerate() {
        let e = exponent(k, i);
        if e == 0 {
            continue;
        }
        let r = v.root as i32;
        let s = if e % r == 0 {
            let q = e / r;
            if q == 1 {
                v.display.clone()
            } else {
                format!("{}^{}", v.display, q)
            }
        } else {
            format!("{}^({}/{})", v.display, e, r)
        };
        parts.push(s);
    }
    parts.join("*")
}

impl fmt::Display for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.raw_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in terms.iter().enumerate() {
            let neg = c.leading_negative();
            let mag = if neg { c.neg() } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if *k == ONE_KEY {
                write!(f, "{mag}")?;
            } else {
                let m = fmt_monomial(self.ctx(), *k);
                if mag.is_one() {
                    write!(f, "{m}")?;
                } else {
                    write!(f, "{mag}*{m}")?;
                }
            }
        }
        Ok(())
    }
}
