//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' exponent)?
//! exponent := ['-'] int | '(' ['-'] int ['/' int] ')'
//! atom   := number | 'i' | 'pi' | 't' | 'x'N | jet | ident
//!         | ident '(' expr {',' expr} ')' | ident '[' int {',' int} ']' '(' args ')'
//!         | '|' expr '|' | '(' expr ')'
//!         | ('conj'|'exp'|'cos'|'sin'|'ln'|'sgn') '(' expr ')'
//!         | 'atan2' '(' expr ',' expr ')' | 'inv' '(' expr ',' expr ')'
//!         | 'd' '(' expr ',' ('t' | 'x'N) ')'
//! jet    := 'psi' | 'psi_' ('t')* (digit)*
//! ```

use num_traits::{One, Zero};
use thiserror::Error;

use super::{diff, Expr, Jet, Rational, SymbolTable, VarId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { pos: usize, name: String },
}

/// Parses with no declared function symbols.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, &SymbolTable::new())
}

pub fn parse_with(text: &str, syms: &SymbolTable) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, syms };
    let e = p.expr()?;
    if p.i < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && i + 1 < b.len() && (b[i + 1] as char).is_ascii_digit()) {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let int_part = &s[start..i];
            let mut value = if int_part.is_empty() {
                Rational::zero()
            } else {
                Rational::from_integer(int_part.parse::<i64>().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: "integer literal out of range".into(),
                })?)
            };
            if i < b.len() && b[i] == b'.' {
                i += 1;
                let fs = i;
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let frac = &s[fs..i];
                if frac.len() > 15 {
                    return Err(ParseError::Syntax { pos: fs, msg: "too many decimal digits".into() });
                }
                if !frac.is_empty() {
                    let den = 10i64.pow(frac.len() as u32);
                    value += Rational::new(frac.parse::<i64>().unwrap(), den);
                }
            }
            out.push((start, Tok::Num(value)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()|,[]".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    syms: &'a SymbolTable,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.0).unwrap_or_else(|| self.toks.last().map(|t| t.0 + 1).unwrap_or(0))
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos(), msg: msg.to_string() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut fs = vec![self.unary()?];
        loop {
            if self.eat('*') {
                fs.push(self.unary()?);
            } else if self.eat('/') {
                fs.push(self.unary()?.recip());
            } else {
                break;
            }
        }
        Ok(Expr::product(fs))
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos();
        let (base, is_abs) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let r = self.exponent()?;
        if is_abs {
            return base.try_abs_pow(r).map_err(|msg| ParseError::Syntax { pos: start, msg });
        }
        if !r.is_integer() {
            return Err(ParseError::Syntax {
                pos: start,
                msg: "fractional exponents need an absolute-value base |..|".into(),
            });
        }
        Ok(base.pow(r.to_integer()))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.peek() {
            Some(Tok::Num(r)) if r.is_integer() => {
                let v = r.to_integer();
                self.i += 1;
                Ok(v)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        if self.eat('(') {
            let neg = self.eat('-');
            let num = self.int()?;
            let den = if self.eat('/') { self.int()? } else { 1 };
            if den == 0 {
                return Err(self.err("zero denominator"));
            }
            self.expect(')')?;
            let r = Rational::new(num, den);
            Ok(if neg { -r } else { r })
        } else {
            let neg = self.eat('-');
            let v = Rational::from_integer(self.int()?);
            Ok(if neg { -v } else { v })
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect('(')?;
        let mut v = vec![self.expr()?];
        while self.eat(',') {
            v.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(v)
    }

    fn one_arg(&mut self, name: &str) -> Result<Expr, ParseError> {
        let a = self.args()?;
        if a.len() != 1 {
            return Err(self.err(&format!("{name} takes one argument")));
        }
        Ok(a.into_iter().next().unwrap())
    }

    fn atom(&mut self) -> Result<(Expr, bool), ParseError> {
        let pos = self.pos();
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        match tok {
            Tok::Num(r) => {
                self.i += 1;
                Ok((Expr::rational(r), false))
            }
            Tok::Sym('(') => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok((e, false))
            }
            Tok::Sym('|') => {
                self.i += 1;
                let e = self.expr()?;
                self.expect('|')?;
                let a = e.try_abs_pow(Rational::one()).map_err(|msg| ParseError::Syntax { pos, msg })?;
                Ok((a, true))
            }
            Tok::Sym(c) => Err(self.err(&format!("unexpected `{c}`"))),
            Tok::Ident(name) => {
                self.i += 1;
                self.ident(&name, pos).map(|e| (e, false))
            }
        }
    }

    fn ident(&mut self, name: &str, pos: usize) -> Result<Expr, ParseError> {
        let syn = |msg: String| ParseError::Syntax { pos, msg };
        match name {
            "i" => return Ok(Expr::i()),
            "pi" => return Ok(Expr::pi()),
            "t" => return Ok(Expr::t()),
            "conj" => return Ok(self.one_arg(name)?.conj()),
            "exp" => return Ok(self.one_arg(name)?.exp()),
            "cos" => return Ok(self.one_arg(name)?.cos()),
            "sin" => return Ok(self.one_arg(name)?.sin()),
            "ln" => return self.one_arg(name)?.try_ln_abs().map_err(syn),
            "sgn" => return self.one_arg(name)?.try_sign().map_err(syn),
            "atan2" | "inv" | "d" => {
                let a = self.args()?;
                if a.len() != 2 {
                    return Err(syn(format!("{name} takes two arguments")));
                }
                return match name {
                    "atan2" => Expr::try_atan2(&a[0], &a[1]).map_err(syn),
                    "inv" => {
                        if !a[0].is_real() {
                            return Err(syn("inv needs a real map".into()));
                        }
                        Ok(Expr::inverse(&a[0], &a[1]))
                    }
                    _ => {
                        let v = match a[1].node() {
                            super::Node::Var(v @ (VarId::T | VarId::X(_))) => v.clone(),
                            _ => return Err(syn("d(e, v) needs v to be t or x<N>".into())),
                        };
                        Ok(diff(&a[0], &v))
                    }
                };
            }
            _ => {}
        }
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                let a: usize = rest.parse().map_err(|_| syn("bad space index".into()))?;
                if a == 0 {
                    return Err(syn("space indices start at 1".into()));
                }
                return Ok(Expr::x(a));
            }
        }
        if name == "psi" {
            return Ok(Expr::psi());
        }
        if let Some(suffix) = name.strip_prefix("psi_") {
            return parse_jet(suffix).map(Expr::jet).ok_or_else(|| syn(format!("bad jet name `{name}`")));
        }
        if let Some(d) = self.syms.definition(name) {
            return Ok(d.clone());
        }
        let sym = self
            .syms
            .get(name)
            .cloned()
            .ok_or_else(|| ParseError::UnknownSymbol { pos, name: name.to_string() })?;
        let mut deriv = vec![0u32; sym.arity];
        if self.eat('[') {
            let mut ks = vec![self.int()?];
            while self.eat(',') {
                ks.push(self.int()?);
            }
            self.expect(']')?;
            if ks.len() != sym.arity || ks.iter().any(|&k| k < 0) {
                return Err(syn(format!("derivative index of `{name}` must list {} orders", sym.arity)));
            }
            deriv = ks.into_iter().map(|k| k as u32).collect();
        }
        if sym.arity == 0 {
            return Ok(Expr::func(&sym, vec![]));
        }
        let args = self.args()?;
        if args.len() != sym.arity {
            return Err(syn(format!("`{name}` expects {} arguments, got {}", sym.arity, args.len())));
        }
        Ok(Expr::func_deriv(&sym, args, deriv))
    }
}

fn parse_jet(suffix: &str) -> Option<Jet> {
    let mut t = 0u8;
    let mut x: Vec<u8> = Vec::new();
    let mut seen_digit = false;
    for c in suffix.chars() {
        if c == 't' && !seen_digit {
            t += 1;
        } else if let Some(d) = c.to_digit(10) {
            if d == 0 {
                return None;
            }
            seen_digit = true;
            let a = d as usize;
            if x.len() < a {
                x.resize(a, 0);
            }
            x[a - 1] += 1;
        } else {
            return None;
        }
    }
    if suffix.is_empty() {
        return None;
    }
    Some(Jet::new(t, &x, false))
}
