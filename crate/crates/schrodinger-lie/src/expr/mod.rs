//! Expression DAG over `t`, `x_a`, jet variables of `ψ`, exact complex
//! rational constants and abstract function symbols.

mod diff;
mod eval;
mod parse;
mod print;
mod sample;
mod symbols;

pub use diff::{diff, subst, subst_many, subst_with, total_derivative, Direction};
pub use eval::{eval, EvalError, EvalOutcome};
pub use parse::{parse, parse_with, ParseError};
pub use sample::{
    is_zero, SamplePoint, Sampler, SamplerConfig, Surrogate, SurrogateBinding, TrigSurrogate,
    ZeroReport, ZeroWitness,
};
pub use symbols::{Codomain, Declaration, FunctionSymbol, SymbolHint, SymbolTable};
pub(crate) use symbols::is_reserved;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub type Rational = Ratio<i64>;

/// `k`-th root of a nonnegative integer when it is an integer.
/// Splits off a leading rational-complex coefficient.
fn coefficient(e: &Expr) -> (Cplx, Expr) {
    if let Node::Product(fs) = e.node() {
        if let Node::Const(c) = fs[0].node() {
            let rest = if fs.len() == 2 { fs[1].clone() } else { Expr::mk(Node::Product(fs[1..].to_vec())) };
            return (c.clone(), rest);
        }
    }
    (Cplx::real(Rational::one()), e.clone())
}

/// Adds the coefficients of terms that differ only by a constant factor.
fn collect_terms(terms: Vec<Expr>) -> Vec<Expr> {
    if terms.len() < 2 {
        return terms;
    }
    let mut acc: Vec<(Cplx, Expr)> = Vec::with_capacity(terms.len());
    for t in terms {
        let (c, rest) = coefficient(&t);
        match acc.iter_mut().find(|(_, r)| *r == rest) {
            Some(slot) => match slot.0.add(&c) {
                Some(v) => slot.0 = v,
                None => acc.push((c, rest)),
            },
            None => acc.push((c, rest)),
        }
    }
    acc.into_iter()
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, rest)| if c.is_one() { rest } else { Expr::product(vec![Expr::constant(c), rest]) })
        .collect()
}

/// Combines integer powers of equal bases.
fn merge_factors(factors: Vec<Expr>) -> Vec<Expr> {
    if factors.len() < 2 {
        return factors;
    }
    let mut acc: Vec<(Expr, i64)> = Vec::with_capacity(factors.len());
    for f in factors {
        let (base, k) = match f.node() {
            Node::IntPow(b, k) => (b.clone(), *k),
            _ => (f.clone(), 1),
        };
        match acc.iter_mut().find(|(b, _)| *b == base) {
            Some(slot) => slot.1 += k,
            None => acc.push((base, k)),
        }
    }
    acc.into_iter().filter(|(_, k)| *k != 0).map(|(b, k)| b.pow(k)).collect()
}

fn exact_root(v: i64, k: i64) -> Option<i64> {
    if v < 0 || k <= 0 || k > 63 {
        return None;
    }
    let guess = (v as f64).powf(1.0 / k as f64).round() as i64;
    (guess.saturating_sub(1)..=guess + 1).find(|r| *r >= 0 && r.checked_pow(k as u32) == Some(v))
}

pub fn q(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

/// Exact complex rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cplx {
    pub re: Rational,
    pub im: Rational,
}

impl Cplx {
    pub fn new(re: Rational, im: Rational) -> Self {
        Cplx { re, im }
    }
    pub fn real(re: Rational) -> Self {
        Cplx { re, im: Rational::zero() }
    }
    pub fn i() -> Self {
        Cplx { re: Rational::zero(), im: Rational::one() }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
    pub fn conj(&self) -> Self {
        Cplx { re: self.re, im: -self.im }
    }
    fn add(&self, o: &Cplx) -> Option<Cplx> {
        Some(Cplx { re: self.re.checked_add(&o.re)?, im: self.im.checked_add(&o.im)? })
    }
    fn mul(&self, o: &Cplx) -> Option<Cplx> {
        let rr = self.re.checked_mul(&o.re)?;
        let ii = self.im.checked_mul(&o.im)?;
        let ri = self.re.checked_mul(&o.im)?;
        let ir = self.im.checked_mul(&o.re)?;
        Some(Cplx { re: rr.checked_sub(&ii)?, im: ri.checked_add(&ir)? })
    }
    fn inv(&self) -> Option<Cplx> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Cplx::real(self.re.recip()));
        }
        let den = self.re.checked_mul(&self.re)?.checked_add(&self.im.checked_mul(&self.im)?)?;
        Some(Cplx { re: self.re.checked_div(&den)?, im: (-self.im).checked_div(&den)? })
    }
    fn powi(&self, k: i64) -> Option<Cplx> {
        let (base, k) = if k < 0 { (self.inv()?, -k) } else { (self.clone(), k) };
        let mut acc = Cplx::real(Rational::one());
        for _ in 0..k {
            acc = acc.mul(&base)?;
        }
        Some(acc)
    }
    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(r2f(&self.re), r2f(&self.im))
    }
}

pub(crate) fn r2f(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Multi-index of a jet variable over `(t, x_1, .., x_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jet {
    pub t: u8,
    /// Spatial orders, trailing zeros trimmed.
    pub x: Vec<u8>,
    pub conj: bool,
}

impl Jet {
    pub fn psi() -> Self {
        Jet { t: 0, x: Vec::new(), conj: false }
    }
    pub fn new(t: u8, x: &[u8], conj: bool) -> Self {
        let mut x = x.to_vec();
        while x.last() == Some(&0) {
            x.pop();
        }
        Jet { t, x, conj }
    }
    pub fn order_x(&self, a: usize) -> u8 {
        self.x.get(a - 1).copied().unwrap_or(0)
    }
    pub fn raised(&self, dir: Direction) -> Jet {
        match dir {
            Direction::T => Jet { t: self.t + 1, ..self.clone() },
            Direction::X(a) => {
                let mut x = self.x.clone();
                if x.len() < a {
                    x.resize(a, 0);
                }
                x[a - 1] += 1;
                Jet { x, ..self.clone() }
            }
        }
    }
    pub fn flipped(&self) -> Jet {
        Jet { conj: !self.conj, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    T,
    /// Space variable `x_a`, 1-based.
    X(usize),
    Jet(Jet),
}

impl VarId {
    pub fn psi() -> Self {
        VarId::Jet(Jet::psi())
    }
    pub fn psi_conj() -> Self {
        VarId::Jet(Jet::psi().flipped())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Cplx),
    Pi,
    Var(VarId),
    Func { sym: Arc<FunctionSymbol>, args: Vec<Expr>, deriv: Vec<u32> },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    IntPow(Expr, i64),
    /// `|base|^exp` for real `base`.
    AbsPow(Expr, Rational),
    Sign(Expr),
    Conj(Expr),
    Exp(Expr),
    Cos(Expr),
    Sin(Expr),
    /// `ln|base|` for real `base`.
    LnAbs(Expr),
    /// Polar angle `atan2(y, x)`.
    Atan2(Expr, Expr),
    /// Inverse of the real function `map(t)` evaluated at `arg`.
    Inverse { map: Expr, arg: Expr },
}

#[derive(Debug, PartialEq)]
pub struct ExprData {
    pub node: Node,
    real: bool,
}

/// Immutable, shareable expression handle.
#[derive(Clone, Debug)]
pub struct Expr(Arc<ExprData>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Expr {
    fn mk(node: Node) -> Expr {
        let real = match &node {
            Node::Const(c) => c.im.is_zero(),
            Node::Pi => true,
            Node::Var(VarId::Jet(_)) => false,
            Node::Var(_) => true,
            Node::Func { sym, .. } => sym.codomain == Codomain::Real,
            Node::Sum(v) | Node::Product(v) => v.iter().all(|e| e.is_real()),
            Node::IntPow(b, _) => b.is_real(),
            Node::AbsPow(..) | Node::Sign(_) | Node::LnAbs(_) | Node::Atan2(..) => true,
            Node::Inverse { .. } => true,
            Node::Conj(e) => e.is_real(),
            Node::Exp(e) | Node::Cos(e) | Node::Sin(e) => e.is_real(),
        };
        Expr(Arc::new(ExprData { node, real }))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn is_real(&self) -> bool {
        self.0.real
    }

    pub(crate) fn ptr(&self) -> *const ExprData {
        Arc::as_ptr(&self.0)
    }

    pub(crate) fn shared(&self) -> bool {
        Arc::strong_count(&self.0) > 1
    }

    pub fn constant(c: Cplx) -> Expr {
        Expr::mk(Node::Const(c))
    }
    pub fn rational(r: Rational) -> Expr {
        Expr::constant(Cplx::real(r))
    }
    pub fn int(n: i64) -> Expr {
        Expr::rational(Rational::from_integer(n))
    }
    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::rational(q(n, d))
    }
    pub fn zero() -> Expr {
        Expr::int(0)
    }
    pub fn one() -> Expr {
        Expr::int(1)
    }
    pub fn i() -> Expr {
        Expr::constant(Cplx::i())
    }
    pub fn pi() -> Expr {
        Expr::mk(Node::Pi)
    }
    pub fn var(v: VarId) -> Expr {
        Expr::mk(Node::Var(v))
    }
    pub fn t() -> Expr {
        Expr::var(VarId::T)
    }
    pub fn x(a: usize) -> Expr {
        Expr::var(VarId::X(a))
    }
    pub fn psi() -> Expr {
        Expr::var(VarId::psi())
    }
    pub fn jet(j: Jet) -> Expr {
        Expr::var(VarId::Jet(j))
    }

    pub fn as_const(&self) -> Option<&Cplx> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }
    pub fn is_zero_const(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }
    pub fn is_one_const(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    pub fn func(sym: &Arc<FunctionSymbol>, args: Vec<Expr>) -> Expr {
        let deriv = vec![0; args.len()];
        Expr::func_deriv(sym, args, deriv)
    }

    pub fn func_deriv(sym: &Arc<FunctionSymbol>, args: Vec<Expr>, deriv: Vec<u32>) -> Expr {
        assert_eq!(args.len(), sym.arity, "arity mismatch for {}", sym.name);
        assert_eq!(deriv.len(), sym.arity);
        Expr::mk(Node::Func { sym: sym.clone(), args, deriv })
    }

    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut acc = Cplx::real(Rational::zero());
        let mut out = Vec::with_capacity(terms.len());
        // On overflow the running constant is kept as a separate term.
        let fold = |acc: &mut Cplx, c: &Cplx, out: &mut Vec<Expr>| match acc.add(c) {
            Some(v) => *acc = v,
            None => {
                out.push(Expr::constant(acc.clone()));
                *acc = c.clone();
            }
        };
        for e in terms {
            match e.node() {
                Node::Const(c) => fold(&mut acc, c, &mut out),
                Node::Sum(inner) => {
                    for f in inner {
                        match f.node() {
                            Node::Const(c) => fold(&mut acc, c, &mut out),
                            _ => out.push(f.clone()),
                        }
                    }
                }
                _ => out.push(e),
            }
        }
        let mut out = collect_terms(out);
        if !acc.is_zero() {
            out.insert(0, Expr::constant(acc));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::mk(Node::Sum(out)),
        }
    }

    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut acc = Cplx::real(Rational::one());
        let mut out = Vec::with_capacity(factors.len());
        let mut zero = false;
        let mut fold = |acc: &mut Cplx, c: &Cplx, out: &mut Vec<Expr>| {
            zero |= c.is_zero();
            match acc.mul(c) {
                Some(v) => *acc = v,
                None => {
                    out.push(Expr::constant(acc.clone()));
                    *acc = c.clone();
                }
            }
        };
        for e in factors {
            match e.node() {
                Node::Const(c) => fold(&mut acc, c, &mut out),
                Node::Product(inner) => {
                    for f in inner {
                        match f.node() {
                            Node::Const(c) => fold(&mut acc, c, &mut out),
                            _ => out.push(f.clone()),
                        }
                    }
                }
                _ => out.push(e),
            }
        }
        if zero || acc.is_zero() {
            return Expr::zero();
        }
        let mut out = merge_factors(out);
        if !acc.is_one() {
            out.insert(0, Expr::constant(acc));
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr::mk(Node::Product(out)),
        }
    }

    pub fn pow(&self, k: i64) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        if k == 1 {
            return self.clone();
        }
        match self.node() {
            Node::Const(c) => match c.powi(k) {
                Some(v) => Expr::constant(v),
                None => Expr::mk(Node::IntPow(self.clone(), k)),
            },
            Node::IntPow(b, j) => b.pow(j * k),
            _ => Expr::mk(Node::IntPow(self.clone(), k)),
        }
    }

    pub fn recip(&self) -> Expr {
        self.pow(-1)
    }

    /// `|self|^p`; `self` must be real-valued.
    pub fn try_abs_pow(&self, p: Rational) -> Result<Expr, String> {
        if !self.is_real() {
            return Err(format!("|.|^{p} applied to a non-real expression: {self}"));
        }
        if p.is_zero() {
            return Ok(Expr::one());
        }
        Ok(match self.node() {
            Node::AbsPow(b, r) => {
                if (r * p).is_zero() {
                    Expr::one()
                } else {
                    Expr::mk(Node::AbsPow(b.clone(), r * p))
                }
            }
            Node::Const(c) if p.is_integer() => {
                Expr::constant(Cplx::real(c.re.abs())).pow(p.to_integer())
            }
            Node::Const(c) => {
                let a = c.re.abs();
                match (exact_root(*a.numer(), *p.denom()), exact_root(*a.denom(), *p.denom())) {
                    (Some(n), Some(d)) if n != 0 => Expr::rational(Rational::new(n, d)).pow(*p.numer()),
                    _ => Expr::mk(Node::AbsPow(self.clone(), p)),
                }
            }
            _ => Expr::mk(Node::AbsPow(self.clone(), p)),
        })
    }

    pub fn abs_pow(&self, p: Rational) -> Expr {
        self.try_abs_pow(p).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn abs(&self) -> Expr {
        self.abs_pow(Rational::one())
    }

    pub fn try_sign(&self) -> Result<Expr, String> {
        if !self.is_real() {
            return Err(format!("sgn applied to a non-real expression: {self}"));
        }
        Ok(match self.node() {
            Node::Const(c) => Expr::int(if c.re.is_positive() {
                1
            } else if c.re.is_negative() {
                -1
            } else {
                0
            }),
            _ => Expr::mk(Node::Sign(self.clone())),
        })
    }

    pub fn sign(&self) -> Expr {
        self.try_sign().unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn conj(&self) -> Expr {
        if self.is_real() {
            return self.clone();
        }
        match self.node() {
            Node::Const(c) => Expr::constant(c.conj()),
            Node::Var(VarId::Jet(j)) => Expr::jet(j.flipped()),
            Node::Conj(e) => e.clone(),
            _ => Expr::mk(Node::Conj(self.clone())),
        }
    }

    pub fn exp(&self) -> Expr {
        if self.is_zero_const() {
            return Expr::one();
        }
        Expr::mk(Node::Exp(self.clone()))
    }
    pub fn cos(&self) -> Expr {
        if self.is_zero_const() {
            return Expr::one();
        }
        Expr::mk(Node::Cos(self.clone()))
    }
    pub fn sin(&self) -> Expr {
        if self.is_zero_const() {
            return Expr::zero();
        }
        Expr::mk(Node::Sin(self.clone()))
    }
    pub fn try_ln_abs(&self) -> Result<Expr, String> {
        if !self.is_real() {
            return Err(format!("ln applied to a non-real expression: {self}"));
        }
        Ok(Expr::mk(Node::LnAbs(self.clone())))
    }
    pub fn ln_abs(&self) -> Expr {
        self.try_ln_abs().unwrap_or_else(|e| panic!("{e}"))
    }
    pub fn try_atan2(y: &Expr, x: &Expr) -> Result<Expr, String> {
        if !y.is_real() || !x.is_real() {
            return Err("atan2 applied to non-real arguments".into());
        }
        Ok(Expr::mk(Node::Atan2(y.clone(), x.clone())))
    }
    pub fn atan2(y: &Expr, x: &Expr) -> Expr {
        Expr::try_atan2(y, x).unwrap_or_else(|e| panic!("{e}"))
    }
    /// `map^{-1}(arg)` where `map` is a real expression in `t`.
    pub fn inverse(map: &Expr, arg: &Expr) -> Expr {
        if *map == Expr::t() {
            return arg.clone();
        }
        Expr::mk(Node::Inverse { map: map.clone(), arg: arg.clone() })
    }

    /// Real part `(e + e*)/2`.
    pub fn re(&self) -> Expr {
        if self.is_real() {
            return self.clone();
        }
        Expr::frac(1, 2) * (self.clone() + self.conj())
    }
    /// Imaginary part `(e - e*)/(2i)`.
    pub fn im(&self) -> Expr {
        if self.is_real() {
            return Expr::zero();
        }
        Expr::constant(Cplx::new(Rational::zero(), q(-1, 2))) * (self.clone() - self.conj())
    }

    /// Children in evaluation order.
    pub fn children(&self) -> Vec<&Expr> {
        match self.node() {
            Node::Const(_) | Node::Pi | Node::Var(_) => vec![],
            Node::Func { args, .. } => args.iter().collect(),
            Node::Sum(v) | Node::Product(v) => v.iter().collect(),
            Node::IntPow(b, _) | Node::AbsPow(b, _) | Node::Sign(b) | Node::Conj(b) => vec![b],
            Node::Exp(b) | Node::Cos(b) | Node::Sin(b) | Node::LnAbs(b) => vec![b],
            Node::Atan2(a, b) => vec![a, b],
            Node::Inverse { map, arg } => vec![map, arg],
        }
    }

    fn walk(&self, f: &mut dyn FnMut(&Expr), seen: &mut std::collections::HashSet<*const ExprData>) {
        if !seen.insert(self.ptr()) {
            return;
        }
        f(self);
        for c in self.children() {
            c.walk(f, seen);
        }
    }

    /// Visits every distinct node once.
    pub fn visit(&self, mut f: impl FnMut(&Expr)) {
        let mut seen = std::collections::HashSet::new();
        self.walk(&mut f, &mut seen);
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.visit(|e| {
            if let Node::Var(v) = e.node() {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn jets(&self) -> BTreeSet<Jet> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                VarId::Jet(j) => Some(j),
                _ => None,
            })
            .collect()
    }

    pub fn symbols(&self) -> Vec<Arc<FunctionSymbol>> {
        let mut out: Vec<Arc<FunctionSymbol>> = Vec::new();
        self.visit(|e| {
            if let Node::Func { sym, .. } = e.node() {
                if !out.iter().any(|s| s.name == sym.name) {
                    out.push(sym.clone());
                }
            }
        });
        out
    }

    pub fn max_x_index(&self) -> usize {
        let mut m = 0;
        self.visit(|e| {
            if let Node::Var(VarId::X(a)) = e.node() {
                m = m.max(*a);
            }
        });
        m
    }

    pub fn depends_on(&self, v: &VarId) -> bool {
        let mut hit = false;
        self.visit(|e| {
            if let Node::Var(w) = e.node() {
                if w == v {
                    hit = true;
                }
            }
        });
        hit
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(|_| n += 1);
        n
    }

    /// Pushes conjugation down to the leaves: conjugates constants and complex
    /// function symbols, flips jet flags.
    pub fn conj_deep(&self) -> Expr {
        if self.is_real() {
            return self.clone();
        }
        match self.node() {
            Node::Const(_) | Node::Var(_) => self.conj(),
            Node::Conj(e) => e.clone(),
            Node::Func { .. } => self.conj(),
            Node::Sum(v) => Expr::sum(v.iter().map(|e| e.conj_deep()).collect()),
            Node::Product(v) => Expr::product(v.iter().map(|e| e.conj_deep()).collect()),
            Node::IntPow(b, k) => b.conj_deep().pow(*k),
            Node::Exp(b) => b.conj_deep().exp(),
            Node::Cos(b) => b.conj_deep().cos(),
            Node::Sin(b) => b.conj_deep().sin(),
            _ => self.conj(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::to_string(self))
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        Expr::sum(vec![self, o])
    }
}
impl Add for &Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        Expr::sum(vec![self.clone(), o.clone()])
    }
}
impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        Expr::sum(vec![self, -o])
    }
}
impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, o: &Expr) -> Expr {
        Expr::sum(vec![self.clone(), -o.clone()])
    }
}
impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        Expr::product(vec![self, o])
    }
}
impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        Expr::product(vec![self.clone(), o.clone()])
    }
}
macro_rules! mixed_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, o: &Expr) -> Expr {
                $tr::$f(self, o.clone())
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, o: Expr) -> Expr {
                $tr::$f(self.clone(), o)
            }
        }
    )*};
}
mixed_ops!(Add add, Sub sub, Mul mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product(vec![Expr::int(-1), self])
    }
}
impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

/// `x_a x_a` over `n` space variables.
pub fn radius_sq(n: usize) -> Expr {
    Expr::sum((1..=n).map(|a| Expr::x(a).pow(2)).collect())
}
