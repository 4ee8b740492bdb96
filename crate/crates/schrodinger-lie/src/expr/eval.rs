use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

use super::sample::{SamplePoint, Surrogate, SurrogateBinding};
use super::{r2f, Expr, ExprData, Node, VarId};

/// Bases closer to zero than this make a sample unsafe.
pub const REJECT_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unbound function symbol `{0}`")]
    Unbound(String),
    #[error("variable {0:?} has no value at the sample point")]
    MissingVar(VarId),
    #[error("unsafe sample: {0}")]
    Unsafe(String),
    #[error("retry budget exhausted: {0}")]
    RetriesExhausted(String),
}

/// Value together with the largest magnitude met among all subterms.
#[derive(Clone, Copy, Debug)]
pub struct EvalOutcome {
    pub value: Complex64,
    pub max_abs: f64,
}

pub fn eval(e: &Expr, b: &SurrogateBinding, p: &SamplePoint) -> Result<Complex64, EvalError> {
    eval_tracked(e, b, p).map(|o| o.value)
}

pub fn eval_tracked(
    e: &Expr,
    b: &SurrogateBinding,
    p: &SamplePoint,
) -> Result<EvalOutcome, EvalError> {
    let mut ev = Evaluator { b, p, memo: HashMap::new(), max_abs: 0.0 };
    let value = ev.go(e)?;
    Ok(EvalOutcome { value, max_abs: ev.max_abs.max(value.norm()) })
}

struct Evaluator<'a> {
    b: &'a SurrogateBinding,
    p: &'a SamplePoint,
    memo: HashMap<*const ExprData, Complex64>,
    max_abs: f64,
}

fn real_base(z: Complex64, what: &str) -> Result<f64, EvalError> {
    if z.re.abs() < REJECT_EPS {
        return Err(EvalError::Unsafe(format!("{what} base {:.3e} too close to zero", z.re)));
    }
    Ok(z.re)
}

impl Evaluator<'_> {
    fn go(&mut self, e: &Expr) -> Result<Complex64, EvalError> {
        let shared = e.shared();
        if shared {
            if let Some(v) = self.memo.get(&e.ptr()) {
                return Ok(*v);
            }
        }
        let v = self.node(e)?;
        let a = v.norm();
        if a.is_finite() {
            self.max_abs = self.max_abs.max(a);
        } else {
            return Err(EvalError::Unsafe(format!("non-finite value in {e}")));
        }
        if shared {
            self.memo.insert(e.ptr(), v);
        }
        Ok(v)
    }

    fn node(&mut self, e: &Expr) -> Result<Complex64, EvalError> {
        Ok(match e.node() {
            Node::Const(c) => Complex64::new(r2f(&c.re), r2f(&c.im)),
            Node::Pi => Complex64::new(std::f64::consts::PI, 0.0),
            Node::Var(v) => self.p.value(v)?,
            Node::Func { sym, args, deriv } => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.go(a)?);
                }
                match self.b.get(&sym.name) {
                    Some(Surrogate::Const(c)) => {
                        if deriv.iter().any(|&k| k > 0) {
                            Complex64::new(0.0, 0.0)
                        } else {
                            *c
                        }
                    }
                    Some(Surrogate::Trig(s)) => s.eval(&vals, deriv),
                    None => return Err(EvalError::Unbound(sym.name.clone())),
                }
            }
            Node::Sum(ts) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in ts {
                    acc += self.go(t)?;
                }
                acc
            }
            Node::Product(fs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in fs {
                    acc *= self.go(f)?;
                }
                acc
            }
            Node::IntPow(base, k) => {
                let z = self.go(base)?;
                if *k < 0 && z.norm() < REJECT_EPS {
                    return Err(EvalError::Unsafe("negative power of a vanishing base".into()));
                }
                z.powi(*k as i32)
            }
            Node::AbsPow(base, r) => {
                let z = real_base(self.go(base)?, "|.|^r")?;
                Complex64::new(z.abs().powf(r2f(r)), 0.0)
            }
            Node::Sign(base) => {
                let z = real_base(self.go(base)?, "sgn")?;
                Complex64::new(z.signum(), 0.0)
            }
            Node::Conj(inner) => self.go(inner)?.conj(),
            Node::Exp(a) => self.go(a)?.exp(),
            Node::Cos(a) => self.go(a)?.cos(),
            Node::Sin(a) => self.go(a)?.sin(),
            Node::LnAbs(a) => {
                let z = real_base(self.go(a)?, "ln")?;
                Complex64::new(z.abs().ln(), 0.0)
            }
            Node::Atan2(y, x) => {
                let y = self.go(y)?.re;
                let x = self.go(x)?.re;
                if x.hypot(y) < REJECT_EPS {
                    return Err(EvalError::Unsafe("atan2 at the origin".into()));
                }
                Complex64::new(y.atan2(x), 0.0)
            }
            Node::Inverse { map, arg } => {
                let s = self.go(arg)?.re;
                Complex64::new(invert_real(map, s, self.b, self.p)?, 0.0)
            }
        })
    }
}

/// Solves `map(t) = s` for the root closest to the centre of the sample
/// interval: outward scan for a sign change, bisection, secant polish.
fn invert_real(map: &Expr, s: f64, b: &SurrogateBinding, p: &SamplePoint) -> Result<f64, EvalError> {
    let f = |t: f64| -> Result<f64, EvalError> {
        let q = p.with_t(t);
        Ok(eval(map, b, &q)?.re - s)
    };
    let centre = 1.0;
    let h = 0.02;
    let mut bracket = None;
    'scan: for k in 0..500 {
        for (lo, hi) in [
            (centre + k as f64 * h, centre + (k + 1) as f64 * h),
            (centre - (k + 1) as f64 * h, centre - k as f64 * h),
        ] {
            let (flo, fhi) = match (f(lo), f(hi)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            if flo == 0.0 {
                return Ok(lo);
            }
            if flo * fhi <= 0.0 {
                bracket = Some((lo, hi, flo));
                break 'scan;
            }
        }
    }
    let (mut lo, mut hi, mut flo) =
        bracket.ok_or_else(|| EvalError::Unsafe(format!("no preimage of {s} under {map}")))?;
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let (mut t0, mut t1) = (lo, hi);
    let (mut f0, mut f1) = (f(t0)?, f(t1)?);
    for _ in 0..3 {
        if (f1 - f0).abs() < 1e-300 || f1.abs() < 1e-15 {
            break;
        }
        let t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
        if !(t2 > lo - 1e-9 && t2 < hi + 1e-9) {
            break;
        }
        t0 = t1;
        f0 = f1;
        t1 = t2;
        f1 = f(t1)?;
    }
    Ok(if f1.abs() <= f0.abs() { t1 } else { t0 })
}
