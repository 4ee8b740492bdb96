use std::collections::HashMap;

use super::{Expr, ExprData, Node, VarId};
use num_traits::One;

/// Direction of a total derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    T,
    X(usize),
}

impl Direction {
    pub fn var(self) -> VarId {
        match self {
            Direction::T => VarId::T,
            Direction::X(a) => VarId::X(a),
        }
    }
}

/// Partial derivative with every other `VarId` held fixed.
pub fn diff(e: &Expr, v: &VarId) -> Expr {
    let mut memo = HashMap::new();
    diff_memo(e, v, &mut memo)
}

fn diff_memo(e: &Expr, v: &VarId, memo: &mut HashMap<*const ExprData, Expr>) -> Expr {
    if e.shared() {
        if let Some(d) = memo.get(&e.ptr()) {
            return d.clone();
        }
    }
    let d = diff_node(e, v, memo);
    if e.shared() {
        memo.insert(e.ptr(), d.clone());
    }
    d
}

fn diff_node(e: &Expr, v: &VarId, memo: &mut HashMap<*const ExprData, Expr>) -> Expr {
    let mut d = |x: &Expr| diff_memo(x, v, memo);
    match e.node() {
        Node::Const(_) | Node::Pi | Node::Sign(_) => Expr::zero(),
        Node::Var(w) => {
            if w == v {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Func { sym, args, deriv } => {
            let mut terms = Vec::new();
            for (k, a) in args.iter().enumerate() {
                let da = d(a);
                if da.is_zero_const() {
                    continue;
                }
                let mut raised = deriv.clone();
                raised[k] += 1;
                terms.push(Expr::func_deriv(sym, args.clone(), raised) * da);
            }
            Expr::sum(terms)
        }
        Node::Sum(ts) => Expr::sum(ts.iter().map(&mut d).collect()),
        Node::Product(fs) => {
            let mut terms = Vec::new();
            for k in 0..fs.len() {
                let dk = d(&fs[k]);
                if dk.is_zero_const() {
                    continue;
                }
                let mut fac: Vec<Expr> = fs
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, f)| f.clone())
                    .collect();
                fac.push(dk);
                terms.push(Expr::product(fac));
            }
            Expr::sum(terms)
        }
        Node::IntPow(b, k) => {
            let db = d(b);
            if db.is_zero_const() {
                return Expr::zero();
            }
            Expr::product(vec![Expr::int(*k), b.pow(k - 1), db])
        }
        Node::AbsPow(b, r) => {
            let db = d(b);
            if db.is_zero_const() {
                return Expr::zero();
            }
            let lower = b.abs_pow(r - num_rational::Ratio::one());
            Expr::product(vec![Expr::rational(*r), lower, b.sign(), db])
        }
        Node::Conj(inner) => match v {
            VarId::Jet(j) => diff_memo(inner, &VarId::Jet(j.flipped()), memo).conj(),
            _ => d(inner).conj(),
        },
        Node::Exp(a) => {
            let da = d(a);
            e * &da
        }
        Node::Cos(a) => {
            let da = d(a);
            -(a.sin() * da)
        }
        Node::Sin(a) => {
            let da = d(a);
            a.cos() * da
        }
        Node::LnAbs(a) => {
            let da = d(a);
            da * a.recip()
        }
        Node::Atan2(y, x) => {
            let dy = d(y);
            let dx = d(x);
            if dy.is_zero_const() && dx.is_zero_const() {
                return Expr::zero();
            }
            let num = x * &dy - y * &dx;
            num * (x.pow(2) + y.pow(2)).recip()
        }
        Node::Inverse { map, arg } => {
            let da = d(arg);
            if da.is_zero_const() {
                return Expr::zero();
            }
            let map_t = diff(map, &VarId::T);
            da * subst(&map_t, &VarId::T, e).recip()
        }
    }
}

/// Total derivative `D_t` or `D_a`: explicit dependence plus the chain rule
/// through every jet variable present.
pub fn total_derivative(e: &Expr, dir: Direction) -> Expr {
    let mut terms = vec![diff(e, &dir.var())];
    for j in e.jets() {
        let dj = diff(e, &VarId::Jet(j.clone()));
        if !dj.is_zero_const() {
            terms.push(dj * Expr::jet(j.raised(dir)));
        }
    }
    Expr::sum(terms)
}

/// Replaces every occurrence of `v` by `by`. The bound variable of an
/// `Inverse` map is left alone.
pub fn subst(e: &Expr, v: &VarId, by: &Expr) -> Expr {
    let mut memo = HashMap::new();
    subst_memo(e, &|w: &VarId| if w == v { Some(by.clone()) } else { None }, &mut memo)
}

/// Simultaneous substitution.
pub fn subst_many(e: &Expr, map: &[(VarId, Expr)]) -> Expr {
    let mut memo = HashMap::new();
    subst_memo(
        e,
        &|w: &VarId| map.iter().find(|(k, _)| k == w).map(|(_, x)| x.clone()),
        &mut memo,
    )
}

/// Substitution driven by a lookup function.
pub fn subst_with(e: &Expr, f: &dyn Fn(&VarId) -> Option<Expr>) -> Expr {
    let mut memo = HashMap::new();
    subst_memo(e, f, &mut memo)
}

fn subst_memo(
    e: &Expr,
    f: &dyn Fn(&VarId) -> Option<Expr>,
    memo: &mut HashMap<*const ExprData, Expr>,
) -> Expr {
    if let Some(r) = memo.get(&e.ptr()) {
        return r.clone();
    }
    let mut s = |x: &Expr| subst_memo(x, f, memo);
    let out = match e.node() {
        Node::Const(_) | Node::Pi => e.clone(),
        Node::Var(w) => f(w).unwrap_or_else(|| e.clone()),
        Node::Func { sym, args, deriv } => {
            Expr::func_deriv(sym, args.iter().map(&mut s).collect(), deriv.clone())
        }
        Node::Sum(ts) => Expr::sum(ts.iter().map(&mut s).collect()),
        Node::Product(fs) => Expr::product(fs.iter().map(&mut s).collect()),
        Node::IntPow(b, k) => s(b).pow(*k),
        Node::AbsPow(b, r) => s(b).abs_pow(*r),
        Node::Sign(b) => s(b).sign(),
        Node::Conj(b) => s(b).conj(),
        Node::Exp(b) => s(b).exp(),
        Node::Cos(b) => s(b).cos(),
        Node::Sin(b) => s(b).sin(),
        Node::LnAbs(b) => s(b).ln_abs(),
        Node::Atan2(y, x) => Expr::atan2(&s(y), &s(x)),
        Node::Inverse { map, arg } => Expr::inverse(map, &s(arg)),
    };
    memo.insert(e.ptr(), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Codomain, Jet, SymbolTable};

    #[test]
    fn power_rule() {
        let e = Expr::x(1).pow(2);
        assert_eq!(diff(&e, &VarId::X(1)), Expr::int(2) * Expr::x(1));
    }

    #[test]
    fn chain_rule_raises_slot() {
        let mut st = SymbolTable::new();
        let f = st.declare("f", 1, Codomain::Real);
        let e = Expr::func(&f, vec![Expr::t().pow(2)]);
        let d = diff(&e, &VarId::T);
        let expect = Expr::func_deriv(&f, vec![Expr::t().pow(2)], vec![1]) * (Expr::int(2) * Expr::t());
        assert_eq!(d, expect);
    }

    #[test]
    fn total_derivative_raises_jets() {
        let e = Expr::x(1) * Expr::psi();
        let d = total_derivative(&e, Direction::T);
        assert_eq!(d, Expr::x(1) * Expr::jet(Jet::new(1, &[], false)));
        let d = total_derivative(&Expr::psi(), Direction::X(2));
        assert_eq!(d, Expr::jet(Jet::new(0, &[0, 1], false)));
    }
}
