//! Printer whose output parses back to the same expression.

use num_traits::{One, Signed, Zero};

use super::{Cplx, Expr, Jet, Node, Rational, VarId};

pub(crate) fn to_string(e: &Expr) -> String {
    let mut s = String::new();
    write(e, &mut s);
    s
}

fn rational(r: &Rational) -> String {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_string()
    } else if r.is_integer() {
        format!("({})", r.to_integer())
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

fn constant(c: &Cplx) -> String {
    if c.im.is_zero() {
        return rational(&c.re);
    }
    let im = if c.im.is_one() { "i".to_string() } else { format!("{}*i", rational(&c.im)) };
    if c.re.is_zero() {
        if c.im.is_one() {
            im
        } else {
            format!("({im})")
        }
    } else {
        format!("({} + {im})", rational(&c.re))
    }
}

pub(crate) fn jet_name(j: &Jet) -> String {
    let mut s = String::from("psi");
    if j.t > 0 || !j.x.is_empty() {
        s.push('_');
        for _ in 0..j.t {
            s.push('t');
        }
        for (a, &k) in j.x.iter().enumerate() {
            for _ in 0..k {
                s.push_str(&(a + 1).to_string());
            }
        }
    }
    if j.conj {
        format!("conj({s})")
    } else {
        s
    }
}

fn var(v: &VarId) -> String {
    match v {
        VarId::T => "t".into(),
        VarId::X(a) => format!("x{a}"),
        VarId::Jet(j) => jet_name(j),
    }
}

fn args(out: &mut String, xs: &[&Expr]) {
    out.push('(');
    for (k, a) in xs.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write(a, out);
    }
    out.push(')');
}

/// Atoms need no parentheses anywhere.
fn is_atom(e: &Expr) -> bool {
    match e.node() {
        Node::Const(_) | Node::Pi | Node::Var(_) | Node::Func { .. } => true,
        Node::Sign(_) | Node::Conj(_) | Node::Exp(_) | Node::Cos(_) | Node::Sin(_) => true,
        Node::LnAbs(_) | Node::Atan2(..) | Node::Inverse { .. } => true,
        Node::AbsPow(_, r) => r.is_one(),
        _ => false,
    }
}

fn write(e: &Expr, out: &mut String) {
    match e.node() {
        Node::Const(c) => out.push_str(&constant(c)),
        Node::Pi => out.push_str("pi"),
        Node::Var(v) => out.push_str(&var(v)),
        Node::Func { sym, args: a, deriv } => {
            out.push_str(&sym.name);
            if deriv.iter().any(|&k| k > 0) {
                let ks: Vec<String> = deriv.iter().map(|k| k.to_string()).collect();
                out.push_str(&format!("[{}]", ks.join(",")));
            }
            if !a.is_empty() {
                args(out, &a.iter().collect::<Vec<_>>());
            }
        }
        Node::Sum(ts) => {
            for (k, t) in ts.iter().enumerate() {
                if k > 0 {
                    out.push_str(" + ");
                }
                write(t, out);
            }
        }
        Node::Product(fs) => {
            for (k, f) in fs.iter().enumerate() {
                if k > 0 {
                    out.push('*');
                }
                if matches!(f.node(), Node::Sum(_)) {
                    out.push('(');
                    write(f, out);
                    out.push(')');
                } else {
                    write(f, out);
                }
            }
        }
        Node::IntPow(b, k) => {
            let simple = is_atom(b)
                && !matches!(b.node(), Node::AbsPow(..))
                && !matches!(b.node(), Node::Const(c) if c.im.is_zero() && c.re.is_integer() && c.re.is_negative());
            if simple {
                write(b, out);
            } else {
                out.push('(');
                write(b, out);
                out.push(')');
            }
            if *k < 0 {
                out.push_str(&format!("^({k})"));
            } else {
                out.push_str(&format!("^{k}"));
            }
        }
        Node::AbsPow(b, r) => {
            out.push('|');
            write(b, out);
            out.push('|');
            if !r.is_one() {
                if r.is_integer() && !r.is_negative() {
                    out.push_str(&format!("^{}", r.to_integer()));
                } else if r.is_integer() {
                    out.push_str(&format!("^({})", r.to_integer()));
                } else {
                    out.push_str(&format!("^({}/{})", r.numer(), r.denom()));
                }
            }
        }
        Node::Sign(b) => {
            out.push_str("sgn");
            args(out, &[b]);
        }
        Node::Conj(b) => {
            out.push_str("conj");
            args(out, &[b]);
        }
        Node::Exp(b) => {
            out.push_str("exp");
            args(out, &[b]);
        }
        Node::Cos(b) => {
            out.push_str("cos");
            args(out, &[b]);
        }
        Node::Sin(b) => {
            out.push_str("sin");
            args(out, &[b]);
        }
        Node::LnAbs(b) => {
            out.push_str("ln");
            args(out, &[b]);
        }
        Node::Atan2(y, x) => {
            out.push_str("atan2");
            args(out, &[y, x]);
        }
        Node::Inverse { map, arg } => {
            out.push_str("inv");
            args(out, &[map, arg]);
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse, Expr};

    #[test]
    fn negative_and_rational_constants() {
        let e = Expr::frac(-1, 2) * Expr::x(1);
        assert_eq!(e.to_string(), "(-1/2)*x1");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn complex_constant() {
        let e = Expr::i() * Expr::int(3);
        assert_eq!(e.to_string(), "(3*i)");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn abs_powers() {
        let e = Expr::t().abs_pow(crate::expr::q(-3, 2));
        assert_eq!(e.to_string(), "|t|^(-3/2)");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }
}
