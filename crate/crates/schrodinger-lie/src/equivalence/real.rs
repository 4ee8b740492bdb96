use super::{dt, EquivError, EquivTransformation};
use crate::conditions::Potential;
use crate::expr::{diff, is_zero, Expr, Node, Sampler, SamplerConfig, VarId};

/// `Υ = −(n/4) ln|T_t|`, the amplitude that keeps real potentials real.
pub fn real_amplitude(time_map: &Expr, n: usize) -> Expr {
    -(Expr::frac(n as i64, 4) * dt(time_map).ln_abs())
}

/// Whether `Υ_t + nT_tt/(4T_t)` vanishes at samples.
pub fn is_real_admissible(tr: &EquivTransformation, n: usize) -> bool {
    let t1 = dt(&tr.time_map);
    let e = dt(&tr.amplitude) + Expr::frac(n as i64, 4) * dt(&t1) * t1.recip();
    is_zero(&e, 50, 2, 1e-8).unwrap_or(false)
}

fn depends_on_space(e: &Expr, n: usize) -> bool {
    (1..=n).any(|a| e.depends_on(&VarId::X(a)))
}

fn has_unknown_of_space(e: &Expr, n: usize) -> bool {
    let mut found = false;
    e.visit(|s| {
        if let Node::Func { args, .. } = s.node() {
            if args.iter().any(|a| depends_on_space(a, n)) {
                found = true;
            }
        }
    });
    found
}

/// Whether `V = ϱ|x|² + ϱᵃx_a + ϱ⁰ + iϱ̃⁰` with real functions of `t`:
/// third `x`-derivatives vanish, the Hessian is a real multiple of the
/// identity and `Im V` does not depend on `x`.
pub fn is_free_reducible(v: &Potential) -> Result<bool, EquivError> {
    let n = v.n;
    if has_unknown_of_space(&v.expr, n) {
        return Err(EquivError::Undecidable(format!("`{}` contains an unknown function of x", v.expr)));
    }
    let mut conds = Vec::new();
    let d = |e: &Expr, a: usize| diff(e, &VarId::X(a));
    for a in 1..=n {
        for b in a..=n {
            let h = d(&d(&v.expr, a), b);
            for c in b..=n {
                conds.push(d(&h, c));
            }
            if a == b {
                conds.push(&h - &d(&d(&v.expr, 1), 1));
            } else {
                conds.push(h);
            }
        }
        conds.push(d(&v.expr.im(), a));
    }
    let mut sampler = Sampler::new(SamplerConfig { n, points: 40, bindings: 2, ..SamplerConfig::default() });
    for c in conds {
        if !sampler.check(&c, &Default::default())?.pass {
            return Ok(false);
        }
    }
    Ok(true)
}
