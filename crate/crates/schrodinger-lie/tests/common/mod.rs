#![allow(dead_code)]

use schrodinger_lie::conditions::Potential;
use schrodinger_lie::equivalence::{
    random_function, random_rotation, random_time_map, EquivTransformation,
};
use schrodinger_lie::expr::{Codomain, Expr, Sampler, SamplerConfig, SurrogateBinding, SymbolTable};

pub fn sampler(seed: u64, points: usize) -> Sampler {
    Sampler::new(SamplerConfig { seed, points, ..SamplerConfig::default() })
}

/// Largest normalized value of `e` over fresh points under `b`, or
/// infinity if evaluation fails.
pub fn deviation(e: &Expr, b: &SurrogateBinding, s: &mut Sampler) -> f64 {
    s.check_with(e, b).map(|r| r.max_normalized).unwrap_or(f64::INFINITY)
}

/// `W(t, x1, x2) + c₁x₁² + c₂ cos(x₂)t + i c₃x₁` with a free complex `W`.
pub fn generic_potential(s: &mut Sampler, syms: &mut SymbolTable) -> Potential {
    let w = syms.declare("W", 3, Codomain::Complex);
    let c = |s: &mut Sampler| Expr::frac((s.uniform(-1.0, 1.0) * 64.0).round() as i64, 64);
    let e = Expr::sum(vec![
        Expr::func(&w, vec![Expr::t(), Expr::x(1), Expr::x(2)]),
        c(s) * Expr::x(1).pow(2),
        c(s) * Expr::x(2).cos() * Expr::t(),
        Expr::i() * c(s) * Expr::x(1),
    ]);
    Potential::new(e, 2).unwrap()
}

/// `R(t, x1, x2) + c₁|x|² + c₂x₁ sin t + c₃x₂^(-2)` with a free real `R`.
pub fn real_potential(s: &mut Sampler, syms: &mut SymbolTable) -> Potential {
    let r = syms.declare("R", 3, Codomain::Real);
    let c = |s: &mut Sampler| Expr::frac((s.uniform(-1.0, 1.0) * 64.0).round() as i64, 64);
    let e = Expr::sum(vec![
        Expr::func(&r, vec![Expr::t(), Expr::x(1), Expr::x(2)]),
        c(s) * (Expr::x(1).pow(2) + Expr::x(2).pow(2)),
        c(s) * Expr::x(1) * Expr::t().sin(),
        c(s) * Expr::x(2).pow(-2),
    ]);
    Potential::new(e, 2).unwrap()
}

/// Elementary transformation of kind `k mod 5` with random parameters.
pub fn random_elementary(s: &mut Sampler, k: usize) -> EquivTransformation {
    let n = 2;
    let mut parts = (Expr::t(), identity(n), vec![Expr::zero(); n], Expr::zero(), Expr::zero());
    match k % 5 {
        0 => parts.0 = random_time_map(s),
        1 => parts.1 = random_rotation(s, n),
        2 => parts.2 = vec![random_function(s), random_function(s)],
        3 => parts.3 = random_function(s),
        _ => parts.4 = random_function(s),
    }
    EquivTransformation::new(parts.0, parts.1, parts.2, parts.3, parts.4).unwrap()
}

pub fn identity(n: usize) -> Vec<Vec<Expr>> {
    (0..n).map(|a| (0..n).map(|b| if a == b { Expr::one() } else { Expr::zero() }).collect()).collect()
}
