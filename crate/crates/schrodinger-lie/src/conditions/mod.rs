//! Determining equations, the classifying condition, invariant integers and
//! the two-dimensional classification table.

mod cases;
mod checks;
mod invariants;

pub use cases::{
    builtin_table, case_seed, verify_case, CaseEntry, CaseGenerator, CaseRecord, CaseReport, CaseTable, CheckOutcome, Constraint,
    DrawReport, TableError,
};
pub use checks::{kernel_check, kernel_check_with, lemma_fixtures, KernelReport, LemmaReport};
pub use invariants::{invariants, invariants_with, InvariantError, InvariantTuple, SpanAnalysis};

use std::cell::RefCell;
use std::collections::HashMap;

use thiserror::Error;

use crate::expr::{
    diff, parse_with, radius_sq, subst_with, total_derivative, Direction, Expr, Jet, ParseError,
    SymbolTable, VarId,
};
use crate::fields::{GeneratorCoeffs, VectorField};

#[derive(Debug, Error)]
pub enum ConditionError {
    #[error("potential lives in dimension {potential} but the generator in dimension {generator}")]
    Dimension { potential: usize, generator: usize },
    #[error("a potential must not contain ψ")]
    Jets,
    #[error("potential uses x{index} but n = {n}")]
    Index { index: usize, n: usize },
    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// Potential `V(t, x)` of `iψ_t + Δψ + Vψ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub expr: Expr,
    pub n: usize,
}

impl Potential {
    pub fn new(expr: Expr, n: usize) -> Result<Self, ConditionError> {
        if !expr.jets().is_empty() {
            return Err(ConditionError::Jets);
        }
        let index = expr.max_x_index();
        if index > n {
            return Err(ConditionError::Index { index, n });
        }
        Ok(Potential { expr, n })
    }

    pub fn parse(text: &str, syms: &SymbolTable, n: usize) -> Result<Self, ConditionError> {
        Potential::new(parse_with(text, syms)?, n)
    }

    pub fn zero(n: usize) -> Self {
        Potential { expr: Expr::zero(), n }
    }

    /// Whether the expression is real by construction.
    pub fn is_real(&self) -> bool {
        self.expr.is_real()
    }
}

fn check_dim(v: &Potential, g: &GeneratorCoeffs) -> Result<(), ConditionError> {
    if v.n != g.n() {
        return Err(ConditionError::Dimension { potential: v.n, generator: g.n() });
    }
    Ok(())
}

/// Left minus right side of the classifying condition:
///
/// `τV_t + ξᵃV_a + τ_tV − ⅛τ_ttt|x|² − ½χᵃ_tt x_a − σ_t + iρ_t + i(n/4)τ_tt`.
///
/// `g.eta0` is ignored.
pub fn classifying_residual(v: &Potential, g: &GeneratorCoeffs) -> Result<Expr, ConditionError> {
    check_dim(v, g)?;
    let n = v.n;
    let t = VarId::T;
    let i = Expr::i();
    let vv = &v.expr;
    let tau_t = diff(&g.tau, &t);
    let tau_tt = diff(&tau_t, &t);
    let tau_ttt = diff(&tau_tt, &t);
    let mut terms = vec![&g.tau * &diff(vv, &t)];
    for a in 1..=n {
        terms.push(g.xi(a) * diff(vv, &VarId::X(a)));
    }
    terms.push(&tau_t * vv);
    terms.push(-Expr::product(vec![Expr::frac(1, 8), tau_ttt, radius_sq(n)]));
    for a in 1..=n {
        let chi_tt = diff(&diff(&g.chi[a - 1], &t), &t);
        terms.push(-Expr::product(vec![Expr::frac(1, 2), chi_tt, Expr::x(a)]));
    }
    terms.push(-diff(&g.sigma, &t));
    terms.push(&i * &diff(&g.rho, &t));
    terms.push(Expr::product(vec![i, Expr::frac(n as i64, 4), tau_tt]));
    Ok(Expr::sum(terms))
}

/// `iη⁰_t + Δη⁰ + Vη⁰`.
pub fn eta0_residual(v: &Potential, eta0: &Expr) -> Expr {
    let mut terms = vec![Expr::i() * diff(eta0, &VarId::T)];
    for a in 1..=v.n {
        let x = VarId::X(a);
        terms.push(diff(&diff(eta0, &x), &x));
    }
    terms.push(&v.expr * eta0);
    Expr::sum(terms)
}

/// Replaces every jet with a time derivative by its value on solutions,
/// `ψ_t = iΔψ + iVψ` and `ψ*_t = −iΔψ* − iV*ψ*`, differentiated as needed.
pub struct SolutionReducer {
    v: Potential,
    memo: RefCell<HashMap<Jet, Expr>>,
}

impl SolutionReducer {
    pub fn new(v: &Potential) -> Self {
        SolutionReducer { v: v.clone(), memo: RefCell::new(HashMap::new()) }
    }

    fn rhs(&self, conj: bool) -> Expr {
        let psi = Expr::jet(Jet::new(0, &[], conj));
        let mut lap = Vec::new();
        for a in 1..=self.v.n {
            let mut x = vec![0u8; a];
            x[a - 1] = 2;
            lap.push(Expr::jet(Jet::new(0, &x, conj)));
        }
        let vv = if conj { self.v.expr.conj() } else { self.v.expr.clone() };
        let unit = if conj { -Expr::i() } else { Expr::i() };
        unit * (Expr::sum(lap) + vv * psi)
    }

    /// Value of a single jet on solutions.
    pub fn jet(&self, j: &Jet) -> Expr {
        if j.t == 0 {
            return Expr::jet(j.clone());
        }
        if let Some(e) = self.memo.borrow().get(j) {
            return e.clone();
        }
        let lower = Jet { t: j.t - 1, ..j.clone() };
        let out = if lower.t == 0 {
            let mut e = self.rhs(j.conj);
            for (a, &k) in lower.x.iter().enumerate() {
                for _ in 0..k {
                    e = total_derivative(&e, Direction::X(a + 1));
                }
            }
            e
        } else {
            self.reduce(&total_derivative(&self.jet(&lower), Direction::T))
        };
        self.memo.borrow_mut().insert(j.clone(), out.clone());
        out
    }

    pub fn reduce(&self, e: &Expr) -> Expr {
        subst_with(e, &|v: &VarId| match v {
            VarId::Jet(j) if j.t > 0 => Some(self.jet(j)),
            _ => None,
        })
    }
}

/// Invariance condition `iη^t + η^{aa} + (τV_t + ξᵃV_a)ψ + Vη` of the
/// second prolongation, restricted to solutions.
pub fn prolonged_residual(v: &Potential, f: &VectorField) -> Expr {
    let n = v.n;
    let jet = |t: u8, x: &[u8]| Expr::jet(Jet::new(t, x, false));
    let unit = |a: usize, k: u8| {
        let mut x = vec![0u8; a];
        x[a - 1] = k;
        x
    };
    let tau = &f.t;
    let eta = &f.psi;
    let mut w = vec![eta.clone(), -(tau * &jet(1, &[]))];
    for a in 1..=n {
        w.push(-(&f.x[a - 1] * &jet(0, &unit(a, 1))));
    }
    let w = Expr::sum(w);

    let mut eta_t = vec![total_derivative(&w, Direction::T), tau * &jet(2, &[])];
    for a in 1..=n {
        eta_t.push(&f.x[a - 1] * &jet(1, &unit(a, 1)));
    }
    let eta_t = Expr::sum(eta_t);

    let mut eta_aa = Vec::new();
    for a in 1..=n {
        let dw = total_derivative(&total_derivative(&w, Direction::X(a)), Direction::X(a));
        eta_aa.push(dw);
        eta_aa.push(tau * &jet(1, &unit(a, 2)));
        for b in 1..=n {
            let mut x = unit(a.max(b), 0);
            x[a - 1] += 2;
            x[b - 1] += 1;
            eta_aa.push(&f.x[b - 1] * &jet(0, &x));
        }
    }
    let mut lin = vec![tau * &diff(&v.expr, &VarId::T)];
    for a in 1..=n {
        lin.push(&f.x[a - 1] * &diff(&v.expr, &VarId::X(a)));
    }
    let r = Expr::sum(vec![
        Expr::i() * eta_t,
        Expr::sum(eta_aa),
        Expr::sum(lin) * Expr::psi(),
        &v.expr * eta,
    ]);
    SolutionReducer::new(v).reduce(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{is_zero, parse, Codomain};
    use crate::fields::expand;

    fn zero(e: &Expr) -> bool {
        is_zero(e, 30, 2, 1e-8).unwrap()
    }

    #[test]
    fn free_equation_and_time_translation() {
        let v = Potential::zero(2);
        let r = classifying_residual(&v, &GeneratorCoeffs::d(2, Expr::one())).unwrap();
        assert!(zero(&r));
        let f = expand(&GeneratorCoeffs::d(2, Expr::one()));
        assert!(zero(&prolonged_residual(&v, &f)));
    }

    #[test]
    fn inverse_square_is_dilation_invariant() {
        let mut st = SymbolTable::new();
        st.declare("U", 0, Codomain::Complex);
        let v = Potential::parse("U*(x1^2 + x2^2)^(-1)", &st, 2).unwrap();
        let r = classifying_residual(&v, &GeneratorCoeffs::d(2, Expr::t())).unwrap();
        assert!(zero(&r));
    }

    #[test]
    fn time_dependent_potential_breaks_time_translation() {
        let v = Potential::parse("t*x1", &SymbolTable::new(), 2).unwrap();
        let r = classifying_residual(&v, &GeneratorCoeffs::d(2, Expr::one())).unwrap();
        assert!(!zero(&r));
        assert!(zero(&(r - Expr::x(1))));
    }

    #[test]
    fn eta0_fixtures() {
        let v = Potential::zero(2);
        assert!(zero(&eta0_residual(&v, &Expr::one())));
        assert!(zero(&eta0_residual(&v, &Expr::x(1))));
        let plane = (Expr::i() * (Expr::x(1) - Expr::t())).exp();
        assert!(zero(&eta0_residual(&v, &plane)));
        let wrong = (Expr::i() * (Expr::x(1) + Expr::t())).exp();
        assert!(!zero(&eta0_residual(&v, &wrong)));
    }

    #[test]
    fn linear_potential_breaks_translation() {
        let v = Potential::parse("x1", &SymbolTable::new(), 2).unwrap();
        let mut f = VectorField::zero(2);
        f.x[0] = Expr::one();
        let r = prolonged_residual(&v, &f);
        assert!(!zero(&r));
        assert!(zero(&(r - Expr::psi())));
    }

    #[test]
    fn prolonged_matches_classifying_times_psi() {
        let mut st = SymbolTable::new();
        st.declare("W", 3, Codomain::Complex);
        st.declare("s", 1, Codomain::Real);
        let v = Potential::parse("W(t, x1, x2)", &st, 2).unwrap();
        let g = GeneratorCoeffs {
            tau: parse("t^2").unwrap(),
            chi: vec![parse_with("s(t)", &st).unwrap(), parse("cos(t)").unwrap()],
            sigma: parse("t^3").unwrap(),
            rho: parse("sin(t)").unwrap(),
            ..GeneratorCoeffs::j(2, 1, 2)
        };
        let lhs = prolonged_residual(&v, &expand(&g));
        let rhs = classifying_residual(&v, &g).unwrap() * Expr::psi();
        assert!(zero(&(lhs - rhs)));
    }
}
