mod common;

use common::{deviation, generic_potential, identity, real_potential, sampler};
use proptest::prelude::*;
use schrodinger_lie::conditions::{builtin_table, Potential};
use schrodinger_lie::equivalence::{
    act_on_potential, compose, invert, is_real_admissible, random_real_admissible, random_transformation,
    AdmissibleTransformation, EquivTransformation,
};
use schrodinger_lie::expr::{diff, parse, Expr, SamplerConfig, SurrogateBinding, SymbolTable, VarId};

const TOL: f64 = 1e-8;

fn all_symbols(syms: &SymbolTable) -> Vec<std::sync::Arc<schrodinger_lie::expr::FunctionSymbol>> {
    syms.symbols().cloned().collect()
}

fn phase_shift(s: i64) -> EquivTransformation {
    EquivTransformation::new(Expr::t(), identity(2), vec![Expr::zero(); 2], Expr::int(s) * Expr::t(), Expr::zero()).unwrap()
}

/// `iψ_t + Δψ + Vψ`.
fn equation(psi: &Expr, v: &Expr, n: usize) -> Expr {
    let mut terms = vec![Expr::i() * diff(psi, &VarId::T), v * psi];
    for a in 1..=n {
        terms.push(diff(&diff(psi, &VarId::X(a)), &VarId::X(a)));
    }
    Expr::sum(terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn action_is_functorial(seed in any::<u64>()) {
        let mut s = sampler(seed, 20);
        let mut syms = SymbolTable::new();
        let v = generic_potential(&mut s, &mut syms);
        let b = s.binding(&all_symbols(&syms), syms.hints());
        let (t1, t2) = (random_transformation(&mut s, 2), random_transformation(&mut s, 2));
        let direct = act_on_potential(&v, &t1.then(&t2).unwrap()).unwrap();
        let stepwise = act_on_potential(&act_on_potential(&v, &t1).unwrap(), &t2).unwrap();
        prop_assert!(deviation(&(direct.expr - stepwise.expr), &b, &mut s) < TOL);
    }

    #[test]
    fn inverse_round_trip(seed in any::<u64>()) {
        let mut s = sampler(seed, 20);
        let mut syms = SymbolTable::new();
        let v = generic_potential(&mut s, &mut syms);
        let b = s.binding(&all_symbols(&syms), syms.hints());
        let t = AdmissibleTransformation::new(v.clone(), random_transformation(&mut s, 2)).unwrap();
        let back = compose(&t, &invert(&t)).unwrap();
        prop_assert!(deviation(&(act_on_potential(&v, &back.map).unwrap().expr - v.expr.clone()), &b, &mut s) < TOL);
        let there = compose(&invert(&t), &t).unwrap();
        prop_assert!(deviation(&(act_on_potential(&t.target, &there.map).unwrap().expr - t.target.expr.clone()), &b, &mut s) < TOL);
    }

    #[test]
    fn real_admissible_maps_preserve_realness(seed in any::<u64>()) {
        let mut s = sampler(seed, 30);
        let mut syms = SymbolTable::new();
        let v = real_potential(&mut s, &mut syms);
        let tr = random_real_admissible(&mut s, 2);
        prop_assert!(is_real_admissible(&tr, 2));
        let b = s.binding(&all_symbols(&syms), syms.hints());
        let w = act_on_potential(&v, &tr).unwrap();
        prop_assert!(deviation(&w.expr.im(), &b, &mut s) < TOL);
    }
}

#[test]
fn phase_shift_adds_its_rate() {
    let w = act_on_potential(&Potential::zero(2), &phase_shift(3)).unwrap();
    let mut s = sampler(1, 20);
    assert!(deviation(&(w.expr - Expr::int(3)), &SurrogateBinding::new(), &mut s) < TOL);
}

#[test]
fn phase_shifts_compose_additively() {
    let mut s = sampler(2, 20);
    let mut syms = SymbolTable::new();
    let v = generic_potential(&mut s, &mut syms);
    let b = s.binding(&all_symbols(&syms), syms.hints());
    let both = phase_shift(2).then(&phase_shift(-5)).unwrap();
    let lhs = act_on_potential(&v, &both).unwrap().expr;
    let rhs = act_on_potential(&v, &phase_shift(-3)).unwrap().expr;
    assert!(deviation(&(lhs - rhs), &b, &mut s) < TOL);
    let inv = phase_shift(4).inverse();
    let rhs = act_on_potential(&v, &phase_shift(-4)).unwrap().expr;
    assert!(deviation(&(act_on_potential(&v, &inv).unwrap().expr - rhs), &b, &mut s) < TOL);
}

#[test]
fn scaling_keeps_the_inverse_square_family() {
    let case = builtin_table().get(7).unwrap();
    let scale = EquivTransformation::new(
        Expr::int(4) * Expr::t(),
        identity(2),
        vec![Expr::zero(); 2],
        Expr::zero(),
        Expr::zero(),
    )
    .unwrap();
    let w = act_on_potential(&case.potential, &scale).unwrap();
    let mut s = sampler(3, 40);
    let b = s.binding(&case.potential.expr.symbols(), case.hints());
    assert!(deviation(&(w.expr.clone() - case.potential.expr.clone()), &b, &mut s) < TOL);

    let inv = scale.inverse();
    let mut s2 = sampler(4, 20);
    assert!(deviation(&(inv.time_map.clone() - Expr::frac(1, 4) * Expr::t()), &SurrogateBinding::new(), &mut s2) < TOL);
    let back = act_on_potential(&w, &inv).unwrap();
    assert!(deviation(&(back.expr - case.potential.expr.clone()), &b, &mut s) < TOL);
}

#[test]
fn wigner_reflection_conjugates_the_potential() {
    let mut s = sampler(5, 30);
    let mut syms = SymbolTable::new();
    let v = generic_potential(&mut s, &mut syms);
    let b = s.binding(&all_symbols(&syms), syms.hints());
    let w = EquivTransformation::wigner(2);
    assert_eq!(w.orientation(), -1);
    let image = act_on_potential(&v, &w).unwrap();
    let expected = EquivTransformation::wigner(2).to_target(&v.expr.conj_deep());
    assert!(deviation(&(image.expr.clone() - expected), &b, &mut s) < TOL);
    let twice = act_on_potential(&image, &w).unwrap();
    assert!(deviation(&(twice.expr - v.expr), &b, &mut s) < TOL);
}

#[test]
fn non_admissible_time_map_breaks_realness() {
    let mut s = sampler(6, 30);
    let mut syms = SymbolTable::new();
    let v = real_potential(&mut s, &mut syms);
    let b = s.binding(&all_symbols(&syms), syms.hints());
    let tr = EquivTransformation::new(
        Expr::t() + Expr::frac(1, 3) * Expr::t().pow(2),
        identity(2),
        vec![Expr::zero(); 2],
        Expr::zero(),
        Expr::zero(),
    )
    .unwrap();
    assert!(!is_real_admissible(&tr, 2));
    let w = act_on_potential(&v, &tr).unwrap();
    assert!(deviation(&w.expr.im(), &b, &mut s) > 1e-3);
}

#[test]
fn solutions_are_transported() {
    let mut s = sampler(7, 30);
    let plane = parse("exp(i*(x1 - 2*x2) - 5*i*t)").unwrap();
    let other = parse("exp(i*(3*x2) - 9*i*t)").unwrap();
    let free = Potential::zero(2);
    let b = SurrogateBinding::new();
    assert!(deviation(&equation(&plane, &free.expr, 2), &b, &mut s) < TOL);
    for _ in 0..4 {
        let tr = random_transformation(&mut s, 2);
        let w = act_on_potential(&free, &tr).unwrap();
        let image = tr.act_on_solution(&plane);
        assert!(deviation(&equation(&image, &w.expr, 2), &b, &mut s) < TOL);

        let shifted = tr.clone().with_solution_shift(other.clone());
        let image = shifted.act_on_solution(&plane);
        assert!(deviation(&equation(&image, &w.expr, 2), &b, &mut s) < TOL);

        let bad = tr.with_solution_shift(Expr::x(1).pow(2));
        let image = bad.act_on_solution(&plane);
        assert!(deviation(&equation(&image, &w.expr, 2), &b, &mut s) > 1e-4);
    }
}

#[test]
fn mismatched_pairs_do_not_compose() {
    let mut s = sampler(8, 20);
    let mut syms = SymbolTable::new();
    let v = generic_potential(&mut s, &mut syms);
    let t1 = AdmissibleTransformation::new(v.clone(), phase_shift(1)).unwrap();
    let t2 = AdmissibleTransformation::new(v, phase_shift(1)).unwrap();
    assert!(compose(&t1, &t2).is_err());
    assert!(compose(&t1, &AdmissibleTransformation::identity(t1.target.clone())).is_ok());
    assert!(t1.verify(&SamplerConfig::default()).unwrap().pass);
}
