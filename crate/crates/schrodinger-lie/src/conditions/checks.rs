use serde::Serialize;

use super::cases::CheckOutcome;
use super::{classifying_residual, Potential};
use crate::expr::{parse_with, Codomain, Expr, Sampler, SamplerConfig, SymbolTable};
use crate::fields::GeneratorCoeffs;

const KERNEL_POTENTIALS: usize = 6;

/// Outcome of the kernel test: which generators annihilate every potential.
#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
}

fn generic_potential() -> (SymbolTable, Potential) {
    let mut st = SymbolTable::new();
    st.declare("W", 3, Codomain::Complex);
    let v = Potential::parse("W(t, x1, x2)", &st, 2).expect("fixed template");
    (st, v)
}

fn p(a: &str, b: &str) -> GeneratorCoeffs {
    let st = SymbolTable::new();
    GeneratorCoeffs::p(vec![parse_with(a, &st).unwrap(), parse_with(b, &st).unwrap()])
}

/// `M` and `I` must annihilate the classifying condition for every potential;
/// each other elementary generator must fail for some random potential.
pub fn kernel_check() -> KernelReport {
    kernel_check_with(&SamplerConfig::default())
}

pub fn kernel_check_with(cfg: &SamplerConfig) -> KernelReport {
    let (st, v) = generic_potential();
    let mut sampler = Sampler::new(SamplerConfig { n: 2, ..cfg.clone() });
    let syms: Vec<_> = st.symbols().cloned().collect();
    let bindings: Vec<_> = (0..KERNEL_POTENTIALS).map(|_| sampler.binding(&syms, st.hints())).collect();

    let kernel = [
        ("M", GeneratorCoeffs::m(2, Expr::one())),
        ("I", GeneratorCoeffs::i(2, Expr::one())),
    ];
    let others = [
        ("D(1)", GeneratorCoeffs::d(2, Expr::one())),
        ("D(t)", GeneratorCoeffs::d(2, Expr::t())),
        ("D(t^2)", GeneratorCoeffs::d(2, Expr::t().pow(2))),
        ("J", GeneratorCoeffs::j(2, 1, 2)),
        ("P(1,0)", p("1", "0")),
        ("P(t,0)", p("t", "0")),
        ("P(0,1)", p("0", "1")),
        ("P(0,t)", p("0", "t")),
    ];
    let mut checks = Vec::new();
    for (name, g) in kernel.iter().chain(others.iter()) {
        let r = classifying_residual(&v, g).expect("n = 2");
        let in_kernel = kernel.iter().any(|(k, _)| k == name);
        let mut zero_for_all = true;
        let mut witness = None;
        let mut max = 0.0f64;
        for b in &bindings {
            match sampler.check_with(&r, b) {
                Ok(rep) => {
                    max = max.max(rep.max_normalized);
                    if !rep.pass {
                        zero_for_all = false;
                        witness = witness.or(rep.witness);
                    }
                }
                Err(_) => zero_for_all = false,
            }
        }
        let pass = zero_for_all == in_kernel;
        let detail = if zero_for_all {
            format!("{name} annihilates {KERNEL_POTENTIALS} random potentials")
        } else {
            format!("{name} fails for a random potential (max residual {max:.3e})")
        };
        checks.push(CheckOutcome {
            name: name.to_string(),
            pass,
            detail,
            witness: if in_kernel { witness } else { None },
        });
    }
    KernelReport { pass: checks.iter().all(|c| c.pass), checks }
}

/// Known structural facts of the classification proof, checked on fixtures.
pub fn lemma_fixtures() -> LemmaReport {
    let mut checks = vec![shift_partner()];
    checks.push(crate::equivalence::reduce_generalized_shift(&SamplerConfig::default()));
    LemmaReport { pass: checks.iter().all(|c| c.pass), checks }
}

/// If `P(1,0) + ρ¹I` is a symmetry of `V = U(t,x₂) − iρ¹_t x₁`, so is
/// `P(t,0) + ρ²I` with `ρ²_t = tρ¹_t`. Taking `ρ¹ = F'` gives `ρ² = tF' − F`.
fn shift_partner() -> CheckOutcome {
    let mut st = SymbolTable::new();
    st.declare("U", 2, Codomain::Complex);
    st.declare("F", 1, Codomain::Real);
    let v = Potential::parse("U(t, x2) - i*F[2](t)*x1", &st, 2).expect("fixed template");
    let e = |s: &str| parse_with(s, &st).expect("fixed template");
    let first = p("1", "0").add(&GeneratorCoeffs::i(2, e("F[1](t)")));
    let second = p("t", "0").add(&GeneratorCoeffs::i(2, e("t*F[1](t) - F(t)")));
    let mut sampler = Sampler::new(SamplerConfig::default());
    let mut pass = true;
    let mut max = 0.0f64;
    let mut witness = None;
    for g in [&first, &second] {
        let r = classifying_residual(&v, g).expect("n = 2");
        match sampler.check(&r, st.hints()) {
            Ok(rep) => {
                max = max.max(rep.max_normalized);
                pass &= rep.pass;
                witness = witness.or(rep.witness);
            }
            Err(_) => pass = false,
        }
    }
    CheckOutcome {
        name: "shift-partner".into(),
        pass,
        detail: format!("P(1,0)+F'I and P(t,0)+(tF'-F)I are symmetries (max residual {max:.3e})"),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_phase_and_scaling() {
        let r = kernel_check();
        assert!(r.pass, "{:#?}", r.checks);
    }

    #[test]
    fn shift_partner_holds() {
        let c = shift_partner();
        assert!(c.pass, "{}", c.detail);
    }
}
