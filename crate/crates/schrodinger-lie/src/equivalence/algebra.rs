use std::collections::BTreeSet;

use serde::Serialize;

use super::{dt, identity_matrix, EquivTransformation};
use crate::conditions::Potential;
use crate::expr::{
    eval, q, radius_sq, Codomain, EvalError, Expr, Rational, Sampler, SamplerConfig, SymbolTable,
};
use crate::fields::GeneratorCoeffs;

/// A spanning field of the equivalence algebra with its parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum EquivGenerator {
    Time { n: usize, tau: Expr },
    Rotation { n: usize, a: usize, b: usize },
    Shift { chi: Vec<Expr> },
    Phase { n: usize, sigma: Expr },
    Amplitude { n: usize, rho: Expr },
}

impl EquivGenerator {
    pub fn n(&self) -> usize {
        match self {
            EquivGenerator::Time { n, .. }
            | EquivGenerator::Rotation { n, .. }
            | EquivGenerator::Phase { n, .. }
            | EquivGenerator::Amplitude { n, .. } => *n,
            EquivGenerator::Shift { chi } => chi.len(),
        }
    }

    /// The field without its `∂_V`, `∂_{V*}` parts.
    pub fn projection(&self) -> GeneratorCoeffs {
        match self {
            EquivGenerator::Time { n, tau } => GeneratorCoeffs::d(*n, tau.clone()),
            EquivGenerator::Rotation { n, a, b } => GeneratorCoeffs::j(*n, *a, *b),
            EquivGenerator::Shift { chi } => GeneratorCoeffs::p(chi.clone()),
            EquivGenerator::Phase { n, sigma } => GeneratorCoeffs::m(*n, sigma.clone()),
            EquivGenerator::Amplitude { n, rho } => GeneratorCoeffs::i(*n, rho.clone()),
        }
    }

    /// Coefficient of `∂_V`.
    pub fn potential_coefficient(&self, v: &Expr) -> Expr {
        let i = Expr::i();
        match self {
            EquivGenerator::Time { n, tau } => {
                let t1 = dt(tau);
                let t2 = dt(&t1);
                let t3 = dt(&t2);
                -Expr::sum(vec![
                    &t1 * v,
                    -(Expr::frac(1, 8) * t3 * radius_sq(*n)),
                    Expr::product(vec![i, Expr::frac(*n as i64, 4), t2]),
                ])
            }
            EquivGenerator::Rotation { .. } => Expr::zero(),
            EquivGenerator::Shift { chi } => Expr::sum(
                chi.iter()
                    .enumerate()
                    .map(|(a, c)| Expr::frac(1, 2) * dt(&dt(c)) * Expr::x(a + 1))
                    .collect(),
            ),
            EquivGenerator::Phase { sigma, .. } => dt(sigma),
            EquivGenerator::Amplitude { rho, .. } => -(i * dt(rho)),
        }
    }

    /// A one-parameter family of transformations tangent to this field.
    pub fn family(&self, delta: Rational) -> EquivTransformation {
        let d = Expr::rational(delta);
        let id = EquivTransformation::identity(self.n());
        match self {
            EquivGenerator::Time { tau, .. } => EquivTransformation { time_map: Expr::t() + &d * tau, ..id },
            EquivGenerator::Rotation { n, a, b } => {
                let mut o = identity_matrix(*n);
                let (c, s) = (d.cos(), d.sin());
                o[a - 1][a - 1] = c.clone();
                o[a - 1][b - 1] = -s.clone();
                o[b - 1][a - 1] = s;
                o[b - 1][b - 1] = c;
                EquivTransformation { rotation: o, ..id }
            }
            EquivGenerator::Shift { chi } => {
                EquivTransformation { shift: chi.iter().map(|c| &d * c).collect(), ..id }
            }
            EquivGenerator::Phase { sigma, .. } => EquivTransformation { phase: &d * sigma, ..id },
            EquivGenerator::Amplitude { rho, .. } => EquivTransformation { amplitude: &d * rho, ..id },
        }
    }
}

/// Largest relative deviations between finite differences along the
/// family and the closed-form components.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCheck {
    pub pass: bool,
    pub potential_error: f64,
    pub projection_error: f64,
    pub samples: usize,
}

const STEP: (i64, i64) = (1, 100_000);
const REL_TOL: f64 = 1e-4;

/// Central differences of `T`, `x̃`, the `ψ`-multiplier exponent and the
/// target potential at `δ = ±10⁻⁵`, compared with the field's components.
pub fn equiv_generator_report(gen: &EquivGenerator, cfg: &SamplerConfig) -> Result<GeneratorCheck, EvalError> {
    let n = gen.n();
    let mut st = SymbolTable::new();
    st.declare("W", n + 1, Codomain::Complex);
    let args = std::iter::once("t".to_string()).chain((1..=n).map(|a| format!("x{a}"))).collect::<Vec<_>>();
    let v = Potential::parse(&format!("W({})", args.join(", ")), &st, n).expect("generic potential");

    let plus = gen.family(q(STEP.0, STEP.1));
    let minus = gen.family(q(-STEP.0, STEP.1));
    let h = 2.0 * STEP.0 as f64 / STEP.1 as f64;
    let field = crate::fields::expand(&gen.projection());
    let mult = gen.projection().psi_multiplier();
    let coeff = gen.potential_coefficient(&v.expr);

    let mut pairs = vec![
        (plus.potential_at_source(&v.expr), minus.potential_at_source(&v.expr), coeff),
        (plus.phase_factor(), minus.phase_factor(), mult),
        (plus.time_map.clone(), minus.time_map.clone(), field.t.clone()),
    ];
    for ((p, m), c) in plus.space_map().into_iter().zip(minus.space_map()).zip(field.x.clone()) {
        pairs.push((p, m, c));
    }

    let mut sampler = Sampler::new(SamplerConfig { n, ..cfg.clone() });
    let mut syms = st.symbols().cloned().collect::<Vec<_>>();
    for s in gen.projection().symbols() {
        syms.push(s);
    }
    let mut errs = [0.0f64; 2];
    let mut samples = 0;
    for _ in 0..cfg.bindings.max(1) {
        let b = sampler.binding(&syms, &Default::default());
        for _ in 0..cfg.points.clamp(1, 20) {
            let p = sampler.point(n, &BTreeSet::new());
            for (k, (ep, em, exact)) in pairs.iter().enumerate() {
                let fd = (eval(ep, &b, &p)? - eval(em, &b, &p)?) / h;
                let want = eval(exact, &b, &p)?;
                let rel = (fd - want).norm() / want.norm().max(1.0);
                let slot = usize::from(k > 0);
                errs[slot] = errs[slot].max(rel);
            }
            samples += 1;
        }
    }
    Ok(GeneratorCheck {
        pass: errs[0] <= REL_TOL && errs[1] <= REL_TOL,
        potential_error: errs[0],
        projection_error: errs[1],
        samples,
    })
}

/// Whether the closed-form `∂_V` coefficient and the projection match the
/// derivative of the corresponding family.
pub fn equiv_generator_check(gen: &EquivGenerator) -> bool {
    let cfg = SamplerConfig { bindings: 2, points: 20, ..SamplerConfig::default() };
    equiv_generator_report(gen, &cfg).map(|r| r.pass).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::expr;

    #[test]
    fn all_families() {
        let gens = [
            EquivGenerator::Time { n: 2, tau: expr("1 + t^2 + t^3/4") },
            EquivGenerator::Rotation { n: 2, a: 1, b: 2 },
            EquivGenerator::Shift { chi: vec![expr("t^3"), expr("cos(t)")] },
            EquivGenerator::Phase { n: 2, sigma: expr("sin(t)") },
            EquivGenerator::Amplitude { n: 2, rho: expr("t^2") },
        ];
        for g in gens {
            let r = equiv_generator_report(&g, &SamplerConfig::default()).unwrap();
            assert!(r.pass, "{g:?}: {r:?}");
        }
    }

    #[test]
    fn printed_dilation_coefficient_fails_for_n_2() {
        // Without the factor n in the imaginary part.
        let tau = expr("t^2");
        let g = EquivGenerator::Time { n: 2, tau: tau.clone() };
        let v = Expr::zero();
        let printed = g.potential_coefficient(&v) + Expr::i() * Expr::frac(1, 4) * dt(&dt(&tau));
        let exact = g.potential_coefficient(&v);
        let fam = |d: i64| g.family(q(d, 100_000)).potential_at_source(&v);
        let mut s = Sampler::new(SamplerConfig::default());
        let b = Default::default();
        for _ in 0..10 {
            let p = s.point(2, &BTreeSet::new());
            let fd = (eval(&fam(1), &b, &p).unwrap() - eval(&fam(-1), &b, &p).unwrap()) / 2e-5;
            assert!((fd - eval(&exact, &b, &p).unwrap()).norm() < 1e-4);
            assert!((fd - eval(&printed, &b, &p).unwrap()).norm() > 0.1);
        }
    }
}
