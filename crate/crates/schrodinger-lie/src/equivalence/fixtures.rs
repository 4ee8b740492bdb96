use std::collections::BTreeSet;

use super::{dt, identity_matrix, pushforward, real_amplitude, EquivTransformation};
use crate::conditions::CheckOutcome;
use crate::expr::{eval, Expr, Sampler, SamplerConfig, SurrogateBinding};
use crate::fields::GeneratorCoeffs;

/// Nearest multiple of `1/1024`, as an exact constant.
pub fn to_rational(x: f64) -> Expr {
    Expr::frac((x * 1024.0).round() as i64, 1024)
}

fn wave(s: &mut Sampler, lo: f64, hi: f64) -> (Expr, f64) {
    let w = s.uniform(lo, hi);
    let arg = to_rational(w) * Expr::t() + to_rational(s.uniform(0.0, 6.28));
    (arg, w)
}

/// `c₀ + c₁t + c₂cos(ωt + φ)` with random rational coefficients.
pub fn random_function(s: &mut Sampler) -> Expr {
    let (arg, _) = wave(s, 0.5, 2.0);
    Expr::sum(vec![
        to_rational(s.uniform(-1.0, 1.0)),
        to_rational(s.uniform(-1.0, 1.0)) * Expr::t(),
        to_rational(s.uniform(-1.0, 1.0)) * arg.cos(),
    ])
}

/// Generator with random `τ, χ, σ, ρ` and a random constant `κ`.
pub fn random_generator(s: &mut Sampler, n: usize) -> GeneratorCoeffs {
    let mut g = GeneratorCoeffs {
        tau: random_function(s),
        chi: (0..n).map(|_| random_function(s)).collect(),
        sigma: random_function(s),
        rho: random_function(s),
        ..GeneratorCoeffs::zero(n)
    };
    for k in g.kappa.iter_mut() {
        *k = to_rational(s.uniform(-1.0, 1.0));
    }
    g
}

/// Monotone map `d + a(t + c sin(ωt + φ))` of the real line with
/// `T_t ∈ [a/2, 3a/2]`.
pub fn random_time_map(s: &mut Sampler) -> Expr {
    let (arg, w) = wave(s, 0.5, 2.0);
    let c = s.uniform(-0.5, 0.5) / w;
    let a = s.uniform(0.6, 1.6);
    Expr::sum(vec![
        to_rational(s.uniform(-0.3, 0.3)),
        to_rational(a) * (Expr::t() + to_rational(c) * arg.sin()),
    ])
}

/// Rational rotation `((1−m²), −2m; 2m, (1−m²))/(1+m²)` in a random
/// coordinate plane, composed with a reflection half of the time.
pub fn random_rotation(s: &mut Sampler, n: usize) -> Vec<Vec<Expr>> {
    let mut o = identity_matrix(n);
    if n >= 2 {
        let a = (s.uniform(0.0, n as f64) as usize).min(n - 1);
        let b = (a + 1 + (s.uniform(0.0, (n - 1) as f64) as usize).min(n - 2)) % n;
        let m = (s.uniform(-2.0, 2.0) * 8.0).round() as i64;
        let d = 64 + m * m;
        let c = Expr::frac(64 - m * m, d);
        let sn = Expr::frac(16 * m, d);
        o[a][a] = c.clone();
        o[a][b] = -sn.clone();
        o[b][a] = sn;
        o[b][b] = c;
    }
    if s.uniform(0.0, 1.0) < 0.5 {
        for x in o[0].iter_mut() {
            *x = -x.clone();
        }
    }
    o
}

/// Random transformation with every parameter nontrivial and `T_t > 0`.
pub fn random_transformation(s: &mut Sampler, n: usize) -> EquivTransformation {
    EquivTransformation::new(
        random_time_map(s),
        random_rotation(s, n),
        (0..n).map(|_| random_function(s)).collect(),
        random_function(s),
        random_function(s),
    )
    .expect("random time maps are increasing")
}

/// As [`random_transformation`] with `Υ = −(n/4) ln|T_t|`; the time map is
/// reversed half of the time.
pub fn random_real_admissible(s: &mut Sampler, n: usize) -> EquivTransformation {
    let mut tm = random_time_map(s);
    if s.uniform(0.0, 1.0) < 0.5 {
        tm = -tm;
    }
    EquivTransformation::new(
        tm.clone(),
        random_rotation(s, n),
        (0..n).map(|_| random_function(s)).collect(),
        random_function(s),
        real_amplitude(&tm, n),
    )
    .expect("random time maps are monotone")
}

/// A generalized shift `P(χ) + σM + ρI` in the plane whose `χ` turns at a
/// positive rate is mapped to `P(h cos t, h sin t) + ρ̃I`: the time map is
/// the polar angle of `χ`, then a shift along `(−sin t, cos t)` removes `σ`.
pub fn reduce_generalized_shift(cfg: &SamplerConfig) -> CheckOutcome {
    let mut s = Sampler::new(SamplerConfig { n: 2, ..cfg.clone() });
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let draws = cfg.bindings.max(1);
    for draw in 0..draws {
        let angle = random_time_map(&mut s);
        let (arg, _) = wave(&mut s, 0.5, 2.0);
        let radius = to_rational(s.uniform(1.0, 2.0)) + to_rational(s.uniform(-0.5, 0.5)) * arg.cos();
        let g = GeneratorCoeffs {
            chi: vec![&radius * &angle.cos(), &radius * &angle.sin()],
            sigma: random_function(&mut s),
            rho: random_function(&mut s),
            ..GeneratorCoeffs::zero(2)
        };

        let time = EquivTransformation { time_map: angle.clone(), ..EquivTransformation::identity(2) };
        let g1 = pushforward(&g, &time).expect("elementary");
        // g1.chi = h(cos t, sin t) with h = |T_t|^{1/2}·radius at T⁻¹(t).
        let h = time.to_target(&(dt(&angle).abs_pow(crate::expr::q(1, 2)) * radius));
        let f = &g1.sigma * &h.recip();
        let shift = vec![-(&f * &Expr::t().sin()), &f * &Expr::t().cos()];
        let g2 = pushforward(&g1, &EquivTransformation { shift, ..EquivTransformation::identity(2) })
            .expect("elementary");

        let polar = &g2.chi[0] * &Expr::t().sin() - &g2.chi[1] * &Expr::t().cos();
        let b = SurrogateBinding::new();
        for _ in 0..cfg.points.clamp(1, 50) {
            let p = s.point(2, &BTreeSet::new());
            let vals = [&g2.sigma, &polar, &g2.tau]
                .iter()
                .map(|e| eval(e, &b, &p).map(|v| v.norm()))
                .collect::<Result<Vec<_>, _>>();
            let hv = eval(&h, &b, &p).map(|v| v.re);
            match (vals, hv) {
                (Ok(v), Ok(hv)) => {
                    let m = v.iter().cloned().fold(0.0, f64::max);
                    worst = worst.max(m);
                    if m > cfg.tol || hv <= 0.0 {
                        pass = false;
                        failures.push(format!("draw {draw} at t = {:.4}: residual {m:.3e}, h = {hv:.3}", p.t));
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    pass = false;
                    failures.push(format!("draw {draw}: {e}"));
                }
            }
        }
    }
    CheckOutcome {
        name: "generalized-shift-reduction".into(),
        pass,
        detail: if pass {
            format!("{draws} random P(χ)+σM+ρI reduced to P(h cos t, h sin t)+ρI (max residual {worst:.3e})")
        } else {
            failures.into_iter().take(3).collect::<Vec<_>>().join("; ")
        },
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_holds() {
        let c = reduce_generalized_shift(&SamplerConfig::default());
        assert!(c.pass, "{}", c.detail);
    }

    #[test]
    fn random_rotations_are_orthogonal() {
        let mut s = Sampler::new(SamplerConfig::default());
        for n in 1..=3 {
            for _ in 0..10 {
                super::super::check_orthogonal(&random_rotation(&mut s, n)).unwrap();
            }
        }
    }
}
