use super::{dot, dt, identity_matrix, mat_mul, mat_vec, transpose, EquivError, EquivTransformation};
use crate::expr::{diff, q, subst_many, Expr, VarId};
use crate::fields::{pair_index, pairs, GeneratorCoeffs, VectorField};

/// The five one-parameter-function families generating the transformations.
#[derive(Clone, Debug, PartialEq)]
pub enum Elementary {
    Time(Expr),
    Rotation(Vec<Vec<Expr>>),
    Shift(Vec<Expr>),
    Phase(Expr),
    Amplitude(Expr),
}

impl EquivTransformation {
    /// The elementary family this transformation belongs to, if any; the
    /// identity is reported as a zero phase.
    pub fn elementary(&self) -> Option<Elementary> {
        if self.solution_shift.is_some() {
            return None;
        }
        let n = self.n();
        let mut found = Vec::new();
        if self.time_map != Expr::t() {
            found.push(Elementary::Time(self.time_map.clone()));
        }
        if self.rotation != identity_matrix(n) {
            found.push(Elementary::Rotation(self.rotation.clone()));
        }
        if self.shift.iter().any(|e| !e.is_zero_const()) {
            found.push(Elementary::Shift(self.shift.clone()));
        }
        if !self.phase.is_zero_const() {
            found.push(Elementary::Phase(self.phase.clone()));
        }
        if !self.amplitude.is_zero_const() {
            found.push(Elementary::Amplitude(self.amplitude.clone()));
        }
        match found.len() {
            0 => Some(Elementary::Phase(Expr::zero())),
            1 => found.pop(),
            _ => None,
        }
    }
}

fn kappa_matrix(g: &GeneratorCoeffs) -> Vec<Vec<Expr>> {
    let n = g.n();
    (1..=n)
        .map(|a| (1..=n).map(|b| if a == b { Expr::zero() } else { g.kappa_at(a, b) }).collect())
        .collect()
}

/// Closed-form image of a generator under an elementary transformation,
/// written in the target variables.
pub fn pushforward(g: &GeneratorCoeffs, tr: &EquivTransformation) -> Result<GeneratorCoeffs, EquivError> {
    let n = g.n();
    if tr.n() != n {
        return Err(EquivError::Shape { expected: n, got: tr.n() });
    }
    let kind = tr.elementary().ok_or(EquivError::NotElementary)?;
    let mut out = g.clone();
    match kind {
        Elementary::Time(map) => {
            let speed = dt(&map);
            let root = speed.abs_pow(q(1, 2));
            out.tau = tr.to_target(&(&speed * &g.tau));
            out.kappa = g.kappa.iter().map(|k| tr.to_target(k)).collect();
            out.chi = g.chi.iter().map(|c| tr.to_target(&(&root * c))).collect();
            out.sigma = Expr::int(tr.orientation()) * tr.to_target(&g.sigma);
            out.rho = tr.to_target(&g.rho);
        }
        Elementary::Rotation(o) => {
            out.chi = mat_vec(&o, &g.chi);
            let k = mat_mul(&mat_mul(&o, &kappa_matrix(g)), &transpose(&o));
            for (a, b) in pairs(n) {
                out.kappa[pair_index(n, a, b)] = k[a - 1][b - 1].clone();
            }
        }
        Elementary::Shift(x) => {
            let xt: Vec<Expr> = x.iter().map(dt).collect();
            let xtt: Vec<Expr> = xt.iter().map(dt).collect();
            let tau_t = dt(&g.tau);
            let tau_tt = dt(&tau_t);
            let kx = mat_vec(&kappa_matrix(g), &x);
            out.chi = (0..n)
                .map(|a| {
                    Expr::sum(vec![
                        g.chi[a].clone(),
                        &g.tau * &xt[a],
                        -(Expr::frac(1, 2) * &tau_t * x[a].clone()),
                        kx[a].clone(),
                    ])
                })
                .collect();
            let chi_t: Vec<Expr> = g.chi.iter().map(dt).collect();
            let mut sigma = vec![
                g.sigma.clone(),
                Expr::frac(1, 8) * &tau_tt * dot(&x, &x),
                -(Expr::frac(1, 4) * &tau_t * dot(&x, &xt)),
                -(Expr::frac(1, 2) * &g.tau * dot(&x, &xtt)),
                Expr::frac(1, 2) * (dot(&g.chi, &xt) - dot(&chi_t, &x)),
            ];
            for (a, b) in pairs(n) {
                let k = g.kappa_at(a, b);
                let w = &x[a - 1] * &xt[b - 1] - &x[b - 1] * &xt[a - 1];
                sigma.push(-(Expr::frac(1, 2) * &k * w));
            }
            out.sigma = Expr::sum(sigma);
        }
        Elementary::Phase(s) => {
            out.sigma = &g.sigma + &(&g.tau * &dt(&s));
        }
        Elementary::Amplitude(u) => {
            out.rho = &g.rho + &(&g.tau * &dt(&u));
        }
    }
    if let Some(e) = &g.eta0 {
        out.eta0 = Some(tr.act_on_solution(e));
    }
    Ok(out)
}

/// Image of a vector field on `(t, x, ψ, ψ*)` under an arbitrary
/// transformation, by the chain rule and substitution of the inverse map.
pub fn push_vector_field(f: &VectorField, tr: &EquivTransformation) -> VectorField {
    let n = tr.n();
    let apply = |h: &Expr| -> Expr {
        let mut terms = vec![&f.t * &diff(h, &VarId::T)];
        for a in 1..=n {
            terms.push(&f.x[a - 1] * &diff(h, &VarId::X(a)));
        }
        Expr::sum(terms)
    };
    let phase = tr.phase_factor();
    let lambda = tr.hat(&tr.solution_shift.clone().unwrap_or_else(Expr::zero));
    let (psi_hat, eta_hat) = if tr.orientation() > 0 {
        (Expr::psi(), f.psi.clone())
    } else {
        (Expr::var(VarId::psi_conj()), f.psi_conj.clone())
    };
    let psi = phase.exp() * Expr::sum(vec![apply(&phase) * (psi_hat + lambda.clone()), eta_hat, apply(&lambda)]);

    // ψ̂ = e^{−F}ψ̃ − Λ̂, with ψ̃ written as ψ.
    let back = (-phase).exp() * Expr::psi() - lambda;
    let back = tr.hat(&back);
    let psi = subst_many(&psi, &[(VarId::psi(), back.clone()), (VarId::psi_conj(), back.conj_deep())]);
    let psi = tr.to_target(&psi);

    let x_map = tr.space_map();
    VectorField {
        t: tr.to_target(&apply(&tr.time_map)),
        x: x_map.iter().map(|x| tr.to_target(&apply(x))).collect(),
        psi_conj: psi.conj_deep(),
        psi,
    }
}
