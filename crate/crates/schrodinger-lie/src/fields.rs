//! Canonical symmetry generators `D(τ) + Σ κ_ab J_ab + P(χ) + σM + ρI + Z(η⁰)`,
//! their expansion into vector fields and their Lie brackets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{
    diff, eval, parse_with, radius_sq, EvalError, Expr, FunctionSymbol, Jet, ParseError,
    SamplePoint, Sampler, SurrogateBinding, SymbolHint, SymbolTable, VarId,
};
use crate::linalg;

/// Coefficients of a generator in canonical form.
///
/// `kappa` lists the coefficients of `J_ab = x_a∂_b − x_b∂_a` for `a < b`
/// in row-major order: `(1,2), (1,3), .., (2,3), ..`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorCoeffs {
    pub tau: Expr,
    pub kappa: Vec<Expr>,
    pub chi: Vec<Expr>,
    pub sigma: Expr,
    pub rho: Expr,
    pub eta0: Option<Expr>,
}

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("coefficient `{field}` = {expr} {why}")]
    Shape { field: String, expr: String, why: String },
    #[error("kappa must be a skew-symmetric {n}x{n} matrix")]
    Kappa { n: usize },
}

pub fn pair_count(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// Index of the pair `(a, b)`, `1 ≤ a < b ≤ n`, in the strict upper triangle.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    assert!(1 <= a && a < b && b <= n, "bad pair ({a},{b}) for n = {n}");
    (a - 1) * n - (a - 1) * a / 2 + (b - a - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            v.push((a, b));
        }
    }
    v
}

impl GeneratorCoeffs {
    pub fn zero(n: usize) -> Self {
        GeneratorCoeffs {
            tau: Expr::zero(),
            kappa: vec![Expr::zero(); pair_count(n)],
            chi: vec![Expr::zero(); n],
            sigma: Expr::zero(),
            rho: Expr::zero(),
            eta0: None,
        }
    }

    pub fn n(&self) -> usize {
        self.chi.len()
    }

    pub fn d(n: usize, tau: Expr) -> Self {
        GeneratorCoeffs { tau, ..Self::zero(n) }
    }

    pub fn j(n: usize, a: usize, b: usize) -> Self {
        let mut g = Self::zero(n);
        g.kappa[pair_index(n, a, b)] = Expr::one();
        g
    }

    pub fn p(chi: Vec<Expr>) -> Self {
        let n = chi.len();
        GeneratorCoeffs { chi, ..Self::zero(n) }
    }

    /// `σM` with `M = i(ψ∂_ψ − ψ*∂_ψ*)`.
    pub fn m(n: usize, sigma: Expr) -> Self {
        GeneratorCoeffs { sigma, ..Self::zero(n) }
    }

    /// `ρI` with `I = ψ∂_ψ + ψ*∂_ψ*`.
    pub fn i(n: usize, rho: Expr) -> Self {
        GeneratorCoeffs { rho, ..Self::zero(n) }
    }

    pub fn z(n: usize, eta0: Expr) -> Self {
        GeneratorCoeffs { eta0: Some(eta0), ..Self::zero(n) }
    }

    /// Coefficient of `J_ab` extended skew-symmetrically to all `a, b`.
    pub fn kappa_at(&self, a: usize, b: usize) -> Expr {
        let n = self.n();
        if a == b {
            Expr::zero()
        } else if a < b {
            self.kappa[pair_index(n, a, b)].clone()
        } else {
            -&self.kappa[pair_index(n, b, a)]
        }
    }

    pub fn with_kappa(mut self, a: usize, b: usize, k: Expr) -> Self {
        let n = self.n();
        if a < b {
            self.kappa[pair_index(n, a, b)] = k;
        } else {
            self.kappa[pair_index(n, b, a)] = -k;
        }
        self
    }

    fn zip(&self, o: &Self, f: impl Fn(&Expr, &Expr) -> Expr) -> Self {
        assert_eq!(self.n(), o.n(), "dimension mismatch");
        let eta0 = match (&self.eta0, &o.eta0) {
            (None, None) => None,
            (a, b) => Some(f(
                a.as_ref().unwrap_or(&Expr::zero()),
                b.as_ref().unwrap_or(&Expr::zero()),
            )),
        };
        GeneratorCoeffs {
            tau: f(&self.tau, &o.tau),
            kappa: self.kappa.iter().zip(&o.kappa).map(|(a, b)| f(a, b)).collect(),
            chi: self.chi.iter().zip(&o.chi).map(|(a, b)| f(a, b)).collect(),
            sigma: f(&self.sigma, &o.sigma),
            rho: f(&self.rho, &o.rho),
            eta0,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    /// Multiplies every coefficient by a constant expression.
    pub fn scale(&self, c: &Expr) -> Self {
        self.map(|e| c * e)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        GeneratorCoeffs {
            tau: f(&self.tau),
            kappa: self.kappa.iter().map(&f).collect(),
            chi: self.chi.iter().map(&f).collect(),
            sigma: f(&self.sigma),
            rho: f(&self.rho),
            eta0: self.eta0.as_ref().map(&f),
        }
    }

    /// All coefficient expressions in a fixed order, `η⁰` last when present.
    pub fn components(&self) -> Vec<Expr> {
        let mut v = vec![self.tau.clone()];
        v.extend(self.kappa.iter().cloned());
        v.extend(self.chi.iter().cloned());
        v.push(self.sigma.clone());
        v.push(self.rho.clone());
        if let Some(e) = &self.eta0 {
            v.push(e.clone());
        }
        v
    }

    pub fn symbols(&self) -> Vec<std::sync::Arc<FunctionSymbol>> {
        let mut seen = BTreeMap::new();
        for c in self.components() {
            for s in c.symbols() {
                seen.entry(s.name.clone()).or_insert(s);
            }
        }
        seen.into_values().collect()
    }

    /// `ψ`-multiplier of the expanded field:
    /// `(i/8)τ_tt|x|² + (i/2)χᵃ_t x_a + ρ + iσ`.
    pub fn psi_multiplier(&self) -> Expr {
        let n = self.n();
        let i = Expr::i();
        let tau_tt = diff(&diff(&self.tau, &VarId::T), &VarId::T);
        let mut terms = vec![Expr::product(vec![Expr::frac(1, 8), i.clone(), tau_tt, radius_sq(n)])];
        for a in 1..=n {
            let chi_t = diff(&self.chi[a - 1], &VarId::T);
            terms.push(Expr::product(vec![Expr::frac(1, 2), i.clone(), chi_t, Expr::x(a)]));
        }
        terms.push(self.rho.clone());
        terms.push(&i * &self.sigma);
        Expr::sum(terms)
    }

    /// Spatial component `ξᵃ = ½τ_t x_a − κ_ab x_b + χᵃ`.
    pub fn xi(&self, a: usize) -> Expr {
        let n = self.n();
        let tau_t = diff(&self.tau, &VarId::T);
        let mut terms = vec![Expr::product(vec![Expr::frac(1, 2), tau_t, Expr::x(a)])];
        for b in 1..=n {
            if b != a {
                terms.push(-(self.kappa_at(a, b) * Expr::x(b)));
            }
        }
        terms.push(self.chi[a - 1].clone());
        Expr::sum(terms)
    }

    /// Checks that `τ, χ, σ, ρ` depend on `t` only, are real, and that `κ`
    /// is constant.
    pub fn validate(&self) -> Result<(), FieldError> {
        let check = |field: &str, e: &Expr, allow_t: bool| -> Result<(), FieldError> {
            let bad = |why: &str| FieldError::Shape {
                field: field.to_string(),
                expr: e.to_string(),
                why: why.to_string(),
            };
            if !e.is_real() {
                return Err(bad("is not real-valued"));
            }
            for v in e.vars() {
                match v {
                    VarId::T if allow_t => {}
                    VarId::T => return Err(bad("must not depend on t")),
                    VarId::X(_) => return Err(bad("must not depend on x")),
                    VarId::Jet(_) => return Err(bad("must not contain ψ")),
                }
            }
            Ok(())
        };
        check("tau", &self.tau, true)?;
        for (k, e) in self.kappa.iter().enumerate() {
            check(&format!("kappa[{k}]"), e, false)?;
        }
        for (k, e) in self.chi.iter().enumerate() {
            check(&format!("chi[{}]", k + 1), e, true)?;
        }
        check("sigma", &self.sigma, true)?;
        check("rho", &self.rho, true)?;
        if let Some(e) = &self.eta0 {
            if e.vars().iter().any(|v| matches!(v, VarId::Jet(_))) {
                return Err(FieldError::Shape {
                    field: "eta0".into(),
                    expr: e.to_string(),
                    why: "must not contain ψ".into(),
                });
            }
        }
        Ok(())
    }

    pub fn from_spec(spec: &FieldSpec, syms: &SymbolTable) -> Result<Self, FieldError> {
        let n = spec.chi.len();
        let p = |s: &Scalar| s.parse(syms);
        let mut kappa = vec![Expr::zero(); pair_count(n)];
        if !spec.kappa.is_empty() {
            if spec.kappa.len() != n || spec.kappa.iter().any(|r| r.len() != n) {
                return Err(FieldError::Kappa { n });
            }
            for a in 1..=n {
                for b in 1..=n {
                    let e = p(&spec.kappa[a - 1][b - 1])?;
                    let mirror = p(&spec.kappa[b - 1][a - 1])?;
                    if a == b && !e.is_zero_const() || a < b && e != -&mirror {
                        return Err(FieldError::Kappa { n });
                    }
                    if a < b {
                        kappa[pair_index(n, a, b)] = e;
                    }
                }
            }
        }
        let g = GeneratorCoeffs {
            tau: p(&spec.tau)?,
            kappa,
            chi: spec.chi.iter().map(p).collect::<Result<_, _>>()?,
            sigma: p(&spec.sigma)?,
            rho: p(&spec.rho)?,
            eta0: spec.eta0.as_ref().map(p).transpose()?,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn to_spec(&self) -> FieldSpec {
        let n = self.n();
        let s = |e: &Expr| Scalar::Text(e.to_string());
        FieldSpec {
            tau: s(&self.tau),
            kappa: (1..=n).map(|a| (1..=n).map(|b| s(&self.kappa_at(a, b))).collect()).collect(),
            chi: self.chi.iter().map(s).collect(),
            sigma: s(&self.sigma),
            rho: s(&self.rho),
            eta0: self.eta0.as_ref().map(s),
        }
    }
}

impl fmt::Display for GeneratorCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.tau.is_zero_const() {
            parts.push(format!("D({})", self.tau));
        }
        for (k, (a, b)) in pairs(self.n()).into_iter().enumerate() {
            let c = &self.kappa[k];
            if c.is_one_const() {
                parts.push(format!("J{a}{b}"));
            } else if !c.is_zero_const() {
                parts.push(format!("({c})*J{a}{b}"));
            }
        }
        if self.chi.iter().any(|c| !c.is_zero_const()) {
            let cs: Vec<String> = self.chi.iter().map(|c| c.to_string()).collect();
            parts.push(format!("P({})", cs.join(", ")));
        }
        for (c, name) in [(&self.sigma, "M"), (&self.rho, "I")] {
            if c.is_one_const() {
                parts.push(name.to_string());
            } else if !c.is_zero_const() {
                parts.push(format!("({c})*{name}"));
            }
        }
        if let Some(e) = &self.eta0 {
            if !e.is_zero_const() {
                parts.push(format!("Z({e})"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A coefficient given either as an integer or in the expression grammar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::Int(0)
    }
}

impl Scalar {
    pub fn parse(&self, syms: &SymbolTable) -> Result<Expr, ParseError> {
        match self {
            Scalar::Int(k) => Ok(Expr::int(*k)),
            Scalar::Text(s) => parse_with(s, syms),
        }
    }
}

/// JSON form of a generator.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(default)]
    pub tau: Scalar,
    #[serde(default)]
    pub kappa: Vec<Vec<Scalar>>,
    pub chi: Vec<Scalar>,
    #[serde(default)]
    pub sigma: Scalar,
    #[serde(default)]
    pub rho: Scalar,
    #[serde(default)]
    pub eta0: Option<Scalar>,
}

/// First-order operator `c_t∂_t + c_a∂_a + c_ψ∂_ψ + c_ψ*∂_ψ*`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub t: Expr,
    pub x: Vec<Expr>,
    pub psi: Expr,
    pub psi_conj: Expr,
}

impl VectorField {
    pub fn zero(n: usize) -> Self {
        VectorField { t: Expr::zero(), x: vec![Expr::zero(); n], psi: Expr::zero(), psi_conj: Expr::zero() }
    }

    /// Applies the operator to a function of `(t, x, ψ, ψ*)`.
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut terms = vec![&self.t * &diff(e, &VarId::T)];
        for (a, c) in self.x.iter().enumerate() {
            terms.push(c * &diff(e, &VarId::X(a + 1)));
        }
        terms.push(&self.psi * &diff(e, &VarId::psi()));
        terms.push(&self.psi_conj * &diff(e, &VarId::psi_conj()));
        Expr::sum(terms)
    }

    pub fn components(&self) -> Vec<Expr> {
        let mut v = vec![self.t.clone()];
        v.extend(self.x.iter().cloned());
        v.push(self.psi.clone());
        v.push(self.psi_conj.clone());
        v
    }

    pub fn sub(&self, o: &Self) -> Self {
        VectorField {
            t: &self.t - &o.t,
            x: self.x.iter().zip(&o.x).map(|(a, b)| a - b).collect(),
            psi: &self.psi - &o.psi,
            psi_conj: &self.psi_conj - &o.psi_conj,
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |c: &Expr, d: String| {
            if !c.is_zero_const() {
                parts.push(format!("({c})*{d}"));
            }
        };
        push(&self.t, "d_t".into());
        for (a, c) in self.x.iter().enumerate() {
            push(c, format!("d_x{}", a + 1));
        }
        push(&self.psi, "d_psi".into());
        push(&self.psi_conj, "d_conj(psi)".into());
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn expand(g: &GeneratorCoeffs) -> VectorField {
    let n = g.n();
    let mut psi = g.psi_multiplier() * Expr::psi();
    if let Some(e) = &g.eta0 {
        psi = psi + e.clone();
    }
    VectorField {
        t: g.tau.clone(),
        x: (1..=n).map(|a| g.xi(a)).collect(),
        psi_conj: psi.conj(),
        psi,
    }
}

/// Commutator of first-order operators.
pub fn bracket_generic(f1: &VectorField, f2: &VectorField) -> VectorField {
    let c = |a: &Expr, b: &Expr| f1.apply(b) - f2.apply(a);
    VectorField {
        t: c(&f1.t, &f2.t),
        x: f1.x.iter().zip(&f2.x).map(|(a, b)| c(a, b)).collect(),
        psi: c(&f1.psi, &f2.psi),
        psi_conj: c(&f1.psi_conj, &f2.psi_conj),
    }
}

fn dt(e: &Expr) -> Expr {
    diff(e, &VarId::T)
}

/// Closed-form bracket in coefficient space:
///
/// ```text
/// τ = τ¹τ²_t − τ²τ¹_t
/// K = [K¹, K²]
/// χ = τ¹χ²_t − τ²χ¹_t + ½τ²_tχ¹ − ½τ¹_tχ² + K¹χ² − K²χ¹
/// σ = τ¹σ²_t − τ²σ¹_t + ½(χ¹·χ²_t − χ²·χ¹_t)
/// ρ = τ¹ρ²_t − τ²ρ¹_t
/// η = (τ¹∂_t + ξ¹·∇ − λ¹)η² − (τ²∂_t + ξ²·∇ − λ²)η¹
/// ```
///
/// where `K_ab = κ_ab` and `λ` is the `ψ`-multiplier.
pub fn bracket_structural(g1: &GeneratorCoeffs, g2: &GeneratorCoeffs) -> GeneratorCoeffs {
    let n = g1.n();
    assert_eq!(n, g2.n(), "dimension mismatch");
    let half = Expr::frac(1, 2);
    let (t1, t2) = (&g1.tau, &g2.tau);
    let (t1t, t2t) = (dt(t1), dt(t2));
    let tau = t1 * &t2t - t2 * &t1t;

    let mut out = GeneratorCoeffs::zero(n);
    out.tau = tau;
    for (a, b) in pairs(n) {
        let mut terms = Vec::new();
        for c in 1..=n {
            terms.push(g1.kappa_at(a, c) * g2.kappa_at(c, b));
            terms.push(-(g2.kappa_at(a, c) * g1.kappa_at(c, b)));
        }
        out.kappa[pair_index(n, a, b)] = Expr::sum(terms);
    }
    for a in 1..=n {
        let (c1, c2) = (&g1.chi[a - 1], &g2.chi[a - 1]);
        let mut terms = vec![
            t1 * &dt(c2),
            -(t2 * &dt(c1)),
            Expr::product(vec![half.clone(), t2t.clone(), c1.clone()]),
            -Expr::product(vec![half.clone(), t1t.clone(), c2.clone()]),
        ];
        for b in 1..=n {
            terms.push(g1.kappa_at(a, b) * g2.chi[b - 1].clone());
            terms.push(-(g2.kappa_at(a, b) * g1.chi[b - 1].clone()));
        }
        out.chi[a - 1] = Expr::sum(terms);
    }
    let mut sig = vec![t1 * &dt(&g2.sigma), -(t2 * &dt(&g1.sigma))];
    for a in 0..n {
        sig.push(&half * &(&g1.chi[a] * &dt(&g2.chi[a])));
        sig.push(-(&half * &(&g2.chi[a] * &dt(&g1.chi[a]))));
    }
    out.sigma = Expr::sum(sig);
    out.rho = t1 * &dt(&g2.rho) - t2 * &dt(&g1.rho);

    let act = |g: &GeneratorCoeffs, z: &Expr| -> Expr {
        let mut terms = vec![&g.tau * &dt(z)];
        for a in 1..=n {
            terms.push(g.xi(a) * diff(z, &VarId::X(a)));
        }
        terms.push(-(g.psi_multiplier() * z.clone()));
        Expr::sum(terms)
    };
    out.eta0 = match (&g1.eta0, &g2.eta0) {
        (None, None) => None,
        (e1, e2) => {
            let mut terms = Vec::new();
            if let Some(z2) = e2 {
                terms.push(act(g1, z2));
            }
            if let Some(z1) = e1 {
                terms.push(-act(g2, z1));
            }
            Some(Expr::sum(terms))
        }
    };
    out
}

/// Sampled values of `t`-dependent coefficients under one fixed binding.
#[derive(Clone, Debug)]
pub struct Probe {
    pub binding: SurrogateBinding,
    pub ts: Vec<f64>,
    pub n: usize,
}

/// Number of `t` samples used by a probe.
pub const PROBE_POINTS: usize = 12;

impl Probe {
    /// Draws sample times; the binding must already cover every symbol.
    pub fn new(sampler: &mut Sampler, binding: SurrogateBinding, n: usize) -> Self {
        let [t0, t1] = sampler.cfg.t_range;
        let ts = (0..PROBE_POINTS).map(|_| sampler.uniform(t0, t1)).collect();
        Probe { binding, ts, n }
    }

    /// Fresh binding for every symbol of `gs`.
    pub fn for_generators(
        sampler: &mut Sampler,
        gs: &[GeneratorCoeffs],
        hints: &BTreeMap<String, SymbolHint>,
    ) -> Self {
        let n = gs.first().map(|g| g.n()).unwrap_or(sampler.cfg.n);
        let mut syms = BTreeMap::new();
        for g in gs {
            for s in g.symbols() {
                syms.entry(s.name.clone()).or_insert(s);
            }
        }
        let syms: Vec<_> = syms.into_values().collect();
        let binding = sampler.binding(&syms, hints);
        Probe::new(sampler, binding, n)
    }

    pub fn at(&self, e: &Expr, t: f64) -> Result<f64, EvalError> {
        let p = SamplePoint::new(t, vec![0.0; self.n]);
        Ok(eval(e, &self.binding, &p)?.re)
    }

    pub fn values(&self, e: &Expr) -> Result<Vec<f64>, EvalError> {
        self.ts.iter().map(|&t| self.at(e, t)).collect()
    }

    /// Feature vector `(τ(ts), κ, χ(ts), σ(ts), ρ(ts))`; `η⁰` is ignored.
    pub fn features(&self, g: &GeneratorCoeffs) -> Result<Vec<f64>, EvalError> {
        let mut v = self.values(&g.tau)?;
        for k in &g.kappa {
            v.push(self.at(k, self.ts[0])?);
        }
        for c in &g.chi {
            v.extend(self.values(c)?);
        }
        v.extend(self.values(&g.sigma)?);
        v.extend(self.values(&g.rho)?);
        Ok(v)
    }

    /// Row ranges of the `τ`, `κ`, `χ`, and `(σ, ρ)` blocks.
    pub fn blocks(&self) -> [std::ops::Range<usize>; 4] {
        let m = self.ts.len();
        let nk = pair_count(self.n);
        let k0 = m;
        let c0 = k0 + nk;
        let s0 = c0 + self.n * m;
        [0..m, k0..c0, c0..s0, s0..s0 + 2 * m]
    }
}

/// Pointwise rank of the `χ`-tuples of those combinations of `gs` whose
/// `τ` and `κ` parts cancel.
pub fn rank_of_chi_block(gs: &[GeneratorCoeffs]) -> usize {
    let mut sampler = Sampler::new(Default::default());
    let probe = Probe::for_generators(&mut sampler, gs, &BTreeMap::new());
    rank_of_chi_block_with(gs, &probe).expect("sampling failed")
}

pub fn rank_of_chi_block_with(gs: &[GeneratorCoeffs], probe: &Probe) -> Result<usize, EvalError> {
    if gs.is_empty() {
        return Ok(0);
    }
    let feats: Vec<Vec<f64>> = gs.iter().map(|g| probe.features(g)).collect::<Result<_, _>>()?;
    let [tb, kb, ..] = probe.blocks();
    let rows: Vec<usize> = tb.chain(kb).collect();
    let head: Vec<Vec<f64>> = feats.iter().map(|f| rows.iter().map(|&r| f[r]).collect()).collect();
    let ns = linalg::null_space(&linalg::from_columns(&head, rows.len()), linalg::RANK_TOL);
    let n = probe.n;
    let mut best = 0;
    for &t in &probe.ts {
        let mut chi_vals = Vec::with_capacity(gs.len());
        for g in gs {
            chi_vals.push(g.chi.iter().map(|c| probe.at(c, t)).collect::<Result<Vec<_>, _>>()?);
        }
        let mut m = nalgebra::DMatrix::zeros(n, ns.ncols());
        for j in 0..ns.ncols() {
            for (i, cv) in chi_vals.iter().enumerate() {
                for a in 0..n {
                    m[(a, j)] += ns[(i, j)] * cv[a];
                }
            }
        }
        best = best.max(linalg::rank(&m, 1e-6));
    }
    Ok(best)
}

/// Jet variables `ψ` and `ψ*` that expanded fields act on.
pub fn base_jets() -> BTreeSet<Jet> {
    [Jet::psi(), Jet::psi().flipped()].into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn same(a: &GeneratorCoeffs, b: &GeneratorCoeffs) -> bool {
        a.sub(b).components().iter().all(|c| crate::expr::is_zero(c, 20, 2, 1e-10).unwrap())
    }

    #[test]
    fn expand_translation_in_time() {
        let f = expand(&GeneratorCoeffs::d(2, Expr::one()));
        assert!(f.t.is_one_const());
        assert!(f.x.iter().all(|c| c.is_zero_const()));
        assert!(f.psi.is_zero_const());
    }

    #[test]
    fn expand_rotation() {
        let f = expand(&GeneratorCoeffs::j(2, 1, 2));
        assert_eq!(f.x[0], -Expr::x(2));
        assert_eq!(f.x[1], Expr::x(1));
    }

    #[test]
    fn expand_galilean_boost() {
        let f = expand(&GeneratorCoeffs::p(vec![Expr::t(), Expr::zero()]));
        assert_eq!(f.x[0], Expr::t());
        let want = Expr::product(vec![Expr::frac(1, 2), Expr::i(), Expr::x(1), Expr::psi()]);
        assert!(crate::expr::is_zero(&(&f.psi - &want), 10, 1, 1e-12).unwrap());
    }

    #[test]
    fn listed_relations() {
        let n = 2;
        let d = |s: &str| GeneratorCoeffs::d(n, e(s));
        let p = |a: &str, b: &str| GeneratorCoeffs::p(vec![e(a), e(b)]);
        assert!(same(&bracket_structural(&d("1"), &d("t")), &d("1")));
        let r = bracket_structural(&p("1", "0"), &p("t", "0"));
        assert!(same(&r, &GeneratorCoeffs::m(n, Expr::frac(1, 2))));
        let r = bracket_structural(&GeneratorCoeffs::j(n, 1, 2), &p("cos(t)", "t^2"));
        assert!(same(&r, &p("t^2", "-cos(t)")));
        let r = bracket_structural(&d("t^2"), &p("t", "1"));
        // τχ_t − ½τ_tχ
        assert!(same(&r, &p("t^2 - t^2", "0 - t")));
        let r = bracket_structural(&d("t"), &GeneratorCoeffs::i(n, e("t^3")));
        assert!(same(&r, &GeneratorCoeffs::i(n, e("3*t^3"))));
    }

    #[test]
    fn generic_bracket_of_simple_fields() {
        let mut a = VectorField::zero(2);
        a.x[1] = Expr::x(1);
        let mut b = VectorField::zero(2);
        b.x[0] = Expr::x(2);
        let r = bracket_generic(&a, &b);
        assert_eq!(r.x[0], Expr::x(1));
        assert_eq!(r.x[1], -Expr::x(2));

        let mut dt = VectorField::zero(2);
        dt.t = Expr::one();
        let mut tdt = VectorField::zero(2);
        tdt.t = Expr::t();
        assert!(bracket_generic(&dt, &tdt).t.is_one_const());
    }

    #[test]
    fn chi_rank_examples() {
        let n = 2;
        assert_eq!(rank_of_chi_block(&[]), 0);
        let gs = vec![
            GeneratorCoeffs::p(vec![Expr::one(), Expr::zero()]).add(&GeneratorCoeffs::i(n, Expr::t())),
            GeneratorCoeffs::p(vec![Expr::t(), Expr::zero()]).add(&GeneratorCoeffs::i(n, e("t^2"))),
        ];
        assert_eq!(rank_of_chi_block(&gs), 1);
        let gs = vec![
            GeneratorCoeffs::p(vec![Expr::one(), Expr::zero()]),
            GeneratorCoeffs::p(vec![Expr::zero(), Expr::one()]),
        ];
        assert_eq!(rank_of_chi_block(&gs), 2);
    }

    #[test]
    fn pair_indexing() {
        assert_eq!(pairs(3), vec![(1, 2), (1, 3), (2, 3)]);
        for (k, (a, b)) in pairs(4).into_iter().enumerate() {
            assert_eq!(pair_index(4, a, b), k);
        }
    }
}
