//! Random surrogates, sample points and the probabilistic zero test.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;
use std::sync::Arc;

use super::eval::{eval_tracked, EvalError};
use super::{Codomain, Expr, FunctionSymbol, Jet, SymbolHint, VarId};

/// One term `c · cos(a·z + b)` of a trigonometric surrogate.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigTerm {
    pub c: Complex64,
    pub freq: Vec<f64>,
    pub phase: f64,
}

/// `c0 + Σ c_k cos(a_k·z + b_k)`; every derivative is closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSurrogate {
    pub c0: Complex64,
    pub terms: Vec<TrigTerm>,
}

impl TrigSurrogate {
    pub fn eval(&self, z: &[Complex64], deriv: &[u32]) -> Complex64 {
        let order: u32 = deriv.iter().sum();
        let mut acc = if order == 0 { self.c0 } else { Complex64::new(0.0, 0.0) };
        for term in &self.terms {
            let mut w = 1.0;
            for (a, &k) in term.freq.iter().zip(deriv) {
                w *= a.powi(k as i32);
            }
            if w == 0.0 {
                continue;
            }
            let mut arg = Complex64::new(term.phase + order as f64 * PI / 2.0, 0.0);
            for (a, zi) in term.freq.iter().zip(z) {
                arg += zi * *a;
            }
            acc += term.c * w * arg.cos();
        }
        acc
    }

    fn conj(&self) -> Self {
        TrigSurrogate {
            c0: self.c0.conj(),
            terms: self
                .terms
                .iter()
                .map(|t| TrigTerm { c: t.c.conj(), ..t.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Surrogate {
    Const(Complex64),
    Trig(TrigSurrogate),
}

/// Assignment of a concrete test function to every function symbol.
#[derive(Clone, Debug, Default)]
pub struct SurrogateBinding {
    map: HashMap<String, Surrogate>,
}

impl SurrogateBinding {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn get(&self, name: &str) -> Option<&Surrogate> {
        self.map.get(name)
    }
    pub fn insert(&mut self, name: &str, s: Surrogate) {
        self.map.insert(name.to_string(), s);
    }
    pub fn set_const(&mut self, name: &str, v: f64) {
        self.insert(name, Surrogate::Const(Complex64::new(v, 0.0)));
    }
    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }
    /// Conjugates every surrogate.
    pub fn conj(&self) -> Self {
        SurrogateBinding {
            map: self
                .map
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        Surrogate::Const(c) => Surrogate::Const(c.conj()),
                        Surrogate::Trig(t) => Surrogate::Trig(t.conj()),
                    };
                    (k.clone(), v)
                })
                .collect(),
        }
    }
}

/// Values of the independent variables and of the jet variables.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SamplePoint {
    pub t: f64,
    pub x: Vec<f64>,
    /// Values of unconjugated jets; a conjugated jet evaluates to the
    /// complex conjugate.
    #[serde(skip)]
    pub jets: BTreeMap<Jet, Complex64>,
}

impl SamplePoint {
    pub fn new(t: f64, x: Vec<f64>) -> Self {
        SamplePoint { t, x, jets: BTreeMap::new() }
    }

    pub fn value(&self, v: &VarId) -> Result<Complex64, EvalError> {
        match v {
            VarId::T => Ok(Complex64::new(self.t, 0.0)),
            VarId::X(a) => self
                .x
                .get(a - 1)
                .map(|&x| Complex64::new(x, 0.0))
                .ok_or_else(|| EvalError::MissingVar(v.clone())),
            VarId::Jet(j) => {
                let key = Jet { conj: false, ..j.clone() };
                let z = self.jets.get(&key).ok_or_else(|| EvalError::MissingVar(v.clone()))?;
                Ok(if j.conj { z.conj() } else { *z })
            }
        }
    }

    pub fn with_t(&self, t: f64) -> Self {
        SamplePoint { t, x: self.x.clone(), jets: self.jets.clone() }
    }
}

/// Sampling domain and tolerance of the zero test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    /// Sample points per binding.
    pub points: usize,
    /// Independent surrogate bindings.
    pub bindings: usize,
    pub tol: f64,
    pub seed: u64,
    pub t_range: [f64; 2],
    pub x_range: [f64; 2],
    /// Redraws allowed per sample point after an unsafe evaluation.
    pub retries: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            n: 2,
            points: 100,
            bindings: 5,
            tol: 1e-8,
            seed: 0x5eed,
            t_range: [0.3, 1.7],
            x_range: [-2.0, 2.0],
            retries: 50,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroWitness {
    pub binding: usize,
    pub t: f64,
    pub x: Vec<f64>,
    pub value: [f64; 2],
    pub normalized: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    pub pass: bool,
    pub samples: usize,
    pub max_normalized: f64,
    pub witness: Option<ZeroWitness>,
}

impl ZeroReport {
    fn empty() -> Self {
        ZeroReport { pass: true, samples: 0, max_normalized: 0.0, witness: None }
    }

    pub fn merge(&mut self, other: ZeroReport) {
        self.samples += other.samples;
        if other.max_normalized > self.max_normalized {
            self.max_normalized = other.max_normalized;
        }
        if !other.pass {
            self.pass = false;
            if self.witness.is_none() {
                self.witness = other.witness;
            }
        }
    }
}

/// Seeded source of bindings and points.
pub struct Sampler {
    pub cfg: SamplerConfig,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(cfg: SamplerConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Sampler { cfg, rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn random_trig(&mut self, arity: usize, codomain: Codomain, scale: f64) -> TrigSurrogate {
        let coef = |rng: &mut ChaCha8Rng| match codomain {
            Codomain::Real => Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
            Codomain::Complex => Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        };
        let c0 = coef(&mut self.rng) * scale;
        let mut terms = Vec::new();
        for _ in 0..3 {
            let freq = loop {
                let f: Vec<f64> = (0..arity).map(|_| self.rng.gen_range(-3i32..=3) as f64).collect();
                if f.iter().any(|&a| a != 0.0) {
                    break f;
                }
            };
            let c = coef(&mut self.rng) * scale;
            let phase = self.rng.gen_range(0.0..2.0 * PI);
            terms.push(TrigTerm { c, freq, phase });
        }
        TrigSurrogate { c0, terms }
    }

    /// Fresh random binding for `syms`, honouring `hints`.
    pub fn binding(
        &mut self,
        syms: &[Arc<FunctionSymbol>],
        hints: &BTreeMap<String, SymbolHint>,
    ) -> SurrogateBinding {
        let mut b = SurrogateBinding::new();
        self.extend_binding(&mut b, syms, hints);
        b
    }

    /// Binds the symbols of `syms` that `b` does not bind yet.
    pub fn extend_binding(
        &mut self,
        b: &mut SurrogateBinding,
        syms: &[Arc<FunctionSymbol>],
        hints: &BTreeMap<String, SymbolHint>,
    ) {
        for s in syms {
            if b.contains(&s.name) {
                continue;
            }
            let hint = hints.get(&s.name).cloned().unwrap_or_default();
            let scale = hint.scale.unwrap_or(1.0);
            let sur = if s.arity == 0 {
                let [lo, hi] = hint.range.unwrap_or([-1.0, 1.0]);
                let re = self.rng.gen_range(lo..hi);
                let im = match s.codomain {
                    Codomain::Real => 0.0,
                    Codomain::Complex => self.rng.gen_range(-1.0..1.0),
                };
                Surrogate::Const(Complex64::new(re, im) * scale)
            } else {
                Surrogate::Trig(self.random_trig(s.arity, s.codomain, scale))
            };
            b.insert(&s.name, sur);
        }
    }

    pub fn point(&mut self, n: usize, jets: &BTreeSet<Jet>) -> SamplePoint {
        let [t0, t1] = self.cfg.t_range;
        let [x0, x1] = self.cfg.x_range;
        let t = self.rng.gen_range(t0..t1);
        let x = (0..n).map(|_| self.rng.gen_range(x0..x1)).collect();
        let mut p = SamplePoint::new(t, x);
        for j in jets {
            let key = Jet { conj: false, ..j.clone() };
            if p.jets.contains_key(&key) {
                continue;
            }
            let r = self.rng.gen_range(0.0f64..1.0).sqrt();
            let th = self.rng.gen_range(0.0..2.0 * PI);
            p.jets.insert(key, Complex64::from_polar(r, th));
        }
        p
    }

    /// Evaluates `e` at `cfg.points` fresh points under a fixed binding.
    pub fn check_with(&mut self, e: &Expr, b: &SurrogateBinding) -> Result<ZeroReport, EvalError> {
        self.check_with_tagged(e, b, 0)
    }

    fn check_with_tagged(
        &mut self,
        e: &Expr,
        b: &SurrogateBinding,
        tag: usize,
    ) -> Result<ZeroReport, EvalError> {
        let n = self.cfg.n.max(e.max_x_index());
        let jets = e.jets();
        let mut rep = ZeroReport::empty();
        if e.is_zero_const() {
            rep.samples = self.cfg.points;
            return Ok(rep);
        }
        for _ in 0..self.cfg.points {
            let mut tries = 0;
            let (p, out) = loop {
                let p = self.point(n, &jets);
                match eval_tracked(e, b, &p) {
                    Ok(o) => break (p, o),
                    Err(EvalError::Unsafe(msg)) => {
                        tries += 1;
                        if tries > self.cfg.retries {
                            return Err(EvalError::RetriesExhausted(msg));
                        }
                    }
                    Err(other) => return Err(other),
                }
            };
            let normalized = out.value.norm() / (1.0 + out.max_abs);
            rep.samples += 1;
            if normalized > rep.max_normalized {
                rep.max_normalized = normalized;
            }
            if !(normalized < self.cfg.tol) {
                rep.pass = false;
                if rep.witness.is_none() {
                    rep.witness = Some(ZeroWitness {
                        binding: tag,
                        t: p.t,
                        x: p.x.clone(),
                        value: [out.value.re, out.value.im],
                        normalized,
                    });
                }
            }
        }
        Ok(rep)
    }

    /// Full zero test: `cfg.bindings` random bindings × `cfg.points` points.
    pub fn check(
        &mut self,
        e: &Expr,
        hints: &BTreeMap<String, SymbolHint>,
    ) -> Result<ZeroReport, EvalError> {
        let syms = e.symbols();
        let mut rep = ZeroReport::empty();
        for k in 0..self.cfg.bindings.max(1) {
            let b = self.binding(&syms, hints);
            rep.merge(self.check_with_tagged(e, &b, k)?);
        }
        Ok(rep)
    }
}

/// Probabilistic identity test with the default domain and seed.
pub fn is_zero(e: &Expr, trials: usize, bindings_per_trial: usize, tol: f64) -> Result<bool, EvalError> {
    assert!(trials >= 1, "trials must be positive");
    let cfg = SamplerConfig { points: trials, bindings: bindings_per_trial, tol, ..Default::default() };
    Ok(Sampler::new(cfg).check(e, &BTreeMap::new())?.pass)
}
