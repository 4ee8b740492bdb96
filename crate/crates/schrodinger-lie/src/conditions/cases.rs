use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::invariants::{invariants_with, InvariantTuple};
use super::{classifying_residual, ConditionError, Potential};
use crate::expr::{
    eval, parse_with, Declaration, Expr, ParseError, SamplePoint, Sampler, SamplerConfig,
    SymbolHint, SymbolTable, ZeroWitness,
};
use crate::fields::{FieldError, FieldSpec, GeneratorCoeffs, Probe, Scalar};

const BUILTIN: &str = include_str!("../../data/cases.json");

#[derive(Debug, Error)]
pub enum TableError {
    #[error("case table is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("case {id}: {source}")]
    Parse { id: usize, source: ParseError },
    #[error("case {id}: {source}")]
    Field { id: usize, source: FieldError },
    #[error("case {id}: {source}")]
    Condition { id: usize, source: ConditionError },
    #[error("case {id}: {count} generators but the expected tuple has dimension {dim}")]
    Count { id: usize, count: usize, dim: usize },
    #[error("unknown case id {0}")]
    UnknownCase(usize),
}

/// A generator of the two-dimensional table; `j` is the coefficient of `J`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CaseGenerator {
    #[serde(default)]
    pub tau: Scalar,
    #[serde(default)]
    pub j: Scalar,
    #[serde(default)]
    pub chi: Vec<Scalar>,
    #[serde(default)]
    pub sigma: Scalar,
    #[serde(default)]
    pub rho: Scalar,
}

/// Side condition that must not vanish identically.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Constraint {
    pub label: String,
    pub nonzero: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseRecord {
    pub id: usize,
    #[serde(default)]
    pub symbols: Vec<Declaration>,
    /// Named subexpressions, expanded in order.
    #[serde(default)]
    pub defs: Vec<(String, String)>,
    pub potential: String,
    pub generators: Vec<CaseGenerator>,
    pub expected: [usize; 5],
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    /// Side conditions that are recorded but not checked.
    #[serde(default)]
    pub conditions: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TableFile {
    n: usize,
    cases: Vec<CaseRecord>,
}

/// One parsed row of the table.
#[derive(Clone, Debug)]
pub struct CaseEntry {
    pub id: usize,
    pub record: CaseRecord,
    pub symbols: SymbolTable,
    pub potential: Potential,
    pub generators: Vec<GeneratorCoeffs>,
    pub expected: InvariantTuple,
    pub constraints: Vec<(String, Expr)>,
}

impl CaseEntry {
    pub fn from_record(rec: &CaseRecord, n: usize) -> Result<Self, TableError> {
        let id = rec.id;
        let mut syms = SymbolTable::new();
        syms.declare_all(&rec.symbols);
        for (name, text) in &rec.defs {
            let e = parse_with(text, &syms).map_err(|source| TableError::Parse { id, source })?;
            syms.define(name, e);
        }
        let potential = Potential::parse(&rec.potential, &syms, n)
            .map_err(|source| TableError::Condition { id, source })?;
        let mut generators = Vec::new();
        for g in &rec.generators {
            generators.push(case_generator(g, &syms, n).map_err(|source| TableError::Field { id, source })?);
        }
        let expected = InvariantTuple::new(rec.expected);
        if generators.len() != expected.dim() {
            return Err(TableError::Count { id, count: generators.len(), dim: expected.dim() });
        }
        let mut constraints = Vec::new();
        for c in &rec.constraints {
            let e = parse_with(&c.nonzero, &syms).map_err(|source| TableError::Parse { id, source })?;
            constraints.push((c.label.clone(), e));
        }
        Ok(CaseEntry { id, record: rec.clone(), symbols: syms, potential, generators, expected, constraints })
    }

    pub fn hints(&self) -> &BTreeMap<String, SymbolHint> {
        self.symbols.hints()
    }
}

fn case_generator(g: &CaseGenerator, syms: &SymbolTable, n: usize) -> Result<GeneratorCoeffs, FieldError> {
    let mut chi = g.chi.clone();
    chi.resize(n, Scalar::Int(0));
    let mut kappa = vec![vec![Scalar::Int(0); n]; n];
    if n >= 2 {
        kappa[0][1] = g.j.clone();
        kappa[1][0] = match &g.j {
            Scalar::Int(k) => Scalar::Int(-k),
            Scalar::Text(s) => Scalar::Text(format!("-({s})")),
        };
    }
    let spec = FieldSpec {
        tau: g.tau.clone(),
        kappa,
        chi,
        sigma: g.sigma.clone(),
        rho: g.rho.clone(),
        eta0: None,
    };
    GeneratorCoeffs::from_spec(&spec, syms)
}

/// The classification table.
#[derive(Clone, Debug)]
pub struct CaseTable {
    pub n: usize,
    pub cases: Vec<CaseEntry>,
}

/// Outcome of one named check, aggregated over draws.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ZeroWitness>,
}

/// Result of one random instantiation.
#[derive(Clone, Debug, Serialize)]
pub struct DrawReport {
    pub draw: usize,
    pub residual_max: f64,
    pub residual_samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantTuple>,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: usize,
    pub potential: String,
    pub expected: InvariantTuple,
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
    pub draws: Vec<DrawReport>,
}

impl CaseReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Tally {
    name: &'static str,
    pass: bool,
    detail: Vec<String>,
    witness: Option<ZeroWitness>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, pass: true, detail: Vec::new(), witness: None }
    }
    fn fail(&mut self, msg: String) {
        self.pass = false;
        if self.detail.len() < 4 {
            self.detail.push(msg);
        }
    }
    fn finish(self, ok: &str) -> CheckOutcome {
        CheckOutcome {
            name: self.name.to_string(),
            pass: self.pass,
            detail: if self.pass { ok.to_string() } else { self.detail.join("; ") },
            witness: self.witness,
        }
    }
}

/// Deterministic per-case seed.
pub fn case_seed(seed: u64, id: usize) -> u64 {
    seed ^ (id as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

impl CaseTable {
    pub fn from_json(text: &str) -> Result<Self, TableError> {
        let file: TableFile = serde_json::from_str(text)?;
        let cases = file
            .cases
            .iter()
            .map(|r| CaseEntry::from_record(r, file.n))
            .collect::<Result<_, _>>()?;
        Ok(CaseTable { n: file.n, cases })
    }

    pub fn get(&self, id: usize) -> Result<&CaseEntry, TableError> {
        self.cases.iter().find(|c| c.id == id).ok_or(TableError::UnknownCase(id))
    }

    /// Runs every check for one case: `cfg.bindings` draws of the
    /// parameters, `cfg.points` sample points per residual.
    pub fn verify(&self, id: usize, cfg: &SamplerConfig) -> Result<CaseReport, TableError> {
        let case = self.get(id)?;
        let mut sampler = Sampler::new(SamplerConfig { seed: case_seed(cfg.seed, id), n: self.n, ..cfg.clone() });
        Ok(verify_entry(case, &mut sampler))
    }
}

fn verify_entry(case: &CaseEntry, sampler: &mut Sampler) -> CaseReport {
    let n = case.potential.n;
    let mut syms = BTreeMap::new();
    for s in case.potential.expr.symbols() {
        syms.insert(s.name.clone(), s);
    }
    for g in &case.generators {
        for s in g.symbols() {
            syms.insert(s.name.clone(), s);
        }
    }
    for (_, e) in &case.constraints {
        for s in e.symbols() {
            syms.insert(s.name.clone(), s);
        }
    }
    let syms: Vec<_> = syms.into_values().collect();
    let residuals: Vec<Expr> = case
        .generators
        .iter()
        .map(|g| classifying_residual(&case.potential, g).expect("dimension checked at load"))
        .collect();

    let mut res = Tally::new("residuals");
    let mut closure = Tally::new("closure");
    let mut inv = Tally::new("invariants");
    let mut cons = Tally::new("constraints");
    let mut draws = Vec::new();
    let mut last_tuple = None;
    for draw in 0..sampler.cfg.bindings.max(1) {
        let binding = sampler.binding(&syms, case.hints());
        let mut max = 0.0f64;
        let mut samples = 0;
        for (k, r) in residuals.iter().enumerate() {
            match sampler.check_with(r, &binding) {
                Ok(rep) => {
                    max = max.max(rep.max_normalized);
                    samples += rep.samples;
                    if !rep.pass {
                        let w = rep.witness.clone();
                        res.fail(format!(
                            "draw {draw}: generator {} has residual {:.3e}",
                            case.generators[k], rep.max_normalized
                        ));
                        if res.witness.is_none() {
                            res.witness = w;
                        }
                    }
                }
                Err(e) => res.fail(format!("draw {draw}: generator {k}: {e}")),
            }
        }
        let probe = Probe::new(sampler, binding.clone(), n);
        let mut tuple = None;
        let mut dim = 0;
        match invariants_with(&case.generators, &probe) {
            Ok(a) => {
                let t = a.tuple();
                dim = a.dim;
                if t != case.expected {
                    inv.fail(format!("draw {draw}: computed {t}, expected {}", case.expected));
                }
                if a.dim != case.generators.len() {
                    inv.fail(format!("draw {draw}: generators span only {} dimensions", a.dim));
                }
                tuple = Some(t);
                last_tuple = Some(t);
            }
            Err(e) => closure.fail(format!("draw {draw}: {e}")),
        }
        for (label, e) in &case.constraints {
            if !nonvanishing(e, &binding, sampler, n) {
                cons.fail(format!("draw {draw}: `{label}` vanishes at every sample"));
            }
        }
        draws.push(DrawReport { draw, residual_max: max, residual_samples: samples, invariants: tuple, dim });
    }

    let k = last_tuple.unwrap_or(case.expected);
    let lemma = CheckOutcome {
        name: "k2-r0".into(),
        pass: k.k2_r0_admissible(),
        detail: format!("(k2, r0) = ({}, {})", k.k2, k.r0),
        witness: None,
    };
    let k3 = CheckOutcome {
        name: "k3".into(),
        pass: k.k3_admissible(),
        detail: format!("k3 = {} with (k2, r0) = ({}, {})", k.k3, k.k2, k.r0),
        witness: None,
    };
    let bounds = CheckOutcome {
        name: "bounds".into(),
        pass: k.dim() <= 10 && k.pmi_dim() <= 6,
        detail: format!("dim {} (max 10), P/M/I part {} (max 6)", k.dim(), k.pmi_dim()),
        witness: None,
    };
    let checks = vec![
        res.finish("all generators annihilate the classifying condition"),
        closure.finish("span closed, contains M and I"),
        inv.finish(&format!("{}", case.expected)),
        lemma,
        k3,
        bounds,
        cons.finish(if case.constraints.is_empty() { "none" } else { "side conditions hold at samples" }),
    ];
    CaseReport {
        id: case.id,
        potential: case.record.potential.clone(),
        expected: case.expected,
        pass: checks.iter().all(|c| c.pass),
        checks,
        draws,
    }
}

fn nonvanishing(e: &Expr, b: &crate::expr::SurrogateBinding, sampler: &mut Sampler, n: usize) -> bool {
    let jets = Default::default();
    for _ in 0..20 {
        let p: SamplePoint = sampler.point(n, &jets);
        if let Ok(v) = eval(e, b, &p) {
            if v.norm() > 1e-6 {
                return true;
            }
        }
    }
    false
}

/// The shipped two-dimensional table.
pub fn builtin_table() -> &'static CaseTable {
    static TABLE: OnceLock<CaseTable> = OnceLock::new();
    TABLE.get_or_init(|| CaseTable::from_json(BUILTIN).expect("shipped case table is valid"))
}

/// Verifies one shipped case with the default sampler and `draws` draws.
pub fn verify_case(id: usize, draws: usize) -> Result<CaseReport, TableError> {
    let cfg = SamplerConfig { bindings: draws, ..SamplerConfig::default() };
    builtin_table().verify(id, &cfg)
}
