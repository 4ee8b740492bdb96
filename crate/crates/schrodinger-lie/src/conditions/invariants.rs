use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{EvalError, Sampler, SamplerConfig};
use crate::fields::{bracket_structural, GeneratorCoeffs, Probe};
use crate::linalg::{self, from_columns, RANK_TOL};

/// The integers `(k0, k1, k2, k3, r0)` attached to an essential algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTuple {
    pub k0: usize,
    pub k1: usize,
    pub k2: usize,
    pub k3: usize,
    pub r0: usize,
}

impl InvariantTuple {
    pub fn new(k: [usize; 5]) -> Self {
        InvariantTuple { k0: k[0], k1: k[1], k2: k[2], k3: k[3], r0: k[4] }
    }

    pub fn as_array(&self) -> [usize; 5] {
        [self.k0, self.k1, self.k2, self.k3, self.r0]
    }

    pub fn dim(&self) -> usize {
        self.k0 + self.k1 + self.k2 + self.k3
    }

    /// Dimension of the part spanned by `P`, `M` and `I`.
    pub fn pmi_dim(&self) -> usize {
        self.k0 + self.k1
    }

    /// `(k2, r0) ≠ (1, 1)`.
    pub fn k2_r0_admissible(&self) -> bool {
        (self.k2, self.r0) != (1, 1)
    }

    /// `k3 ≠ 2` unless `(k2, r0) = (0, 0)`.
    pub fn k3_admissible(&self) -> bool {
        (self.k2, self.r0) == (0, 0) || self.k3 != 2
    }
}

impl std::fmt::Display for InvariantTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.k0, self.k1, self.k2, self.k3, self.r0)
    }
}

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("span is not closed: [g{0}, g{1}] leaves it")]
    NotClosed(usize, usize),
    #[error("span does not contain {0}")]
    MissingKernel(&'static str),
    #[error("sampling failed: {0}")]
    Eval(#[from] EvalError),
}

/// Ranks of the sampled coefficient blocks of a span.
#[derive(Clone, Debug, Serialize)]
pub struct SpanAnalysis {
    pub dim: usize,
    pub tau_rank: usize,
    pub tau_kappa_rank: usize,
    pub chi_rank: usize,
}

impl SpanAnalysis {
    pub fn tuple(&self) -> InvariantTuple {
        let pmi = self.dim - self.tau_kappa_rank;
        InvariantTuple {
            k0: 2,
            k1: pmi.saturating_sub(2),
            k2: self.tau_kappa_rank - self.tau_rank,
            k3: self.tau_rank,
            r0: self.chi_rank,
        }
    }
}

/// Invariant tuple of the span of `gs` under a fresh random binding.
pub fn invariants(gs: &[GeneratorCoeffs]) -> Result<InvariantTuple, InvariantError> {
    let mut sampler = Sampler::new(SamplerConfig::default());
    let probe = Probe::for_generators(&mut sampler, gs, &BTreeMap::new());
    Ok(invariants_with(gs, &probe)?.tuple())
}

/// Checks closure and the kernel, then measures the blocks.
pub fn invariants_with(gs: &[GeneratorCoeffs], probe: &Probe) -> Result<SpanAnalysis, InvariantError> {
    let rows = probe.blocks()[3].end;
    let feats: Vec<Vec<f64>> = gs.iter().map(|g| probe.features(g)).collect::<Result<_, _>>()?;
    let full = from_columns(&feats, rows);
    let n = probe.n;
    for (name, g) in [("M", GeneratorCoeffs::m(n, 1.into())), ("I", GeneratorCoeffs::i(n, 1.into()))] {
        if !linalg::in_span(&full, &probe.features(&g)?, RANK_TOL) {
            return Err(InvariantError::MissingKernel(name));
        }
    }
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            let b = bracket_structural(&gs[i], &gs[j]);
            if !linalg::in_span(&full, &probe.features(&b)?, 1e-7) {
                return Err(InvariantError::NotClosed(i, j));
            }
        }
    }
    let [tb, kb, ..] = probe.blocks();
    let pick = |rs: Vec<usize>| -> nalgebra::DMatrix<f64> {
        let cols: Vec<Vec<f64>> = feats.iter().map(|f| rs.iter().map(|&r| f[r]).collect()).collect();
        from_columns(&cols, rs.len())
    };
    let tau_rank = linalg::rank(&pick(tb.clone().collect()), RANK_TOL);
    let tau_kappa_rank = linalg::rank(&pick(tb.chain(kb).collect()), RANK_TOL);
    Ok(SpanAnalysis {
        dim: linalg::rank(&full, RANK_TOL),
        tau_rank,
        tau_kappa_rank,
        chi_rank: crate::fields::rank_of_chi_block_with(gs, probe)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Expr};

    fn d(s: &str) -> GeneratorCoeffs {
        GeneratorCoeffs::d(2, parse(s).unwrap())
    }
    fn p(a: &str, b: &str) -> GeneratorCoeffs {
        GeneratorCoeffs::p(vec![parse(a).unwrap(), parse(b).unwrap()])
    }

    #[test]
    fn kernel_only() {
        let gs = vec![GeneratorCoeffs::m(2, Expr::one()), GeneratorCoeffs::i(2, Expr::one())];
        assert_eq!(invariants(&gs).unwrap(), InvariantTuple::new([2, 0, 0, 0, 0]));
    }

    #[test]
    fn free_equation() {
        let gs = vec![
            GeneratorCoeffs::m(2, Expr::one()),
            GeneratorCoeffs::i(2, Expr::one()),
            p("1", "0"),
            p("t", "0"),
            p("0", "1"),
            p("0", "t"),
            GeneratorCoeffs::j(2, 1, 2),
            d("1"),
            d("t"),
            d("t^2").add(&GeneratorCoeffs::i(2, -Expr::t())),
        ];
        let k = invariants(&gs).unwrap();
        assert_eq!(k, InvariantTuple::new([2, 4, 1, 3, 2]));
        assert_eq!(k.dim(), 10);
    }

    #[test]
    fn missing_kernel_and_non_closed() {
        let gs = vec![GeneratorCoeffs::m(2, Expr::one()), d("1")];
        assert!(matches!(invariants(&gs), Err(InvariantError::MissingKernel("I"))));
        let gs = vec![
            GeneratorCoeffs::m(2, Expr::one()),
            GeneratorCoeffs::i(2, Expr::one()),
            d("1"),
            d("t^2"),
        ];
        assert!(matches!(invariants(&gs), Err(InvariantError::NotClosed(..))));
    }
}
