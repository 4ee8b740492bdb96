//! Point transformations between equations of the class: their action on
//! potentials, solutions and Lie symmetries, the groupoid operations, the
//! equivalence algebra and the real-potential subclass.

mod algebra;
mod fixtures;
mod pushforward;
mod real;

pub use algebra::{equiv_generator_check, equiv_generator_report, EquivGenerator, GeneratorCheck};
pub use fixtures::{
    random_function, random_generator, random_real_admissible, random_rotation, random_time_map,
    random_transformation, reduce_generalized_shift, to_rational,
};
pub use pushforward::{push_vector_field, pushforward, Elementary};
pub use real::{is_free_reducible, is_real_admissible, real_amplitude};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{ConditionError, Potential};
use crate::expr::{
    diff, eval, radius_sq, subst, subst_many, EvalError, Expr, ParseError,
    SamplePoint, Sampler, SamplerConfig, SurrogateBinding, SymbolTable, VarId, ZeroReport,
};
use crate::fields::Scalar;

#[derive(Debug, Error)]
pub enum EquivError {
    #[error("cannot fix the sign of T_t: {0}")]
    Orientation(String),
    #[error("matrix is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("expected {expected} components, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("potential lives in dimension {potential} but the transformation in dimension {map}")]
    Dimension { potential: usize, map: usize },
    #[error("spec has neither O nor X, so its dimension is unknown")]
    UnknownDimension,
    #[error("transformation is not elementary")]
    NotElementary,
    #[error("target of the first transformation is not the source of the second (residual {0:.3e})")]
    NotComposable(f64),
    #[error("cannot decide: {0}")]
    Undecidable(String),
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Condition(#[from] ConditionError),
}

/// A point transformation
/// `t̃ = T(t)`, `x̃ = |T_t|^{1/2} O x + X(t)`,
/// `ψ̃ = exp(F)(ψ̂ + Λ̂)` with
/// `F = (i/8)(T_tt/|T_t|)|x|² + (i/2)ε(X_t/|T_t|^{1/2})·Ox + iΣ + Υ`,
/// where `ε = sgn T_t` and the hat conjugates when `ε = −1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivTransformation {
    /// `T(t)`.
    pub time_map: Expr,
    /// Constant orthogonal matrix `O`, row-major.
    pub rotation: Vec<Vec<Expr>>,
    /// `X(t)`.
    pub shift: Vec<Expr>,
    /// `Σ(t)`.
    pub phase: Expr,
    /// `Υ(t)`.
    pub amplitude: Expr,
    /// Solution `Λ(t, x)` of the source equation added to `ψ`.
    pub solution_shift: Option<Expr>,
    orientation: i64,
}

fn identity_matrix(n: usize) -> Vec<Vec<Expr>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect())
        .collect()
}

fn mat_mul(a: &[Vec<Expr>], b: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| Expr::sum((0..n).map(|k| &a[i][k] * &b[k][j]).collect())).collect())
        .collect()
}

fn transpose(a: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

fn mat_vec(a: &[Vec<Expr>], v: &[Expr]) -> Vec<Expr> {
    a.iter().map(|row| Expr::sum(row.iter().zip(v).map(|(o, x)| o * x).collect())).collect()
}

fn dot(a: &[Expr], b: &[Expr]) -> Expr {
    Expr::sum(a.iter().zip(b).map(|(x, y)| x * y).collect())
}

fn dt(e: &Expr) -> Expr {
    diff(e, &VarId::T)
}

fn after(e: &Expr, inner: &Expr) -> Expr {
    subst(e, &VarId::T, inner)
}

fn check_orthogonal(o: &[Vec<Expr>]) -> Result<(), EquivError> {
    let n = o.len();
    if o.iter().any(|r| r.len() != n) {
        return Err(EquivError::NotOrthogonal("matrix is not square".into()));
    }
    let g = mat_mul(o, &transpose(o));
    let p = SamplePoint::new(1.0, vec![0.0; n]);
    let b = SurrogateBinding::new();
    for (i, row) in g.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            if let Some(c) = e.as_const() {
                if c.to_c64().re != want || c.to_c64().im != 0.0 {
                    return Err(EquivError::NotOrthogonal(format!("(O Oᵀ)[{i}][{j}] = {e}")));
                }
                continue;
            }
            let v = eval(e, &b, &p).map_err(|err| EquivError::NotOrthogonal(err.to_string()))?;
            if (v.re - want).abs() > 1e-12 || v.im.abs() > 1e-12 {
                return Err(EquivError::NotOrthogonal(format!("(O Oᵀ)[{i}][{j}] = {v}")));
            }
        }
    }
    Ok(())
}

/// Sign of `T_t` on the default sample interval.
fn detect_orientation(time_map: &Expr) -> Result<i64, EquivError> {
    let [t0, t1] = SamplerConfig::default().t_range;
    let tt = dt(time_map);
    let b = SurrogateBinding::new();
    let mut sign = 0;
    for k in 0..=32 {
        let t = t0 + (t1 - t0) * k as f64 / 32.0;
        let v = eval(&tt, &b, &SamplePoint::new(t, vec![]))
            .map_err(|e| EquivError::Orientation(e.to_string()))?
            .re;
        let s = if v > 0.0 { 1 } else if v < 0.0 { -1 } else { 0 };
        if s == 0 || (sign != 0 && s != sign) {
            return Err(EquivError::Orientation(format!("T_t({t}) = {v}")));
        }
        sign = s;
    }
    Ok(sign)
}

impl EquivTransformation {
    pub fn identity(n: usize) -> Self {
        EquivTransformation {
            time_map: Expr::t(),
            rotation: identity_matrix(n),
            shift: vec![Expr::zero(); n],
            phase: Expr::zero(),
            amplitude: Expr::zero(),
            solution_shift: None,
            orientation: 1,
        }
    }

    /// Checks `O` and reads `sgn T_t` off the sample interval; `T` must not
    /// contain unknown function symbols.
    pub fn new(
        time_map: Expr,
        rotation: Vec<Vec<Expr>>,
        shift: Vec<Expr>,
        phase: Expr,
        amplitude: Expr,
    ) -> Result<Self, EquivError> {
        let eps = detect_orientation(&time_map)?;
        Self::with_orientation(time_map, rotation, shift, phase, amplitude, eps)
    }

    /// As [`EquivTransformation::new`] with `sgn T_t` supplied by the caller.
    pub fn with_orientation(
        time_map: Expr,
        rotation: Vec<Vec<Expr>>,
        shift: Vec<Expr>,
        phase: Expr,
        amplitude: Expr,
        orientation: i64,
    ) -> Result<Self, EquivError> {
        if rotation.len() != shift.len() {
            return Err(EquivError::Shape { expected: rotation.len(), got: shift.len() });
        }
        check_orthogonal(&rotation)?;
        if orientation != 1 && orientation != -1 {
            return Err(EquivError::Orientation(format!("{orientation} is not ±1")));
        }
        Ok(EquivTransformation {
            time_map,
            rotation,
            shift,
            phase,
            amplitude,
            solution_shift: None,
            orientation,
        })
    }

    /// `t̃ = −t`, `ψ̃ = ψ*`, `Ṽ = V*`.
    pub fn wigner(n: usize) -> Self {
        EquivTransformation { time_map: -Expr::t(), orientation: -1, ..Self::identity(n) }
    }

    /// Reflection of `x_a`.
    pub fn reflection(n: usize, a: usize) -> Self {
        let mut o = identity_matrix(n);
        o[a - 1][a - 1] = Expr::int(-1);
        EquivTransformation { rotation: o, ..Self::identity(n) }
    }

    pub fn with_solution_shift(mut self, lambda: Expr) -> Self {
        self.solution_shift = Some(lambda);
        self
    }

    pub fn n(&self) -> usize {
        self.shift.len()
    }

    /// `sgn T_t`.
    pub fn orientation(&self) -> i64 {
        self.orientation
    }

    fn eps(&self) -> Expr {
        Expr::int(self.orientation)
    }

    /// Conjugates when the orientation is reversed.
    pub fn hat(&self, e: &Expr) -> Expr {
        if self.orientation < 0 {
            e.conj_deep()
        } else {
            e.clone()
        }
    }

    fn abs_tt(&self) -> Expr {
        self.eps() * dt(&self.time_map)
    }

    fn sqrt_abs_tt(&self) -> Expr {
        dt(&self.time_map).abs_pow(crate::expr::q(1, 2))
    }

    /// `T⁻¹(t)`, exact when `T` is affine.
    pub fn time_inverse(&self) -> Expr {
        let t = Expr::t();
        if self.time_map == t {
            return t;
        }
        let slope = dt(&self.time_map);
        if slope.as_const().is_some() && !slope.is_zero_const() {
            let offset = after(&self.time_map, &Expr::zero());
            return (t - offset) * slope.recip();
        }
        Expr::inverse(&self.time_map, &t)
    }

    /// Components of `x̃` in the source variables.
    pub fn space_map(&self) -> Vec<Expr> {
        let n = self.n();
        let s = self.sqrt_abs_tt();
        let ox = mat_vec(&self.rotation, &(1..=n).map(Expr::x).collect::<Vec<_>>());
        ox.into_iter().zip(&self.shift).map(|(y, c)| &s * &y + c.clone()).collect()
    }

    /// Exponent `F` of the multiplier of `ψ̂`, in the source variables.
    pub fn phase_factor(&self) -> Expr {
        let n = self.n();
        let i = Expr::i();
        let d2 = dt(&dt(&self.time_map));
        let mut terms = vec![Expr::product(vec![
            Expr::frac(1, 8),
            i.clone(),
            d2,
            self.abs_tt().recip(),
            radius_sq(n),
        ])];
        let xt: Vec<Expr> = self.shift.iter().map(dt).collect();
        let ox = mat_vec(&self.rotation, &(1..=n).map(Expr::x).collect::<Vec<_>>());
        terms.push(Expr::product(vec![
            Expr::frac(1, 2),
            i.clone(),
            self.eps(),
            self.sqrt_abs_tt().recip(),
            dot(&xt, &ox),
        ]));
        terms.push(&i * &self.phase);
        terms.push(self.amplitude.clone());
        Expr::sum(terms)
    }

    /// Simultaneous substitution expressing source variables through
    /// target ones.
    pub fn inverse_substitution(&self) -> Vec<(VarId, Expr)> {
        let n = self.n();
        let s = self.time_inverse();
        let scale = after(&dt(&self.time_map), &s).abs_pow(crate::expr::q(-1, 2));
        let shifted: Vec<Expr> =
            (1..=n).map(|b| Expr::x(b) - after(&self.shift[b - 1], &s)).collect();
        let back = mat_vec(&transpose(&self.rotation), &shifted);
        let mut out = vec![(VarId::T, s)];
        for (a, e) in back.into_iter().enumerate() {
            out.push((VarId::X(a + 1), &scale * &e));
        }
        out
    }

    /// Rewrites a function of the source variables in the target ones.
    pub fn to_target(&self, e: &Expr) -> Expr {
        subst_many(e, &self.inverse_substitution())
    }

    /// Rewrites a function of the target variables in the source ones.
    pub fn to_source(&self, e: &Expr) -> Expr {
        let mut map = vec![(VarId::T, self.time_map.clone())];
        for (a, x) in self.space_map().into_iter().enumerate() {
            map.push((VarId::X(a + 1), x));
        }
        subst_many(e, &map)
    }

    /// Target potential as a function of the source variables.
    pub fn potential_at_source(&self, v: &Expr) -> Expr {
        let n = self.n() as i64;
        let i = Expr::i();
        let d1 = dt(&self.time_map);
        let d2 = dt(&d1);
        let d3 = dt(&d2);
        let xt: Vec<Expr> = self.shift.iter().map(dt).collect();
        let ox = mat_vec(
            &self.rotation,
            &(1..=self.n()).map(Expr::x).collect::<Vec<_>>(),
        );
        let accel: Vec<Expr> = xt.iter().map(|c| dt(&(c * &d1.recip()))).collect();
        Expr::sum(vec![
            self.hat(v) * self.abs_tt().recip(),
            Expr::product(vec![
                Expr::frac(1, 16),
                self.eps(),
                Expr::int(2) * &d3 * d1.clone() - Expr::int(3) * d2.pow(2),
                d1.pow(-3),
                radius_sq(self.n()),
            ]),
            Expr::product(vec![
                Expr::frac(1, 2),
                self.eps(),
                self.sqrt_abs_tt().recip(),
                dot(&accel, &ox),
            ]),
            (dt(&self.phase) - &i * &dt(&self.amplitude)) * d1.recip(),
            -Expr::product(vec![
                Expr::frac(1, 4),
                d1.pow(-2),
                dot(&xt, &xt) + Expr::product(vec![i, Expr::int(n), d2]),
            ]),
        ])
    }

    /// Image of a solution `ψ(t, x)` of the source equation, in the target
    /// variables.
    pub fn act_on_solution(&self, psi: &Expr) -> Expr {
        let mut body = self.hat(psi);
        if let Some(l) = &self.solution_shift {
            body = body + self.hat(l);
        }
        self.to_target(&(self.phase_factor().exp() * body))
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &EquivTransformation) -> Result<Self, EquivError> {
        let n = self.n();
        if other.n() != n {
            return Err(EquivError::Shape { expected: n, got: other.n() });
        }
        let t1 = &self.time_map;
        let e2 = other.eps();
        let t2t = dt(&other.time_map);
        let t2tt = dt(&t2t);
        let o2x1 = mat_vec(&other.rotation, &self.shift);
        let x2t: Vec<Expr> = other.shift.iter().map(|c| after(&dt(c), t1)).collect();

        let scale = after(&t2t, t1).abs_pow(crate::expr::q(1, 2));
        let shift: Vec<Expr> = o2x1
            .iter()
            .zip(&other.shift)
            .map(|(y, c)| &scale * y + after(c, t1))
            .collect();
        let phase = Expr::sum(vec![
            &e2 * &self.phase,
            Expr::product(vec![
                Expr::frac(1, 8),
                after(&(&t2tt * &(e2.clone() * t2t.clone()).recip()), t1),
                dot(&self.shift, &self.shift),
            ]),
            Expr::product(vec![
                Expr::frac(1, 2),
                e2.clone(),
                scale.recip(),
                dot(&x2t, &o2x1),
            ]),
            after(&other.phase, t1),
        ]);
        let amplitude = &self.amplitude + &after(&other.amplitude, t1);
        let mut out = EquivTransformation {
            time_map: after(&other.time_map, t1),
            rotation: mat_mul(&other.rotation, &self.rotation),
            shift,
            phase,
            amplitude,
            solution_shift: None,
            orientation: self.orientation * other.orientation,
        };
        out.solution_shift = match (&self.solution_shift, &other.solution_shift) {
            (None, None) => None,
            (l1, l2) => {
                let mut s = l1.clone().unwrap_or_else(Expr::zero);
                if let Some(l2) = l2 {
                    let pulled = self.to_source(l2);
                    s = s + self.hat(&((-self.phase_factor()).exp() * pulled));
                }
                Some(s)
            }
        };
        Ok(out)
    }

    /// Parameters of the inverse transformation.
    pub fn inverse(&self) -> Self {
        let s = self.time_inverse();
        let eps = self.eps();
        let tt = dt(&self.time_map);
        let tt_s = after(&tt, &s);
        let ot = transpose(&self.rotation);
        let back_scale = tt_s.abs_pow(crate::expr::q(-1, 2));
        let shift_s: Vec<Expr> = self.shift.iter().map(|c| after(c, &s)).collect();
        let shift: Vec<Expr> = mat_vec(&ot, &shift_s).into_iter().map(|y| -(&back_scale * &y)).collect();
        let ox_inv = mat_vec(&self.rotation, &shift);
        let xt_s: Vec<Expr> = self.shift.iter().map(|c| after(&dt(c), &s)).collect();
        let inner = Expr::sum(vec![
            Expr::product(vec![
                Expr::frac(1, 8),
                after(&dt(&tt), &s),
                (&eps * &tt_s).recip(),
                dot(&shift, &shift),
            ]),
            Expr::product(vec![
                Expr::frac(1, 2),
                eps.clone(),
                tt_s.abs_pow(crate::expr::q(-1, 2)),
                dot(&xt_s, &ox_inv),
            ]),
            after(&self.phase, &s),
        ]);
        let mut out = EquivTransformation {
            time_map: s.clone(),
            rotation: ot,
            shift,
            phase: -(&eps * &inner),
            amplitude: -after(&self.amplitude, &s),
            solution_shift: None,
            orientation: self.orientation,
        };
        if let Some(l) = &self.solution_shift {
            let pulled = self.to_target(l);
            let back = (-out.phase_factor()).exp() * pulled;
            out.solution_shift = Some(-self.hat(&back));
        }
        out
    }

    /// Transformation-spec form.
    pub fn to_spec(&self) -> TransformSpec {
        TransformSpec {
            time_map: Scalar::Text(self.time_map.to_string()),
            rotation: self
                .rotation
                .iter()
                .map(|r| r.iter().map(|e| Scalar::Text(e.to_string())).collect())
                .collect(),
            shift: self.shift.iter().map(|e| Scalar::Text(e.to_string())).collect(),
            phase: Scalar::Text(self.phase.to_string()),
            amplitude: Scalar::Text(self.amplitude.to_string()),
            solution_shift: self.solution_shift.as_ref().map(|e| Scalar::Text(e.to_string())),
            orientation: Some(self.orientation),
        }
    }

    /// The dimension is read from `O` or `X`; one of them must be present.
    pub fn from_spec(spec: &TransformSpec, syms: &SymbolTable) -> Result<Self, EquivError> {
        let n = spec.rotation.len().max(spec.shift.len());
        if n == 0 {
            return Err(EquivError::UnknownDimension);
        }
        Self::from_spec_in(spec, syms, n)
    }

    /// As [`Self::from_spec`] in dimension `n`; a missing `O` is the
    /// identity and a missing `X` is zero.
    pub fn from_spec_in(spec: &TransformSpec, syms: &SymbolTable, n: usize) -> Result<Self, EquivError> {
        let p = |s: &Scalar| s.parse(syms);
        let rotation = if spec.rotation.is_empty() {
            identity_matrix(n)
        } else {
            spec.rotation.iter().map(|r| r.iter().map(p).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?
        };
        let shift = if spec.shift.is_empty() {
            vec![Expr::zero(); n]
        } else {
            spec.shift.iter().map(p).collect::<Result<Vec<_>, _>>()?
        };
        if shift.len() != n {
            return Err(EquivError::Shape { expected: n, got: shift.len() });
        }
        if rotation.len() != n {
            return Err(EquivError::Shape { expected: n, got: rotation.len() });
        }
        let time_map = p(&spec.time_map)?;
        let args = (time_map, rotation, shift, p(&spec.phase)?, p(&spec.amplitude)?);
        let mut tr = match spec.orientation {
            Some(eps) => Self::with_orientation(args.0, args.1, args.2, args.3, args.4, eps)?,
            None => Self::new(args.0, args.1, args.2, args.3, args.4)?,
        };
        if let Some(l) = &spec.solution_shift {
            tr.solution_shift = Some(p(l)?);
        }
        Ok(tr)
    }

    pub fn from_json(text: &str, syms: &SymbolTable) -> Result<Self, anyhow::Error> {
        let spec: TransformSpec = serde_json::from_str(text)?;
        Ok(Self::from_spec(&spec, syms)?)
    }

    pub fn from_json_in(text: &str, syms: &SymbolTable, n: usize) -> Result<Self, anyhow::Error> {
        let spec: TransformSpec = serde_json::from_str(text)?;
        Ok(Self::from_spec_in(&spec, syms, n)?)
    }
}

fn default_time_map() -> Scalar {
    Scalar::Text("t".into())
}

/// `{"T": .., "O": [[..]], "X": [..], "Sigma": .., "Upsilon": ..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransformSpec {
    #[serde(rename = "T", default = "default_time_map")]
    pub time_map: Scalar,
    #[serde(rename = "O", default)]
    pub rotation: Vec<Vec<Scalar>>,
    #[serde(rename = "X", default)]
    pub shift: Vec<Scalar>,
    #[serde(rename = "Sigma", default)]
    pub phase: Scalar,
    #[serde(rename = "Upsilon", default)]
    pub amplitude: Scalar,
    #[serde(rename = "Lambda", default, skip_serializing_if = "Option::is_none")]
    pub solution_shift: Option<Scalar>,
    /// `sgn T_t`; detected on the sample interval when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<i64>,
}

/// Target potential in the target variables.
pub fn act_on_potential(v: &Potential, tr: &EquivTransformation) -> Result<Potential, EquivError> {
    if v.n != tr.n() {
        return Err(EquivError::Dimension { potential: v.n, map: tr.n() });
    }
    Ok(Potential { expr: tr.to_target(&tr.potential_at_source(&v.expr)), n: v.n })
}

/// Numeric comparison of two expressions at random samples.
pub fn compare(a: &Expr, b: &Expr, cfg: &SamplerConfig) -> Result<ZeroReport, EvalError> {
    Sampler::new(cfg.clone()).check(&(a - b), &Default::default())
}

fn compare_cfg() -> SamplerConfig {
    SamplerConfig { points: 40, bindings: 2, ..SamplerConfig::default() }
}

/// A triple `(source, map, target)` of the equivalence groupoid.
#[derive(Clone, Debug)]
pub struct AdmissibleTransformation {
    pub source: Potential,
    pub map: EquivTransformation,
    pub target: Potential,
}

impl AdmissibleTransformation {
    pub fn new(source: Potential, map: EquivTransformation) -> Result<Self, EquivError> {
        let target = act_on_potential(&source, &map)?;
        Ok(AdmissibleTransformation { source, map, target })
    }

    pub fn identity(v: Potential) -> Self {
        let n = v.n;
        AdmissibleTransformation { source: v.clone(), map: EquivTransformation::identity(n), target: v }
    }

    /// Checks that the stored target is the image of the source.
    pub fn verify(&self, cfg: &SamplerConfig) -> Result<ZeroReport, EquivError> {
        let image = act_on_potential(&self.source, &self.map)?;
        Ok(compare(&image.expr, &self.target.expr, cfg)?)
    }
}

/// `t1` followed by `t2`.
pub fn compose(
    t1: &AdmissibleTransformation,
    t2: &AdmissibleTransformation,
) -> Result<AdmissibleTransformation, EquivError> {
    if t1.target != t2.source {
        let rep = compare(&t1.target.expr, &t2.source.expr, &compare_cfg())?;
        if !rep.pass {
            return Err(EquivError::NotComposable(rep.max_normalized));
        }
    }
    Ok(AdmissibleTransformation {
        source: t1.source.clone(),
        map: t1.map.then(&t2.map)?,
        target: t2.target.clone(),
    })
}

pub fn invert(t: &AdmissibleTransformation) -> AdmissibleTransformation {
    AdmissibleTransformation { source: t.target.clone(), map: t.map.inverse(), target: t.source.clone() }
}

/// Parses a transformation spec with an empty symbol table.
pub fn parse_transformation(text: &str) -> Result<EquivTransformation, anyhow::Error> {
    EquivTransformation::from_json(text, &SymbolTable::new())
}

#[cfg(test)]
pub(crate) fn expr(text: &str) -> Expr {
    crate::expr::parse_with(text, &SymbolTable::new()).unwrap_or_else(|e| panic!("{text}: {e}"))
}
