//! Finite groupoids with a distinguished wide subgroupoid `H` and a family of
//! vertex subgroups `N_θ`, and exhaustive checks of uniformity,
//! semi-normalization, disjointedness, factorization, splitting and
//! extension.
//!
//! Arrows are triples `(src, label, tgt)`. A label names the underlying
//! transformation, so the same label may occur on several arrows; the
//! multiplication table is given on labels and `a ⋆ b` (first `a`, then `b`)
//! is the arrow `(s(a), m(label a, label b), t(b))`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_OBJECTS: usize = 8;
pub const MAX_ARROWS: usize = 200;

#[derive(Debug, Error)]
pub enum GroupoidError {
    #[error("model has {0} objects, at most {MAX_OBJECTS} are supported")]
    TooManyObjects(usize),
    #[error("model has {0} arrows, at most {MAX_ARROWS} are supported")]
    TooManyArrows(usize),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("arrow {0} is listed twice")]
    DuplicateArrow(String),
    #[error("no arrow {0}")]
    UnknownArrow(String),
    #[error("no product for {0} ⋆ {1}")]
    MissingProduct(String, String),
    #[error("labels `{0}`, `{1}` have two products")]
    AmbiguousProduct(String, String),
    #[error("product {0} ⋆ {1} is {2}, which is not an arrow")]
    ProductNotAnArrow(String, String, String),
    #[error("object `{0}` has no unit")]
    NoUnit(String),
    #[error("arrow {0} has no inverse")]
    NoInverse(String),
    #[error("multiplication is not associative at ({0} ⋆ {1}) ⋆ {2}")]
    NotAssociative(String, String, String),
    #[error("{0} is not a wide subgroupoid")]
    NotWideSubgroupoid(&'static str),
    #[error("N at `{0}` is not a subgroup of the vertex group")]
    NotSubgroup(String),
    #[error("the model is not uniform")]
    NotUniform,
    #[error("malformed model file: {0}")]
    Schema(#[from] serde_json::Error),
}

/// Arrow as written in model files.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub src: String,
    pub label: String,
    pub tgt: String,
}

impl std::fmt::Display for ArrowSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} --{}--> {}", self.src, self.label, self.tgt)
    }
}

/// Entry of an arrow list: either one arrow or every arrow with a label.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArrowRef {
    Arrow(ArrowSpec),
    Label(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    /// `[a, b, c]` means `a ⋆ b = c` on labels.
    pub mult: Vec<[String; 3]>,
    #[serde(rename = "H")]
    pub h: Vec<ArrowRef>,
    #[serde(rename = "N")]
    pub n: BTreeMap<String, Vec<String>>,
    /// Larger subgroupoid for the extension check; all arrows if absent.
    #[serde(rename = "H_bar", default)]
    pub h_bar: Option<Vec<ArrowRef>>,
}

pub type ArrowSet = BTreeSet<usize>;

#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<ArrowSpec>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    mult: HashMap<(usize, usize), usize>,
    units: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroupoid {
    /// Builds the table and checks the groupoid axioms exhaustively.
    pub fn new(objects: Vec<String>, arrows: Vec<ArrowSpec>, mult: &[[String; 3]]) -> Result<Self, GroupoidError> {
        if objects.len() > MAX_OBJECTS {
            return Err(GroupoidError::TooManyObjects(objects.len()));
        }
        if arrows.len() > MAX_ARROWS {
            return Err(GroupoidError::TooManyArrows(arrows.len()));
        }
        let obj = |name: &str| {
            objects.iter().position(|o| o == name).ok_or_else(|| GroupoidError::UnknownObject(name.to_string()))
        };
        let mut src = Vec::with_capacity(arrows.len());
        let mut tgt = Vec::with_capacity(arrows.len());
        let mut index = HashMap::new();
        for (k, a) in arrows.iter().enumerate() {
            src.push(obj(&a.src)?);
            tgt.push(obj(&a.tgt)?);
            if index.insert((a.src.clone(), a.label.clone(), a.tgt.clone()), k).is_some() {
                return Err(GroupoidError::DuplicateArrow(a.to_string()));
            }
        }
        let mut table: HashMap<(&str, &str), &str> = HashMap::new();
        for [a, b, c] in mult {
            if let Some(old) = table.insert((a, b), c) {
                if old != c {
                    return Err(GroupoidError::AmbiguousProduct(a.clone(), b.clone()));
                }
            }
        }
        let mut prod = HashMap::new();
        for a in 0..arrows.len() {
            for b in 0..arrows.len() {
                if tgt[a] != src[b] {
                    continue;
                }
                let (la, lb) = (arrows[a].label.as_str(), arrows[b].label.as_str());
                let lc = table
                    .get(&(la, lb))
                    .ok_or_else(|| GroupoidError::MissingProduct(arrows[a].to_string(), arrows[b].to_string()))?;
                let key = (arrows[a].src.clone(), lc.to_string(), arrows[b].tgt.clone());
                let c = *index.get(&key).ok_or_else(|| {
                    GroupoidError::ProductNotAnArrow(
                        arrows[a].to_string(),
                        arrows[b].to_string(),
                        format!("{} --{}--> {}", key.0, key.1, key.2),
                    )
                })?;
                prod.insert((a, b), c);
            }
        }
        let mut g = FiniteGroupoid { objects, arrows, src, tgt, mult: prod, units: Vec::new(), inverse: Vec::new() };
        g.check_axioms()?;
        Ok(g)
    }

    fn check_axioms(&mut self) -> Result<(), GroupoidError> {
        let m = self.arrows.len();
        for o in 0..self.objects.len() {
            let unit = (0..m).find(|&u| {
                self.src[u] == o
                    && self.tgt[u] == o
                    && (0..m).all(|a| {
                        (self.tgt[a] != o || self.mult[&(a, u)] == a) && (self.src[a] != o || self.mult[&(u, a)] == a)
                    })
            });
            self.units.push(unit.ok_or_else(|| GroupoidError::NoUnit(self.objects[o].clone()))?);
        }
        for a in 0..m {
            let inv = (0..m).find(|&b| {
                self.src[b] == self.tgt[a]
                    && self.tgt[b] == self.src[a]
                    && self.mult[&(a, b)] == self.units[self.src[a]]
                    && self.mult[&(b, a)] == self.units[self.tgt[a]]
            });
            self.inverse.push(inv.ok_or_else(|| GroupoidError::NoInverse(self.arrows[a].to_string()))?);
        }
        for a in 0..m {
            for b in (0..m).filter(|&b| self.src[b] == self.tgt[a]) {
                let ab = self.mult[&(a, b)];
                for c in (0..m).filter(|&c| self.src[c] == self.tgt[b]) {
                    if self.mult[&(ab, c)] != self.mult[&(a, self.mult[&(b, c)])] {
                        return Err(GroupoidError::NotAssociative(
                            self.arrows[a].to_string(),
                            self.arrows[b].to_string(),
                            self.arrows[c].to_string(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow(&self, a: usize) -> &ArrowSpec {
        &self.arrows[a]
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn all_arrows(&self) -> ArrowSet {
        (0..self.arrows.len()).collect()
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn unit(&self, o: usize) -> usize {
        self.units[o]
    }

    pub fn units(&self) -> ArrowSet {
        self.units.iter().copied().collect()
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a ⋆ b` when `t(a) = s(b)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.mult.get(&(a, b)).copied()
    }

    /// Arrows from `o` to `o`.
    pub fn vertex_group(&self, o: usize) -> ArrowSet {
        (0..self.arrows.len()).filter(|&a| self.src[a] == o && self.tgt[a] == o).collect()
    }

    /// All defined products `a ⋆ b` with `a ∈ A`, `b ∈ B`.
    pub fn frobenius_product(&self, a: &ArrowSet, b: &ArrowSet) -> ArrowSet {
        let mut out = ArrowSet::new();
        for &x in a {
            for &y in b {
                if let Some(z) = self.compose(x, y) {
                    out.insert(z);
                }
            }
        }
        out
    }

    /// Closed under products and inverses and containing every unit.
    pub fn is_wide_subgroupoid(&self, s: &ArrowSet) -> bool {
        self.units.iter().all(|u| s.contains(u))
            && s.iter().all(|&a| s.contains(&self.inverse[a]))
            && self.frobenius_product(s, s).is_subset(s)
    }

    pub fn labels(&self, s: &ArrowSet) -> BTreeSet<&str> {
        s.iter().map(|&a| self.arrows[a].label.as_str()).collect()
    }

    /// Labels carried by a loop at every object.
    pub fn kernel_labels(&self) -> BTreeSet<&str> {
        let mut it = (0..self.objects.len()).map(|o| self.labels(&self.vertex_group(o)));
        let first = it.next().unwrap_or_default();
        it.fold(first, |acc, l| acc.intersection(&l).copied().collect())
    }

    /// Equivalence classes of objects under "there is an arrow in `s`".
    pub fn orbits(&self, s: &ArrowSet) -> Vec<BTreeSet<usize>> {
        let mut class: Vec<usize> = (0..self.objects.len()).collect();
        fn root(c: &mut [usize], mut i: usize) -> usize {
            while c[i] != i {
                c[i] = c[c[i]];
                i = c[i];
            }
            i
        }
        for &a in s {
            let (r1, r2) = (root(&mut class, self.src[a]), root(&mut class, self.tgt[a]));
            class[r1] = r2;
        }
        let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for o in 0..self.objects.len() {
            let r = root(&mut class, o);
            groups.entry(r).or_default().insert(o);
        }
        groups.into_values().collect()
    }

    fn resolve(&self, refs: &[ArrowRef]) -> Result<ArrowSet, GroupoidError> {
        let mut out = ArrowSet::new();
        for r in refs {
            match r {
                ArrowRef::Arrow(spec) => {
                    let a = self
                        .arrows
                        .iter()
                        .position(|x| x == spec)
                        .ok_or_else(|| GroupoidError::UnknownArrow(spec.to_string()))?;
                    out.insert(a);
                }
                ArrowRef::Label(l) => {
                    let found: Vec<usize> = (0..self.arrows.len()).filter(|&a| &self.arrows[a].label == l).collect();
                    if found.is_empty() {
                        return Err(GroupoidError::UnknownArrow(format!("with label `{l}`")));
                    }
                    out.extend(found);
                }
            }
        }
        Ok(out)
    }
}

/// A groupoid with a wide subgroupoid `H` and vertex subgroups `N_θ`.
#[derive(Clone, Debug)]
pub struct GroupoidModel {
    pub name: String,
    pub groupoid: FiniteGroupoid,
    pub h: ArrowSet,
    /// `N_θ` indexed by object.
    pub n: Vec<ArrowSet>,
    pub h_bar: ArrowSet,
}

impl GroupoidModel {
    pub fn from_spec(spec: &ModelSpec) -> Result<Self, GroupoidError> {
        let g = FiniteGroupoid::new(spec.objects.clone(), spec.arrows.clone(), &spec.mult)?;
        let h = g.resolve(&spec.h)?;
        let h_bar = match &spec.h_bar {
            Some(r) => g.resolve(r)?,
            None => g.all_arrows(),
        };
        let mut n = Vec::new();
        for (o, name) in g.objects().iter().enumerate() {
            let loops = g.vertex_group(o);
            let mut set = ArrowSet::new();
            for label in spec.n.get(name).into_iter().flatten() {
                let a = loops
                    .iter()
                    .copied()
                    .find(|&a| &g.arrow(a).label == label)
                    .ok_or_else(|| GroupoidError::UnknownArrow(format!("{name} --{label}--> {name}")))?;
                set.insert(a);
            }
            set.insert(g.unit(o));
            n.push(set);
        }
        for name in spec.n.keys() {
            if !g.objects().contains(name) {
                return Err(GroupoidError::UnknownObject(name.clone()));
            }
        }
        Self::new(spec.name.clone(), g, h, n, h_bar)
    }

    pub fn new(
        name: String,
        groupoid: FiniteGroupoid,
        h: ArrowSet,
        n: Vec<ArrowSet>,
        h_bar: ArrowSet,
    ) -> Result<Self, GroupoidError> {
        if !groupoid.is_wide_subgroupoid(&h) {
            return Err(GroupoidError::NotWideSubgroupoid("H"));
        }
        if !groupoid.is_wide_subgroupoid(&h_bar) || !h.is_subset(&h_bar) {
            return Err(GroupoidError::NotWideSubgroupoid("H_bar"));
        }
        for (o, s) in n.iter().enumerate() {
            let closed = s.contains(&groupoid.unit(o))
                && s.iter().all(|&a| groupoid.src(a) == o && groupoid.tgt(a) == o && s.contains(&groupoid.inverse(a)))
                && groupoid.frobenius_product(s, s).is_subset(s);
            if !closed {
                return Err(GroupoidError::NotSubgroup(groupoid.objects()[o].clone()));
            }
        }
        Ok(GroupoidModel { name, groupoid, h, n, h_bar })
    }

    pub fn from_json(text: &str) -> Result<Self, GroupoidError> {
        Self::from_spec(&serde_json::from_str(text)?)
    }

    /// `𝒩^f`, the union of all `N_θ`.
    pub fn n_family(&self) -> ArrowSet {
        self.n.iter().flatten().copied().collect()
    }

    /// Vertex group of `H` at `o`.
    pub fn essential(&self, o: usize) -> ArrowSet {
        self.groupoid.vertex_group(o).intersection(&self.h).copied().collect()
    }

    fn with(&self, h: &ArrowSet, n: &[ArrowSet]) -> GroupoidModel {
        GroupoidModel { h: h.clone(), n: n.to_vec(), ..self.clone() }
    }

    /// `N_θ ⋆ G^∩_θ`, the family enlarged by the kernel loops.
    pub fn kernel_enlarged(&self) -> Vec<ArrowSet> {
        let g = &self.groupoid;
        let kernel = g.kernel_labels();
        (0..g.objects().len())
            .map(|o| {
                let k: ArrowSet =
                    g.vertex_group(o).into_iter().filter(|&a| kernel.contains(g.arrow(a).label.as_str())).collect();
                g.frobenius_product(&self.n[o], &k)
            })
            .collect()
    }
}

fn single(a: usize) -> ArrowSet {
    std::iter::once(a).collect()
}

/// `N_{s(T)} ⋆ T = T ⋆ N_{t(T)}` for every `T ∈ H`.
pub fn is_uniform(m: &GroupoidModel) -> bool {
    let g = &m.groupoid;
    m.h.iter().all(|&a| {
        g.frobenius_product(&m.n[g.src(a)], &single(a)) == g.frobenius_product(&single(a), &m.n[g.tgt(a)])
    })
}

/// `𝒩^f ⋆ H` is the whole groupoid.
pub fn is_semi_normalized(m: &GroupoidModel) -> Result<bool, GroupoidError> {
    if !is_uniform(m) {
        return Err(GroupoidError::NotUniform);
    }
    Ok(m.groupoid.frobenius_product(&m.n_family(), &m.h) == m.groupoid.all_arrows())
}

/// No `N_θ` shares a label with `H` except the unit.
pub fn is_disjoint(m: &GroupoidModel) -> Result<bool, GroupoidError> {
    if !is_uniform(m) {
        return Err(GroupoidError::NotUniform);
    }
    let g = &m.groupoid;
    let h_labels = g.labels(&m.h);
    Ok((0..g.objects().len()).all(|o| {
        let unit = g.arrow(g.unit(o)).label.as_str();
        g.labels(&m.n[o]).iter().all(|l| *l == unit || !h_labels.contains(l))
    }))
}

/// Per-object outcome of the vertex-group checks.
#[derive(Clone, Debug, Serialize)]
pub struct VertexReport {
    pub object: String,
    pub order: usize,
    pub essential_order: usize,
    pub normal_order: usize,
    pub n_is_normal: bool,
    pub factorizes: bool,
    pub trivial_intersection: bool,
    pub unique_decomposition: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub semi_normalized: bool,
    pub disjoint: bool,
    /// `N_θ` is normal in the vertex group and the latter is `G^ess_θ ⋆ N_θ`.
    pub factorization: bool,
    /// Factorization with trivial intersections and unique decompositions.
    pub splitting: bool,
    pub vertices: Vec<VertexReport>,
}

pub fn verify_factorization(m: &GroupoidModel) -> Result<FactorizationReport, GroupoidError> {
    let semi = is_semi_normalized(m)?;
    let disjoint = is_disjoint(m)?;
    let g = &m.groupoid;
    let mut vertices = Vec::new();
    for o in 0..g.objects().len() {
        let vg = g.vertex_group(o);
        let ess = m.essential(o);
        let n = &m.n[o];
        let n_is_normal = vg.iter().all(|&x| {
            let conj = g.frobenius_product(&g.frobenius_product(&single(g.inverse(x)), n), &single(x));
            conj == *n
        });
        let factorizes = g.frobenius_product(&ess, n) == vg;
        let trivial_intersection = ess.intersection(n).count() == 1;
        let mut seen = ArrowSet::new();
        let mut unique = true;
        for &e in &ess {
            for &k in n {
                unique &= seen.insert(g.compose(e, k).expect("loops compose"));
            }
        }
        vertices.push(VertexReport {
            object: g.objects()[o].clone(),
            order: vg.len(),
            essential_order: ess.len(),
            normal_order: n.len(),
            n_is_normal,
            factorizes,
            trivial_intersection,
            unique_decomposition: unique && seen == vg,
        });
    }
    let factorization = semi && vertices.iter().all(|v| v.n_is_normal && v.factorizes);
    let splitting =
        factorization && disjoint && vertices.iter().all(|v| v.trivial_intersection && v.unique_decomposition);
    Ok(FactorizationReport { semi_normalized: semi, disjoint, factorization, splitting, vertices })
}

/// Semi-normalization with respect to `H` persists for `H̄ ⊇ H` with both
/// the original family and the family enlarged by the kernel loops.
pub fn verify_extension(m: &GroupoidModel, h_bar: &ArrowSet) -> Result<bool, GroupoidError> {
    let g = &m.groupoid;
    if !g.is_wide_subgroupoid(h_bar) || !m.h.is_subset(h_bar) {
        return Err(GroupoidError::NotWideSubgroupoid("H_bar"));
    }
    if !is_uniform(m) || !is_semi_normalized(m)? {
        return Ok(false);
    }
    let holds = |model: &GroupoidModel| is_uniform(model) && is_semi_normalized(model).unwrap_or(false);
    Ok(holds(&m.with(h_bar, &m.n)) && holds(&m.with(h_bar, &m.kernel_enlarged())))
}

/// `𝒩^f` is stable under conjugation by every arrow of the groupoid.
pub fn is_normal_subgroupoid(m: &GroupoidModel) -> bool {
    let g = &m.groupoid;
    (0..g.arrow_count()).all(|a| {
        let conj = g.frobenius_product(&g.frobenius_product(&single(g.inverse(a)), &m.n[g.src(a)]), &single(a));
        conj == m.n[g.tgt(a)]
    })
}

/// `𝒩^f ⋆ H = H ⋆ 𝒩^f`.
pub fn products_commute(m: &GroupoidModel) -> bool {
    let nf = m.n_family();
    m.groupoid.frobenius_product(&nf, &m.h) == m.groupoid.frobenius_product(&m.h, &nf)
}

/// Objects are connected in the groupoid exactly when they are in `H`.
pub fn same_orbits(m: &GroupoidModel) -> bool {
    m.groupoid.orbits(&m.groupoid.all_arrows()) == m.groupoid.orbits(&m.h)
}

/// Named checks in the order used by reports.
pub const CHECKS: [&str; 6] = ["uniform", "semi-normalized", "disjoint", "factorization", "splitting", "extension"];

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub name: String,
    pub objects: usize,
    pub arrows: usize,
    pub results: BTreeMap<String, bool>,
    pub factorization: FactorizationReport,
}

impl ModelReport {
    pub fn row(&self) -> [bool; 6] {
        CHECKS.map(|c| self.results[c])
    }
}

/// All six checks; a precondition that fails makes the dependent check false.
pub fn run_checks(m: &GroupoidModel) -> ModelReport {
    let uniform = is_uniform(m);
    let fact = verify_factorization(m).unwrap_or(FactorizationReport {
        semi_normalized: false,
        disjoint: false,
        factorization: false,
        splitting: false,
        vertices: Vec::new(),
    });
    let extension = verify_extension(m, &m.h_bar).unwrap_or(false);
    let values = [uniform, fact.semi_normalized, fact.disjoint, fact.factorization, fact.splitting, extension];
    ModelReport {
        name: m.name.clone(),
        objects: m.groupoid.objects().len(),
        arrows: m.groupoid.arrow_count(),
        results: CHECKS.iter().map(|c| c.to_string()).zip(values).collect(),
        factorization: fact,
    }
}

/// Result of one named check.
pub fn run_check(m: &GroupoidModel, check: &str) -> Option<bool> {
    let r = run_checks(m);
    r.results.get(check).copied()
}

/// Shipped fixtures with their expected rows over [`CHECKS`].
pub fn fixtures() -> Vec<(&'static str, &'static str, [bool; 6])> {
    vec![
        ("normalized", include_str!("../../data/groupoid/normalized.json"), [true; 6]),
        ("disjoint-semidirect", include_str!("../../data/groupoid/disjoint_semidirect.json"), [true; 6]),
        (
            "kernel-sharing",
            include_str!("../../data/groupoid/kernel_sharing.json"),
            [true, true, false, true, false, true],
        ),
        (
            "not-semi-normalized",
            include_str!("../../data/groupoid/not_semi_normalized.json"),
            [true, false, true, false, false, false],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(name: &str) -> GroupoidModel {
        let (_, text, _) = fixtures().into_iter().find(|f| f.0 == name).unwrap();
        GroupoidModel::from_json(text).unwrap()
    }

    #[test]
    fn truth_table() {
        for (name, text, want) in fixtures() {
            let m = GroupoidModel::from_json(text).unwrap();
            assert_eq!(run_checks(&m).row(), want, "{name}");
        }
    }

    #[test]
    fn units_are_neutral_in_products() {
        let m = load("disjoint-semidirect");
        let g = &m.groupoid;
        let all = g.all_arrows();
        assert_eq!(g.frobenius_product(&g.units(), &all), all);
        assert_eq!(g.frobenius_product(&all, &g.units()), all);
    }

    #[test]
    fn semi_normalized_models_satisfy_consequences() {
        for (name, text, _) in fixtures() {
            let m = GroupoidModel::from_json(text).unwrap();
            if is_semi_normalized(&m).unwrap() {
                assert!(products_commute(&m), "{name}");
                assert!(is_normal_subgroupoid(&m), "{name}");
                assert!(same_orbits(&m), "{name}");
            }
        }
        assert!(!same_orbits(&load("not-semi-normalized")));
    }

    #[test]
    fn degenerate_model_with_full_family() {
        // H only units, N the whole vertex groups of a groupoid with no
        // arrows between distinct objects.
        let m = load("normalized");
        let g = m.groupoid.clone();
        let s = GroupoidModel::from_json(
            &serde_json::json!({
                "objects": ["a"],
                "arrows": g.vertex_group(0).iter().map(|&a| g.arrow(a).clone()).collect::<Vec<_>>(),
                "mult": [["e","e","e"],["e","(23)","(23)"],["(23)","e","(23)"],["(23)","(23)","e"]],
                "H": ["e"],
                "N": {"a": ["(23)"]},
            })
            .to_string(),
        )
        .unwrap();
        assert!(is_semi_normalized(&s).unwrap());
    }

    #[test]
    fn twisted_family_is_not_uniform() {
        // N_a = ⟨(23)⟩ while the other objects carry trivial N.
        let text = fixtures()[0].1;
        let mut spec: ModelSpec = serde_json::from_str(text).unwrap();
        spec.n.insert("a".into(), vec!["(23)".into()]);
        let m = GroupoidModel::from_spec(&spec).unwrap();
        assert!(!is_uniform(&m));
        assert!(matches!(is_semi_normalized(&m), Err(GroupoidError::NotUniform)));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(matches!(GroupoidModel::from_json("{\"objects\": 3}"), Err(GroupoidError::Schema(_))));
        let mut spec: ModelSpec = serde_json::from_str(fixtures()[3].1).unwrap();
        spec.mult.pop();
        assert!(matches!(GroupoidModel::from_spec(&spec), Err(GroupoidError::MissingProduct(..))));
        let mut spec: ModelSpec = serde_json::from_str(fixtures()[3].1).unwrap();
        spec.h = vec![ArrowRef::Label("(12)".into())];
        assert!(matches!(GroupoidModel::from_spec(&spec), Err(GroupoidError::NotWideSubgroupoid("H"))));
    }
}
