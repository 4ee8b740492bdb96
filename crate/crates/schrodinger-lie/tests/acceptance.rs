//! End-to-end acceptance checks. Prints one line per criterion and exits
//! with a failure status if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use schrodinger_lie::conditions::{builtin_table, classifying_residual, prolonged_residual, CaseReport, Potential};
use schrodinger_lie::equivalence::{
    act_on_potential, equiv_generator_check, is_real_admissible, pushforward, random_function,
    random_generator, random_real_admissible, random_transformation, EquivGenerator, EquivTransformation,
};
use schrodinger_lie::expr::{Expr, SamplerConfig, SymbolTable};
use schrodinger_lie::fields::{bracket_generic, bracket_structural, expand, GeneratorCoeffs};
use schrodinger_lie::groupoid::{fixtures, run_checks, GroupoidModel};

use common::{deviation, generic_potential, random_elementary, real_potential, sampler};

const TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn table_reports() -> (Vec<CaseReport>, Duration) {
    let start = Instant::now();
    let table = builtin_table();
    let cfg = SamplerConfig { bindings: 5, points: 100, tol: TOL, ..SamplerConfig::default() };
    let reports = table.cases.iter().map(|c| table.verify(c.id, &cfg).expect("case exists")).collect();
    (reports, start.elapsed())
}

fn table(reports: &[CaseReport], elapsed: Duration) -> Outcome {
    let failed: Vec<usize> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    let enough = reports.iter().all(|r| r.draws.len() >= 5 && r.draws.iter().all(|d| d.residual_samples >= 100));
    let worst = reports.iter().flat_map(|r| &r.draws).map(|d| d.residual_max).fold(0.0, f64::max);
    Outcome {
        pass: reports.len() == 20 && failed.is_empty() && enough && elapsed < Duration::from_secs(60),
        detail: format!(
            "{} cases, failing {:?}, 5 draws x 100 points, max residual {worst:.2e}, {:.2} s",
            reports.len(),
            failed,
            elapsed.as_secs_f64()
        ),
    }
}

fn brackets() -> Outcome {
    let start = Instant::now();
    let mut s = sampler(11, 100);
    let b = Default::default();
    let mut worst = 0.0f64;
    let mut bad = 0;
    let pairs = 50;
    for _ in 0..pairs {
        let (g1, g2) = (random_generator(&mut s, 2), random_generator(&mut s, 2));
        let diff = expand(&bracket_structural(&g1, &g2)).sub(&bracket_generic(&expand(&g1), &expand(&g2)));
        let d = diff.components().iter().map(|c| deviation(c, &b, &mut s)).fold(0.0, f64::max);
        worst = worst.max(d);
        bad += usize::from(!(d < TOL));
    }
    let mut jacobi_worst = 0.0f64;
    let mut jacobi_bad = 0;
    let triples = 20;
    for _ in 0..triples {
        let g: Vec<GeneratorCoeffs> = (0..3).map(|_| random_generator(&mut s, 2)).collect();
        let br = |a: &GeneratorCoeffs, c: &GeneratorCoeffs| bracket_structural(a, c);
        let sum = br(&g[0], &br(&g[1], &g[2])).add(&br(&g[1], &br(&g[2], &g[0]))).add(&br(&g[2], &br(&g[0], &g[1])));
        let d = sum.components().iter().map(|c| deviation(c, &b, &mut s)).fold(0.0, f64::max);
        jacobi_worst = jacobi_worst.max(d);
        jacobi_bad += usize::from(!(d < TOL));
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: bad == 0 && jacobi_bad == 0 && elapsed < Duration::from_secs(10),
        detail: format!(
            "{pairs} pairs (max {worst:.2e}), {triples} Jacobi triples (max {jacobi_worst:.2e}), {:.2} s",
            elapsed.as_secs_f64()
        ),
    }
}

fn prolongation() -> Outcome {
    let mut s = sampler(12, 100);
    let n = 2;
    let d = |e: &str| GeneratorCoeffs::d(n, schrodinger_lie::expr::parse(e).unwrap());
    let p = |a: i64, b: i64, t: bool| {
        let f = |k: i64| if t { Expr::int(k) * Expr::t() } else { Expr::int(k) };
        GeneratorCoeffs::p(vec![f(a), f(b)])
    };
    let pool = vec![d("1"), d("t"), d("t^2"), GeneratorCoeffs::j(n, 1, 2), p(1, 0, false), p(0, 1, true)];
    let (mut total, mut non_symmetries, mut disagreements) = (0, 0, Vec::new());
    for case in &builtin_table().cases {
        let mut syms = BTreeMap::new();
        for sym in case.potential.expr.symbols() {
            syms.insert(sym.name.clone(), sym);
        }
        let binding = s.binding(&syms.into_values().collect::<Vec<_>>(), case.hints());
        let extra = random_generator(&mut s, n);
        for g in case.generators.iter().chain(&pool).chain(std::iter::once(&extra)) {
            let cls = classifying_residual(&case.potential, g).unwrap();
            let pro = prolonged_residual(&case.potential, &expand(g));
            let zero_cls = deviation(&cls, &binding, &mut s) < TOL;
            let zero_pro = deviation(&pro, &binding, &mut s) < TOL;
            total += 1;
            non_symmetries += usize::from(!zero_cls);
            if zero_cls != zero_pro {
                disagreements.push(format!("case {} with {g}", case.id));
            }
        }
    }
    Outcome {
        pass: total >= 50 && non_symmetries >= 10 && disagreements.is_empty(),
        detail: format!(
            "{total} pairs, {non_symmetries} non-symmetries, disagreements {:?}",
            disagreements.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

fn groupoid_laws() -> Outcome {
    let mut s = sampler(13, 30);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let pairs = 20;
    let id = EquivTransformation::identity(2);
    for k in 0..pairs {
        let mut syms = SymbolTable::new();
        let v = generic_potential(&mut s, &mut syms);
        let binding = s.binding(&syms.symbols().cloned().collect::<Vec<_>>(), syms.hints());
        let t1 = random_transformation(&mut s, 2);
        let t2 = random_transformation(&mut s, 2);
        let t3 = random_transformation(&mut s, 2);
        let act = |v: &Potential, t: &EquivTransformation| act_on_potential(v, t).unwrap();
        let v1 = act(&v, &t1);
        let laws: Vec<(&str, Expr, Expr)> = vec![
            ("composition", act(&v, &t1.then(&t2).unwrap()).expr, act(&v1, &t2).expr),
            ("left identity", act(&v, &id.then(&t1).unwrap()).expr, v1.expr.clone()),
            ("right identity", act(&v, &t1.then(&id).unwrap()).expr, v1.expr.clone()),
            ("inverse", act(&v1, &t1.inverse()).expr, v.expr.clone()),
            ("inverse composite", act(&v, &t1.then(&t1.inverse()).unwrap()).expr, v.expr.clone()),
            (
                "associativity",
                act(&v, &t1.then(&t2).unwrap().then(&t3).unwrap()).expr,
                act(&v, &t1.then(&t2.then(&t3).unwrap()).unwrap()).expr,
            ),
        ];
        for (name, a, b) in laws {
            let d = deviation(&(a - b), &binding, &mut s);
            worst = worst.max(d);
            if !(d < TOL) {
                failures.push(format!("pair {k}: {name} ({d:.2e})"));
            }
        }
    }

    let mut fixtures_run = 0;
    let mut moved = 0;
    let mut eq_worst = 0.0f64;
    for (k, case) in builtin_table().cases.iter().enumerate() {
        let essential = case.generators.iter().filter(|g| {
            !g.tau.is_zero_const() || g.kappa.iter().chain(&g.chi).any(|e| !e.is_zero_const())
        });
        for (j, g) in essential.enumerate().take(3) {
            let e = random_elementary(&mut s, k + j);
            let w = act_on_potential(&case.potential, &e).unwrap();
            let h = pushforward(g, &e).unwrap();
            let r = classifying_residual(&w, &h).unwrap();
            let mut syms = BTreeMap::new();
            for sym in r.symbols() {
                syms.insert(sym.name.clone(), sym);
            }
            let binding = s.binding(&syms.into_values().collect::<Vec<_>>(), case.hints());
            let d = deviation(&r, &binding, &mut s);
            eq_worst = eq_worst.max(d);
            fixtures_run += 1;
            // The untransformed generator should usually fail on the image.
            let unmoved = classifying_residual(&w, g).unwrap();
            let b2 = s.binding(&unmoved.symbols(), case.hints());
            moved += usize::from(deviation(&unmoved, &b2, &mut s) > TOL);
            if !(d < TOL) {
                failures.push(format!("case {} generator {g} under {:?}: {d:.2e}", case.id, e.elementary()));
            }
        }
    }
    Outcome {
        pass: failures.is_empty() && fixtures_run >= 20,
        detail: format!(
            "{pairs} transformation pairs (max {worst:.2e}), {fixtures_run} equivariance fixtures (max {eq_worst:.2e}, {moved} where the untransformed generator fails){}",
            if failures.is_empty() { String::new() } else { format!(", failing {:?}", &failures[..failures.len().min(3)]) }
        ),
    }
}

fn equivalence_algebra() -> Outcome {
    let mut s = sampler(14, 20);
    let mut failing = Vec::new();
    let mut count = 0;
    for _ in 0..3 {
        let gens = [
            EquivGenerator::Time { n: 2, tau: random_function(&mut s) },
            EquivGenerator::Rotation { n: 2, a: 1, b: 2 },
            EquivGenerator::Shift { chi: vec![random_function(&mut s), random_function(&mut s)] },
            EquivGenerator::Phase { n: 2, sigma: random_function(&mut s) },
            EquivGenerator::Amplitude { n: 2, rho: random_function(&mut s) },
        ];
        for g in gens {
            count += 1;
            if !equiv_generator_check(&g) {
                failing.push(format!("{g:?}"));
            }
        }
    }
    Outcome { pass: failing.is_empty(), detail: format!("{count} generators over five families, failing {failing:?}") }
}

fn invariant_bounds(reports: &[CaseReport]) -> Outcome {
    let case19 = reports.iter().find(|r| r.id == 19);
    let dim19 = case19.map(|r| (r.expected.dim(), r.draws.iter().map(|d| d.dim).max().unwrap_or(0)));
    let mut bad = Vec::new();
    for r in reports {
        let tuples = std::iter::once(r.expected).chain(r.draws.iter().filter_map(|d| d.invariants));
        for k in tuples {
            if !k.k2_r0_admissible() || !k.k3_admissible() || k.pmi_dim() > 6 {
                bad.push(format!("case {}: {k}", r.id));
            }
        }
    }
    Outcome {
        pass: dim19 == Some((10, 10)) && bad.is_empty(),
        detail: format!("case 19 dimension (expected, measured) {dim19:?}, violations {bad:?}"),
    }
}

fn real_closure() -> Outcome {
    let mut s = sampler(15, 50);
    let fixtures = 12;
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    let mut reversed = 0;
    for k in 0..fixtures {
        let mut syms = SymbolTable::new();
        let v = real_potential(&mut s, &mut syms);
        let tr = random_real_admissible(&mut s, 2);
        reversed += usize::from(tr.orientation() < 0);
        let binding = s.binding(&syms.symbols().cloned().collect::<Vec<_>>(), syms.hints());
        let w = act_on_potential(&v, &tr).unwrap();
        let d = deviation(&w.expr.im(), &binding, &mut s);
        worst = worst.max(d);
        if !(d < TOL) || !is_real_admissible(&tr, 2) {
            failing.push(k);
        }
    }
    Outcome {
        pass: failing.is_empty(),
        detail: format!("{fixtures} fixtures ({reversed} time-reversing), max |Im| {worst:.2e}, failing {failing:?}"),
    }
}

fn groupoid_kit() -> Outcome {
    let start = Instant::now();
    let mut wrong = Vec::new();
    for (name, text, want) in fixtures() {
        let got = GroupoidModel::from_json(text).map(|m| run_checks(&m).row());
        if got.as_ref().ok() != Some(&want) {
            wrong.push(format!("{name}: {got:?}"));
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: wrong.is_empty() && elapsed < Duration::from_secs(5),
        detail: format!("4 fixtures, mismatches {wrong:?}, {:.3} s", elapsed.as_secs_f64()),
    }
}

fn main() {
    let (reports, elapsed) = table_reports();
    let results = [
        ("classification table", table(&reports, elapsed)),
        ("bracket agreement and Jacobi identity", brackets()),
        ("prolonged vs classifying residual", prolongation()),
        ("groupoid laws and pushforward equivariance", groupoid_laws()),
        ("equivalence algebra families", equivalence_algebra()),
        ("invariant integer bounds", invariant_bounds(&reports)),
        ("real potentials stay real", real_closure()),
        ("finite groupoid truth table", groupoid_kit()),
    ];
    let mut all = true;
    for (k, (name, o)) in results.iter().enumerate() {
        println!("criterion {}: {} {name}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    if !all {
        std::process::exit(1);
    }
}
