//! Command-line front end. The binary only forwards its arguments to [`run`].

use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::conditions::{builtin_table, classifying_residual, invariants, CaseReport, Potential};
use crate::equivalence::{act_on_potential, EquivTransformation};
use crate::expr::{eval, Declaration, Sampler, SamplerConfig, SymbolTable};
use crate::fields::{bracket_generic, bracket_structural, expand, FieldSpec, GeneratorCoeffs};
use crate::groupoid::{run_checks, GroupoidModel, CHECKS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Sampling and output settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub n: usize,
    /// Sample points per binding.
    pub trials: usize,
    /// Random bindings (draws) per check.
    pub bindings: usize,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SamplerConfig::default();
        RunConfig { n: s.n, trials: s.points, bindings: s.bindings, tol: s.tol, seed: s.seed, format: Format::Text }
    }
}

impl RunConfig {
    pub fn sampler(&self) -> SamplerConfig {
        SamplerConfig {
            n: self.n,
            points: self.trials,
            bindings: self.bindings,
            tol: self.tol,
            seed: self.seed,
            ..SamplerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!("--n must be at least 1");
        }
        if !(self.tol > 0.0) {
            bail!("--tol must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "schrodinger-lie", version, about = "Verify Lie symmetries and admissible transformations of linear Schrödinger equations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Space dimension.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Sample points per binding.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Random bindings per check.
    #[arg(long, global = true)]
    pub bindings: Option<usize>,
    /// Normalized zero tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the fields above; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = self.bindings {
            cfg.bindings = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Arguments that take either a file path or the content itself.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify every case of the shipped classification table.
    VerifyTable,
    /// Verify one case of the table.
    VerifyCase { id: usize },
    /// Classifying-condition residual of a potential and a generator.
    Residual {
        /// Potential in the expression grammar.
        potential: String,
        /// Field-spec JSON.
        field: String,
        /// Declarations JSON for function symbols.
        #[arg(long)]
        decls: Option<String>,
    },
    /// Structural bracket of two generators, checked against the generic one.
    Bracket {
        first: String,
        second: String,
        #[arg(long)]
        decls: Option<String>,
    },
    /// Image of a potential under an equivalence transformation.
    Transform {
        potential: String,
        /// Transformation-spec JSON.
        transformation: String,
        #[arg(long)]
        decls: Option<String>,
    },
    /// Invariant integers of the span of a JSON list of field specs.
    Invariants {
        fields: String,
        #[arg(long)]
        decls: Option<String>,
    },
    /// Checks on a finite groupoid model.
    Groupoid {
        model: String,
        /// One of uniform, semi-normalized, disjoint, factorization,
        /// splitting, extension; all when absent.
        check: Option<String>,
    },
}

/// Rendered result of a command.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("reports serialize"),
            Format::Text => self.text.clone(),
        }
    }
}

/// Reads `arg` as a file when such a file exists, else returns it verbatim.
fn content(arg: &str) -> Result<String> {
    let p = std::path::Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

fn symbols(decls: Option<&str>) -> Result<SymbolTable> {
    let mut st = SymbolTable::new();
    if let Some(d) = decls {
        let list: Vec<Declaration> = serde_json::from_str(&content(d)?).context("declarations file")?;
        for d in &list {
            if crate::expr::is_reserved(&d.name) {
                bail!("`{}` is a reserved identifier", d.name);
            }
            if let Some(prev) = st.get(&d.name) {
                if prev.arity != d.arity || prev.codomain != d.codomain {
                    bail!("conflicting declarations of `{}`", d.name);
                }
            }
            st.declare_all(std::slice::from_ref(d));
        }
    }
    Ok(st)
}

fn field(text: &str, st: &SymbolTable) -> Result<GeneratorCoeffs> {
    let spec: FieldSpec = serde_json::from_str(&content(text)?).context("field spec")?;
    Ok(GeneratorCoeffs::from_spec(&spec, st)?)
}

fn case_line(r: &CaseReport) -> String {
    let mut s = format!("case {:>2}: {}  {}", r.id, if r.pass { "pass" } else { "FAIL" }, r.potential);
    for c in r.failures() {
        s.push_str(&format!("\n    {}: {}", c.name, c.detail));
        if let Some(w) = &c.witness {
            s.push_str(&format!(" [witness t = {:.6}, x = {:?}, |value| = {:.3e}]", w.t, w.x, w.normalized));
        }
    }
    s
}

pub fn cmd_verify_table(cfg: &RunConfig) -> Result<Outcome> {
    let table = builtin_table();
    let sc = cfg.sampler();
    let reports: Vec<CaseReport> =
        table.cases.par_iter().map(|c| table.verify(c.id, &sc)).collect::<Result<_, _>>()?;
    let ok = reports.iter().all(|r| r.pass);
    let passed = reports.iter().filter(|r| r.pass).count();
    let mut text: Vec<String> = reports.iter().map(case_line).collect();
    text.push(format!("{passed}/{} cases pass", reports.len()));
    Ok(Outcome { ok, json: json!({ "pass": ok, "config": cfg, "cases": reports }), text: text.join("\n") })
}

pub fn cmd_verify_case(cfg: &RunConfig, id: usize) -> Result<Outcome> {
    let r = builtin_table().verify(id, &cfg.sampler())?;
    let mut text = case_line(&r);
    for d in &r.draws {
        text.push_str(&format!(
            "\n    draw {}: residual {:.3e} over {} samples, dim {}{}",
            d.draw,
            d.residual_max,
            d.residual_samples,
            d.dim,
            d.invariants.map(|k| format!(", invariants {k}")).unwrap_or_default()
        ));
    }
    Ok(Outcome { ok: r.pass, json: json!({ "pass": r.pass, "config": cfg, "case": r }), text })
}

pub fn cmd_residual(cfg: &RunConfig, potential: &str, field_spec: &str, decls: Option<&str>) -> Result<Outcome> {
    let st = symbols(decls)?;
    let v = Potential::parse(content(potential)?.trim(), &st, cfg.n)?;
    let g = field(field_spec, &st)?;
    let r = classifying_residual(&v, &g)?;
    let mut sampler = Sampler::new(cfg.sampler());
    let rep = sampler.check(&r, st.hints())?;
    let mut text = format!(
        "residual {} (max normalized {:.3e} over {} samples)",
        if rep.pass { "vanishes" } else { "is nonzero" },
        rep.max_normalized,
        rep.samples
    );
    if let Some(w) = &rep.witness {
        text.push_str(&format!("\nwitness: t = {:.6}, x = {:?}, value = {:.6e} + {:.6e}i", w.t, w.x, w.value[0], w.value[1]));
    }
    Ok(Outcome {
        ok: rep.pass,
        json: json!({ "zero": rep.pass, "potential": v.expr.to_string(), "residual": r.to_string(), "report": rep }),
        text,
    })
}

pub fn cmd_bracket(cfg: &RunConfig, first: &str, second: &str, decls: Option<&str>) -> Result<Outcome> {
    let st = symbols(decls)?;
    let (g1, g2) = (field(first, &st)?, field(second, &st)?);
    if g1.n() != g2.n() {
        bail!("generators live in dimensions {} and {}", g1.n(), g2.n());
    }
    let b = bracket_structural(&g1, &g2);
    let diff = expand(&b).sub(&bracket_generic(&expand(&g1), &expand(&g2)));
    let mut sampler = Sampler::new(SamplerConfig { n: g1.n(), ..cfg.sampler() });
    let mut agree = true;
    let mut worst = 0.0f64;
    for c in diff.components() {
        let rep = sampler.check(&c, st.hints())?;
        agree &= rep.pass;
        worst = worst.max(rep.max_normalized);
    }
    let spec = b.to_spec();
    let text = format!(
        "{}\nstructural and generic brackets {} (max normalized difference {worst:.3e})",
        serde_json::to_string(&spec)?,
        if agree { "agree" } else { "DISAGREE" }
    );
    Ok(Outcome { ok: agree, json: json!({ "bracket": spec, "agree": agree, "max_difference": worst }), text })
}

pub fn cmd_transform(cfg: &RunConfig, potential: &str, transformation: &str, decls: Option<&str>) -> Result<Outcome> {
    let st = symbols(decls)?;
    let v = Potential::parse(content(potential)?.trim(), &st, cfg.n)?;
    let tr = EquivTransformation::from_json_in(&content(transformation)?, &st, cfg.n)?;
    if tr.n() != v.n {
        bail!("transformation acts in dimension {} but the potential lives in dimension {}", tr.n(), v.n);
    }
    let w = act_on_potential(&v, &tr)?;
    let at_source = tr.potential_at_source(&v.expr);
    let map = tr.space_map();

    // Ṽ at the image point against the source-side expression.
    let mut sampler = Sampler::new(SamplerConfig { points: 1, ..cfg.sampler() });
    let mut syms = w.expr.symbols();
    syms.extend(at_source.symbols());
    let binding = sampler.binding(&syms, st.hints());
    let mut rows = Vec::new();
    let mut ok = true;
    for _ in 0..cfg.trials.clamp(1, 8) {
        let p = sampler.point(v.n, &BTreeSet::new());
        let tt = eval(&tr.time_map, &binding, &p)?.re;
        let xt = map.iter().map(|e| eval(e, &binding, &p).map(|z| z.re)).collect::<Result<Vec<_>, _>>()?;
        let target = eval(&w.expr, &binding, &crate::expr::SamplePoint::new(tt, xt.clone()))?;
        let source = eval(&at_source, &binding, &p)?;
        let err = (target - source).norm() / (1.0 + source.norm());
        ok &= err < cfg.tol.max(1e-8);
        rows.push(json!({
            "t": p.t, "x": p.x, "t_target": tt, "x_target": xt,
            "target": [target.re, target.im], "source_side": [source.re, source.im], "error": err,
        }));
    }
    let mut text = format!("V~ = {}\n{:>10} {:>24} {:>12}", w.expr, "t", "V~(T, x~)", "error");
    for r in &rows {
        text.push_str(&format!(
            "\n{:>10.5} {:>11.5e}{:+.5e}i {:>12.3e}",
            r["t"].as_f64().unwrap_or(f64::NAN),
            r["target"][0].as_f64().unwrap_or(f64::NAN),
            r["target"][1].as_f64().unwrap_or(f64::NAN),
            r["error"].as_f64().unwrap_or(f64::NAN)
        ));
    }
    Ok(Outcome { ok, json: json!({ "potential": w.expr.to_string(), "spot_checks": rows, "pass": ok }), text })
}

pub fn cmd_invariants(fields: &str, decls: Option<&str>) -> Result<Outcome> {
    let st = symbols(decls)?;
    let specs: Vec<FieldSpec> = serde_json::from_str(&content(fields)?).context("list of field specs")?;
    let gs = specs.iter().map(|s| GeneratorCoeffs::from_spec(s, &st)).collect::<Result<Vec<_>, _>>()?;
    let k = invariants(&gs)?;
    Ok(Outcome {
        ok: true,
        json: json!({ "invariants": k, "dim": k.dim() }),
        text: format!("(k0, k1, k2, k3, r0) = {k}, dim {}", k.dim()),
    })
}

pub fn cmd_groupoid(model: &str, check: Option<&str>) -> Result<Outcome> {
    let m = GroupoidModel::from_json(&content(model)?)?;
    let r = run_checks(&m);
    if let Some(c) = check {
        let Some(&value) = r.results.get(c) else {
            bail!("unknown check `{c}`; expected one of {}", CHECKS.join(", "));
        };
        return Ok(Outcome {
            ok: value,
            json: json!({ "model": r.name, "check": c, "result": value }),
            text: format!("{}: {c} = {value}", r.name),
        });
    }
    let text = std::iter::once(format!("{} ({} objects, {} arrows)", r.name, r.objects, r.arrows))
        .chain(CHECKS.iter().map(|c| format!("  {c:<16} {}", r.results[*c])))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome { ok: true, json: serde_json::to_value(&r)?, text })
}

pub fn execute(cli: &Cli) -> Result<(Outcome, RunConfig)> {
    let cfg = cli.global.resolve()?;
    let out = match &cli.command {
        Command::VerifyTable => cmd_verify_table(&cfg)?,
        Command::VerifyCase { id } => cmd_verify_case(&cfg, *id)?,
        Command::Residual { potential, field, decls } => cmd_residual(&cfg, potential, field, decls.as_deref())?,
        Command::Bracket { first, second, decls } => cmd_bracket(&cfg, first, second, decls.as_deref())?,
        Command::Transform { potential, transformation, decls } => {
            cmd_transform(&cfg, potential, transformation, decls.as_deref())?
        }
        Command::Invariants { fields, decls } => cmd_invariants(fields, decls.as_deref())?,
        Command::Groupoid { model, check } => cmd_groupoid(model, check.as_deref())?,
    };
    Ok((out, cfg))
}

/// Parses arguments, runs the command and prints its report. Returns the
/// process exit code: 0 when every check passes, 1 on a failed check, 2 on
/// an input error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let json = cli.global.format == Some(Format::Json);
    match execute(&cli) {
        Ok((out, cfg)) => {
            use std::io::Write;
            let _ = writeln!(std::io::stdout().lock(), "{}", out.render(cfg.format));
            i32::from(!out.ok)
        }
        Err(e) => {
            if json {
                use std::io::Write;
                let _ = writeln!(std::io::stdout().lock(), "{}", json!({ "error": format!("{e:#}") }));
            } else {
                eprintln!("error: {e:#}");
            }
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("schrodinger-lie").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_defaults() {
        let c = cli(&["--seed", "7", "--tol", "1e-6", "verify-case", "3", "--format", "json"]);
        let cfg = c.global.resolve().unwrap();
        assert_eq!((cfg.seed, cfg.tol, cfg.format), (7, 1e-6, Format::Json));
        assert_eq!(cfg.trials, RunConfig::default().trials);
    }

    #[test]
    fn residual_examples() {
        let cfg = RunConfig::default();
        let d1 = r#"{"tau": 1, "chi": [0, 0]}"#;
        assert!(cmd_residual(&cfg, "0", d1, None).unwrap().ok);
        let r = cmd_residual(&cfg, "t*x1", d1, None).unwrap();
        assert!(!r.ok);
        assert!(r.json["report"]["witness"].is_object());
        assert!(cmd_residual(&cfg, "t*", d1, None).is_err());
    }

    #[test]
    fn sigma_shift_transform() {
        let cfg = RunConfig::default();
        let out = cmd_transform(&cfg, "0", r#"{"Sigma": "3*t"}"#, None).unwrap();
        assert!(out.ok);
        assert_eq!(out.json["potential"], "3");
    }

    #[test]
    fn groupoid_single_check() {
        let (_, text, _) = crate::groupoid::fixtures()[0];
        let out = cmd_groupoid(text, Some("disjoint")).unwrap();
        assert!(out.ok && out.json["result"] == true);
        assert!(cmd_groupoid("{\"objects\": 1}", None).is_err());
    }
}
