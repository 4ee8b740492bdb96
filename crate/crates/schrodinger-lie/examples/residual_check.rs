//! Classifying-condition residuals of a radial potential: rotations are
//! symmetries, time translation is not.

use schrodinger_lie::conditions::{classifying_residual, Potential};
use schrodinger_lie::expr::{Codomain, Expr, Sampler, SamplerConfig, SymbolTable};
use schrodinger_lie::fields::GeneratorCoeffs;

fn main() -> anyhow::Result<()> {
    let mut syms = SymbolTable::new();
    syms.declare("U", 2, Codomain::Complex);
    let v = Potential::parse("U(t, x1^2 + x2^2)", &syms, 2)?;
    let mut sampler = Sampler::new(SamplerConfig::default());

    let candidates = [
        ("J12", GeneratorCoeffs::j(2, 1, 2)),
        ("M(1)", GeneratorCoeffs::m(2, Expr::one())),
        ("D(1)", GeneratorCoeffs::d(2, Expr::one())),
        ("P(1, 0)", GeneratorCoeffs::p(vec![Expr::one(), Expr::zero()])),
    ];
    println!("V = {}", v.expr);
    for (name, g) in candidates {
        let r = classifying_residual(&v, &g)?;
        let rep = sampler.check(&r, syms.hints())?;
        print!("{name:<8} {}  max {:.2e}", if rep.pass { "symmetry    " } else { "not symmetry" }, rep.max_normalized);
        if let Some(w) = rep.witness {
            print!("  witness t = {:.4}, x = {:.4?}", w.t, w.x);
        }
        println!();
    }
    Ok(())
}
