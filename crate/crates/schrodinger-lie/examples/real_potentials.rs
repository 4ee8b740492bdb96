//! Real potentials: admissible time maps keep them real, and quadratic
//! potentials reduce to the free equation.

use schrodinger_lie::conditions::Potential;
use schrodinger_lie::equivalence::{act_on_potential, is_free_reducible, random_real_admissible};
use schrodinger_lie::expr::{Codomain, Sampler, SamplerConfig, SymbolTable};

fn main() -> anyhow::Result<()> {
    for text in ["0", "x1^2 + x2^2", "-cos(t)*(x1^2 + x2^2) + t*x1", "x1^4", "i*x1"] {
        let v = Potential::parse(text, &SymbolTable::new(), 2)?;
        println!("{text:<32} reducible to the free equation: {}", is_free_reducible(&v)?);
    }

    let mut syms = SymbolTable::new();
    syms.declare("R", 3, Codomain::Real);
    let v = Potential::parse("R(t, x1, x2) + x2^(-2)", &syms, 2)?;
    let mut s = Sampler::new(SamplerConfig::default());
    for _ in 0..4 {
        let tr = random_real_admissible(&mut s, 2);
        let w = act_on_potential(&v, &tr)?;
        let binding = s.binding(&syms.symbols().cloned().collect::<Vec<_>>(), syms.hints());
        let im = s.check_with(&w.expr.im(), &binding)?;
        println!("T = {:<40} orientation {:+}  max |Im V~| {:.1e}", tr.time_map.to_string(), tr.orientation(), im.max_normalized);
    }
    Ok(())
}
