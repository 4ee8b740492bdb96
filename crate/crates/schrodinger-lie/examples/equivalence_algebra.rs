//! Finite-difference checks of the five families spanning the equivalence
//! algebra.

use schrodinger_lie::equivalence::{equiv_generator_report, EquivGenerator};
use schrodinger_lie::expr::{parse, SamplerConfig};

fn main() -> anyhow::Result<()> {
    let gens = [
        ("D(1 + t^2)", EquivGenerator::Time { n: 2, tau: parse("1 + t^2")? }),
        ("J12", EquivGenerator::Rotation { n: 2, a: 1, b: 2 }),
        ("P(cos t, t^3)", EquivGenerator::Shift { chi: vec![parse("cos(t)")?, parse("t^3")?] }),
        ("M(exp t)", EquivGenerator::Phase { n: 2, sigma: parse("exp(t)")? }),
        ("I(sin 2t)", EquivGenerator::Amplitude { n: 2, rho: parse("sin(2*t)")? }),
    ];
    let cfg = SamplerConfig::default();
    for (name, g) in &gens {
        let r = equiv_generator_report(g, &cfg)?;
        println!(
            "{name:<14} {}  potential {:.1e}  projection {:.1e}",
            if r.pass { "pass" } else { "FAIL" },
            r.potential_error,
            r.projection_error
        );
        println!("    dV coefficient: {}", g.potential_coefficient(&parse("x1^2")?));
    }
    Ok(())
}
