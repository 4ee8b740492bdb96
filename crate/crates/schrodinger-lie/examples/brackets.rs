//! Structural brackets of generators, checked against the bracket of the
//! expanded vector fields.

use schrodinger_lie::expr::{parse, Sampler, SamplerConfig, SurrogateBinding};
use schrodinger_lie::fields::{bracket_generic, bracket_structural, expand, GeneratorCoeffs};

fn main() -> anyhow::Result<()> {
    let d = GeneratorCoeffs::d(2, parse("t^2")?);
    let p = GeneratorCoeffs::p(vec![parse("sin(t)")?, parse("t")?]);
    let j = GeneratorCoeffs::j(2, 1, 2);
    let m = GeneratorCoeffs::m(2, parse("t^3")?);
    let mut sampler = Sampler::new(SamplerConfig::default());
    let binding = SurrogateBinding::new();

    for (name, a, b) in [("[D, P]", &d, &p), ("[J, P]", &j, &p), ("[P, P']", &p, &GeneratorCoeffs::p(vec![parse("1")?, parse("t^2")?])), ("[D, M]", &d, &m)] {
        let c = bracket_structural(a, b);
        let gap = expand(&c).sub(&bracket_generic(&expand(a), &expand(b)));
        let mut worst = 0.0f64;
        for e in gap.components() {
            worst = worst.max(sampler.check_with(&e, &binding)?.max_normalized);
        }
        println!("{name:<8} = {c}");
        println!("         generic bracket agrees to {worst:.1e}");
    }
    Ok(())
}
