//! Equivalence transformations acting on potentials: a phase shift, the
//! scaling that preserves the inverse-square family, and a composite.

use schrodinger_lie::conditions::{builtin_table, Potential};
use schrodinger_lie::equivalence::{
    act_on_potential, compare, parse_transformation, random_transformation, EquivTransformation,
};
use schrodinger_lie::expr::{Sampler, SamplerConfig, SymbolTable};

fn main() -> anyhow::Result<()> {
    let cfg = SamplerConfig::default();

    let shift = EquivTransformation::from_json_in(r#"{"T": "t", "Sigma": "3*t"}"#, &SymbolTable::new(), 2)?;
    println!("phase shift on V = 0:  {}", act_on_potential(&Potential::zero(2), &shift)?.expr);

    let case = builtin_table().get(7)?;
    let scale = parse_transformation(r#"{"T": "4*t", "O": [[1, 0], [0, 1]], "X": [0, 0]}"#)?;
    let image = act_on_potential(&case.potential, &scale)?;
    let same = compare(&image.expr, &case.potential.expr, &cfg)?;
    println!("scaling T = 4t on {}:  {}  (unchanged: {})", case.potential.expr, image.expr, same.pass);

    let mut s = Sampler::new(cfg.clone());
    let (t1, t2) = (random_transformation(&mut s, 2), random_transformation(&mut s, 2));
    let v = Potential::parse("x1^2 + i*x2", &Default::default(), 2)?;
    let direct = act_on_potential(&v, &t1.then(&t2)?)?;
    let stepwise = act_on_potential(&act_on_potential(&v, &t1)?, &t2)?;
    let r = compare(&direct.expr, &stepwise.expr, &cfg)?;
    println!("composite vs stepwise action: max deviation {:.2e}", r.max_normalized);
    let back = act_on_potential(&direct, &t1.then(&t2)?.inverse())?;
    println!("round trip through the inverse: max deviation {:.2e}", compare(&back.expr, &v.expr, &cfg)?.max_normalized);
    Ok(())
}
