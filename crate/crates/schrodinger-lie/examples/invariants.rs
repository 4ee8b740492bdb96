//! Invariant integers of symmetry algebras from the table and of a span
//! given by hand.

use schrodinger_lie::conditions::{builtin_table, invariants};
use schrodinger_lie::expr::{parse, Expr};
use schrodinger_lie::fields::GeneratorCoeffs;

fn main() -> anyhow::Result<()> {
    for id in [0, 7, 19] {
        let case = builtin_table().get(id)?;
        let k = invariants(&case.generators)?;
        println!("case {id:>2}: (k0, k1, k2, k3, r0) = {k}, dimension {}", k.dim());
    }

    // Free particle restricted to its Galilei part.
    let mut gs = vec![
        GeneratorCoeffs::m(2, Expr::one()),
        GeneratorCoeffs::i(2, Expr::one()),
        GeneratorCoeffs::d(2, Expr::one()),
        GeneratorCoeffs::j(2, 1, 2),
    ];
    for a in 0..2 {
        for chi in ["1", "t"] {
            let mut v = vec![Expr::zero(); 2];
            v[a] = parse(chi)?;
            gs.push(GeneratorCoeffs::p(v));
        }
    }
    let k = invariants(&gs)?;
    println!("Galilei span: {k}, dimension {}", k.dim());
    Ok(())
}
