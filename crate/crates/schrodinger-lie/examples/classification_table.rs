//! Verifies every case of the two-dimensional classification table.

use schrodinger_lie::conditions::{builtin_table, CaseReport};
use schrodinger_lie::expr::SamplerConfig;

fn main() -> anyhow::Result<()> {
    let table = builtin_table();
    let cfg = SamplerConfig::default();
    let mut failed = 0;
    for case in &table.cases {
        let start = std::time::Instant::now();
        let rep: CaseReport = table.verify(case.id, &cfg)?;
        let worst = rep.draws.iter().map(|d| d.residual_max).fold(0.0, f64::max);
        println!(
            "case {:>2}  {}  {}  max residual {:.2e}  ({:.2?})",
            rep.id,
            if rep.pass { "pass" } else { "FAIL" },
            rep.expected,
            worst,
            start.elapsed()
        );
        for c in rep.failures() {
            println!("    {}: {}", c.name, c.detail);
        }
        failed += usize::from(!rep.pass);
    }
    println!("{} of {} cases pass", table.cases.len() - failed, table.cases.len());
    Ok(())
}
