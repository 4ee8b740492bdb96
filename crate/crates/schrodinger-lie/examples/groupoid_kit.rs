//! Runs the semi-normalization checks on the shipped groupoid models and
//! shows the vertex-group factorizations.

use schrodinger_lie::groupoid::{fixtures, run_checks, GroupoidModel, CHECKS};

fn main() -> anyhow::Result<()> {
    println!("{:<22} {}", "model", CHECKS.join("  "));
    for (name, json, _) in fixtures() {
        let m = GroupoidModel::from_json(json)?;
        let r = run_checks(&m);
        let row: Vec<String> =
            CHECKS.iter().zip(r.row()).map(|(c, v)| format!("{:^w$}", if v { "T" } else { "F" }, w = c.len())).collect();
        println!("{name:<22} {}", row.join("  "));
        for v in &r.factorization.vertices {
            println!(
                "    {:<4} |G| = {:<3} |G_ess| = {:<3} |N| = {:<3} normal {}  unique {}",
                v.object, v.order, v.essential_order, v.normal_order, v.n_is_normal, v.unique_decomposition
            );
        }
    }
    Ok(())
}
