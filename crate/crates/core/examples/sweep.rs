//! Decoded fractions of the three objectives over a small sweep of the
//! number of relations.

use mrse_kit::experiment::{format_rows, run, seed_means, ExperimentPlan, SweepAxis};

fn main() -> mrse_kit::Result<()> {
    let mut plan = ExperimentPlan::new(SweepAxis::Relations);
    plan.grid = vec![1.0, 2.0, 3.0];
    plan.seeds = 3;
    plan.template.nodes = 150;
    plan.timing = false;
    let rows = run(&plan, None)?;
    if std::env::args().any(|a| a == "--csv") {
        print!("{}", format_rows(&plan, &rows));
        return Ok(());
    }
    for (value, objective, mean) in seed_means(&plan, &rows, |r| r.decoded) {
        println!("|R| = {value}  {objective:>4}  decoded {mean:.4}");
    }
    Ok(())
}
