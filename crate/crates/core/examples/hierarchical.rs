//! Chunked minimization on a planted five-community graph: groups of at most
//! `subgraph_size` clusters are refined separately until one group remains.

use mrse_kit::metrics::evaluate;
use mrse_kit::minimize::{minimize, MinimizeConfig, Strategy};
use mrse_kit::synth::planted_partition;
use std::time::Instant;

fn main() -> mrse_kit::Result<()> {
    let (g, labels) = planted_partition(&[100; 5], 0.08, 0.005, 3, 1)?;
    for (strategy, size) in [(Strategy::Vanilla, 0), (Strategy::Hierarchical, 50), (Strategy::Hierarchical, 200)] {
        let cfg = MinimizeConfig { strategy, subgraph_size: size.max(2), ..MinimizeConfig::default() };
        let start = Instant::now();
        let run = minimize(&g, &cfg)?;
        let scores = evaluate(&run.partition(), &labels)?;
        println!(
            "{strategy:?} n={size:<3} {} communities, 2D {:.4}, NMI {:.3}, passes {:?}, {:.0?}",
            run.partition().len(),
            run.final_objective,
            scores.nmi,
            run.pass_sizes,
            start.elapsed()
        );
    }
    Ok(())
}
