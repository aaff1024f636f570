//! Deeper trees by repeated minimization on consolidated graphs: each level
//! treats the previous communities as nodes.

use mrse_kit::graph::{GroundTruthLabels, SingleRelationalGraph};
use mrse_kit::metrics::nmi;
use mrse_kit::minimize::{minimize_recursive, MinimizeConfig};
use rand::{Rng, SeedableRng};

fn main() -> mrse_kit::Result<()> {
    // 4 super-groups of 4 groups of 10 nodes
    let n = 160;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / 10 == v / 10 {
                0.9
            } else if u / 40 == v / 40 {
                0.05
            } else {
                0.004
            };
            if rng.gen_bool(p) {
                edges.push((u, v, 1.0));
            }
        }
    }
    let g = SingleRelationalGraph::undirected(n, edges)?;
    let groups = GroundTruthLabels::new((0..n).map(|v| v / 10).collect());
    let supers = GroundTruthLabels::new((0..n).map(|v| v / 40).collect());
    let levels = minimize_recursive(&g, 3, &MinimizeConfig::default())?;
    for (k, level) in levels.iter().enumerate() {
        println!(
            "level {}: {} communities, NMI vs groups {:.3}, vs super-groups {:.3}",
            k + 1,
            level.len(),
            nmi(level, &groups)?,
            nmi(level, &supers)?
        );
    }
    Ok(())
}
