//! Stationary distribution of a directed graph with a dangling node, and the
//! random-surfing entropy built on it.

use mrse_kit::entropy::{rsse, rsse_1d};
use mrse_kit::graph::SingleRelationalGraph;
use mrse_kit::surfing::{build_transition, power_method, SurfConfig};
use mrse_kit::tree::{EncodingTree, Partition};

fn main() -> mrse_kit::Result<()> {
    // node 4 has no outgoing arcs
    let g = SingleRelationalGraph::directed(
        5,
        [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (2, 3, 2.0), (3, 4, 1.0), (0, 4, 0.5)],
    )?;
    for c in [0.5, 0.85, 0.99] {
        let cfg = SurfConfig::with_teleport(c);
        let tm = build_transition(&g, &cfg)?;
        let x = power_method(&tm, &cfg)?;
        let tree = EncodingTree::from_partition(&Partition::new(vec![vec![0, 1, 2], vec![3, 4]])?)?;
        println!(
            "c = {c:<4}  x = {:.3?}  ({} iterations)  1D {:.4}  2D {:.4}",
            x.x,
            x.iterations,
            rsse_1d(&x),
            rsse(&g, &tree, &x, &tm)?
        );
    }
    Ok(())
}
