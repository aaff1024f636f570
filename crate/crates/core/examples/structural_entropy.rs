//! Degree-based structural entropy of a small graph under different trees.

use mrse_kit::entropy::{se, se_1d};
use mrse_kit::graph::SingleRelationalGraph;
use mrse_kit::tree::{EncodingTree, Partition};

fn main() -> mrse_kit::Result<()> {
    let k4 = SingleRelationalGraph::undirected(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)])?;
    println!("K4, one level: {:.4} bits", se_1d(&k4)?);

    // two triangles joined by a single edge
    let g = SingleRelationalGraph::undirected(
        6,
        [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, 1.0)],
    )?;
    let split = Partition::new(vec![vec![0, 1, 2], vec![3, 4, 5]])?;
    let wrong = Partition::new(vec![vec![0, 1, 3], vec![2, 4, 5]])?;
    println!("bridged triangles, one level:   {:.4}", se_1d(&g)?);
    println!("  split at the bridge:          {:.4}", se(&g, &EncodingTree::from_partition(&split)?)?);
    println!("  split across the triangles:   {:.4}", se(&g, &EncodingTree::from_partition(&wrong)?)?);
    println!("  all singletons:               {:.4}", se(&g, &EncodingTree::singletons(6)?)?);
    Ok(())
}
