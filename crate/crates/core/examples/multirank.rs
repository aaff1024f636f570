//! Joint node and relation stationary distributions of a small
//! multi-relational graph.

use mrse_kit::entropy::{mrse, mrse_1d};
use mrse_kit::io::{parse_edge_list, EdgeListOptions};
use mrse_kit::surfing::{build_multirel_transitions, multirank, SurfConfig};
use mrse_kit::tree::EncodingTree;

const GRAPH: &str = "\
# nodes\tv1\tv2\tv3\tv4\tv5
src\tdst\trel\tweight
v1\tv2\tR1\t1
v1\tv5\tR1\t1
v1\tv2\tR2\t1
v1\tv5\tR2\t1
v1\tv3\tR3\t1
";

fn main() -> mrse_kit::Result<()> {
    let g = parse_edge_list(GRAPH, EdgeListOptions::default())?;
    let cfg = SurfConfig::default();
    let t = build_multirel_transitions(&g, &cfg)?;
    let mr = multirank(&t, &cfg)?;
    for (name, x) in g.nodes().names().iter().zip(&mr.x) {
        println!("{name}: {x:.4}");
    }
    for (name, y) in g.relations().names().iter().zip(&mr.y) {
        println!("{name}: {y:.4}");
    }
    println!("1D: {:.4}", mrse_1d(&mr));
    println!("2D, singletons: {:.4}", mrse(&g, &EncodingTree::singletons(5)?, &mr, &t)?);
    Ok(())
}
