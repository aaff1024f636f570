//! Reading and writing edge lists and partition files.

use mrse_kit::io::{format_edge_list, format_partition, parse_edge_list, parse_partition, EdgeListOptions};
use mrse_kit::minimize::{minimize_2d, MinimizeConfig};

const TEXT: &str = "\
# two relations, comma separated, duplicates add up
src,dst,rel,weight
alice,bob,follows,1
bob,carol,follows,1
carol,alice,follows,1
alice,bob,follows,1
dave,erin,replies,2
erin,frank,replies,1
frank,dave,replies,1
carol,dave,replies,0.5
";

fn main() -> mrse_kit::Result<()> {
    let g = parse_edge_list(TEXT, EdgeListOptions { undirected: Some(true) })?;
    println!("{} nodes, {} relations, {} arcs", g.node_count(), g.relation_count(), g.arcs().len());

    let written = format_edge_list(&g);
    print!("{written}");
    assert_eq!(parse_edge_list(&written, EdgeListOptions::default())?, g);

    let run = minimize_2d(&g, &MinimizeConfig::default())?;
    let text = format_partition(&run.partition(), g.nodes());
    print!("{text}");
    assert_eq!(parse_partition(&text, g.nodes())?, run.partition());
    Ok(())
}
