//! NMI, ARI and matched accuracy of a predicted partition.

use mrse_kit::graph::GroundTruthLabels;
use mrse_kit::metrics::{evaluate, ContingencyTable};
use mrse_kit::tree::Partition;

fn main() -> mrse_kit::Result<()> {
    let truth = GroundTruthLabels::new(vec![0, 0, 0, 1, 1, 1, 2, 2]);
    let cases = [
        ("exact, relabelled", vec![2, 2, 2, 0, 0, 0, 1, 1]),
        ("one node moved", vec![0, 0, 1, 1, 1, 1, 2, 2]),
        ("two merged", vec![0, 0, 0, 1, 1, 1, 1, 1]),
        ("extra cluster", vec![0, 0, 3, 1, 1, 1, 2, 2]),
        ("one cluster", vec![0; 8]),
    ];
    for (name, pred) in cases {
        let s = evaluate(&Partition::from_assignment(&pred), &truth)?;
        println!("{name:<18} NMI {:.3}  ARI {:+.3}  ACC {:.3}", s.nmi, s.ari, s.acc);
    }
    let table = ContingencyTable::from_assignments(&[0, 0, 1, 1], &[0, 0, 0, 1])?;
    println!("contingency: {:?}", table.counts());
    Ok(())
}
