//! Greedy, hierarchical and recursive minimizers on graphs with known
//! structure, plus the invariants every run must keep.

mod common;

use common::*;
use mrse_kit::graph::{GroundTruthLabels, MultiRelationalGraph, SingleRelationalGraph};
use mrse_kit::metrics::nmi;
use mrse_kit::minimize::{
    minimize, minimize_2d, minimize_recursive, DeltaMode, MinimizeConfig, Objective, Strategy,
};
use mrse_kit::surfing::SurfConfig;
use mrse_kit::tree::{EncodingTree, Partition};
use proptest::prelude::*;
use rand::Rng;

fn cfg(objective: Objective) -> MinimizeConfig {
    MinimizeConfig::for_objective(objective)
}

/// Replays a trace and checks each merge joined clusters that share an arc.
fn assert_merges_follow_arcs(g: &MultiRelationalGraph, trace: &[mrse_kit::minimize::MergeStep]) {
    let n = g.node_count();
    let mut owner: Vec<usize> = (0..n).collect();
    for step in trace {
        let (a, b) = (owner[step.cluster_a], owner[step.cluster_b]);
        assert_eq!(a, step.cluster_a, "cluster label is not its smallest member");
        assert_eq!(b, step.cluster_b);
        let linked = g
            .arcs()
            .iter()
            .any(|arc| (owner[arc.source] == a && owner[arc.target] == b) || (owner[arc.source] == b && owner[arc.target] == a));
        assert!(linked, "merged unlinked clusters {a} and {b}");
        for o in owner.iter_mut() {
            if *o == b {
                *o = a;
            }
        }
    }
}

fn check_run(g: &MultiRelationalGraph, objective: Objective, delta: DeltaMode) {
    let c = MinimizeConfig { delta, ..cfg(objective) };
    let m = minimize_2d(g, &c).unwrap();
    let mut last = m.initial_objective;
    for step in &m.trace {
        assert!(step.delta < 0.0);
        if delta == DeltaMode::Exact {
            assert!(step.objective < last, "objective rose: {} -> {}", last, step.objective);
        }
        last = step.objective;
    }
    assert!(m.final_objective <= m.initial_objective + 1e-12);
    assert!(m.final_objective <= m.one_dim + 1e-12);
    if delta == DeltaMode::Exact {
        assert!((m.final_objective - last).abs() < 1e-9);
    }
    assert_merges_follow_arcs(g, &m.trace);
    m.tree.validate().unwrap();
    m.partition().check_cover(g.node_count()).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_runs_descend_and_respect_arcs(seed in any::<u64>(), n in 2usize..25, k in 1usize..4) {
        let mut r = rng(seed);
        let g = random_multi(&mut r, n, k);
        for o in Objective::ALL {
            check_run(&g, o, DeltaMode::Exact);
        }
        check_run(&g, Objective::Mrse, DeltaMode::Paper);
    }

    #[test]
    fn minimization_is_deterministic(seed in any::<u64>(), n in 2usize..30) {
        let mut r = rng(seed);
        let g = random_multi(&mut r, n, 2);
        for o in Objective::ALL {
            let a = minimize_2d(&g, &cfg(o)).unwrap();
            let b = minimize_2d(&g, &cfg(o)).unwrap();
            prop_assert_eq!(&a.trace, &b.trace);
            prop_assert_eq!(a.partition(), b.partition());
        }
    }

    #[test]
    fn large_chunks_reproduce_vanilla(seed in any::<u64>(), n in 2usize..40) {
        let mut r = rng(seed);
        let g = random_multi(&mut r, n, 2);
        for o in Objective::ALL {
            let vanilla = minimize_2d(&g, &cfg(o)).unwrap();
            let h = minimize(&g, &MinimizeConfig { strategy: Strategy::Hierarchical, subgraph_size: n.max(2), ..cfg(o) }).unwrap();
            prop_assert_eq!(h.partition(), vanilla.partition());
            prop_assert!((h.final_objective - vanilla.final_objective).abs() < 1e-12);
        }
    }
}

/// `count` disjoint 4-cliques whose members are interleaved: node v belongs
/// to clique v % count.
fn interleaved_cliques(count: usize) -> (SingleRelationalGraph, Partition) {
    let n = 4 * count;
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if u % count == v % count {
                e.push((u, v, 1.0));
            }
        }
    }
    let truth = Partition::from_assignment(&(0..n).map(|v| v % count).collect::<Vec<_>>());
    (SingleRelationalGraph::undirected(n, e).unwrap(), truth)
}

#[test]
fn chunk_size_doubles_until_groups_contain_arcs() {
    let (g, truth) = interleaved_cliques(4);
    for o in Objective::ALL {
        let h = minimize(&g, &MinimizeConfig { strategy: Strategy::Hierarchical, subgraph_size: 4, ..cfg(o) }).unwrap();
        assert_eq!(h.pass_sizes[..2], [4, 8], "{o}: {:?}", h.pass_sizes);
        assert!(h.pass_sizes.windows(2).all(|w| w[1] == w[0] || w[1] == 2 * w[0]));
        assert_eq!(h.partition(), truth, "{o}");
        assert_eq!(h.partition(), minimize_2d(&g, &cfg(o)).unwrap().partition());
    }
}

#[test]
fn hierarchical_trace_labels_are_global_node_ids() {
    let (g, _) = interleaved_cliques(5);
    let h = minimize(&g, &MinimizeConfig { strategy: Strategy::Hierarchical, subgraph_size: 6, ..cfg(Objective::Mrse) }).unwrap();
    assert!(!h.trace.is_empty());
    assert_merges_follow_arcs(&g.to_multi(), &h.trace);
}

#[test]
fn greedy_matches_exhaustive_search_on_tiny_graphs() {
    // the greedy is a heuristic; on these strongly clustered graphs it is
    // expected to land on the exact two-level optimum
    let mut r = rng(11);
    for _ in 0..5 {
        let sizes = [3, 3, 2];
        let n: usize = sizes.iter().sum();
        let mut e = Vec::new();
        let mut start = 0;
        for &s in &sizes {
            for i in start..start + s {
                for j in i + 1..start + s {
                    e.push((i, j, r.gen_range(2.0..4.0)));
                }
            }
            start += s;
        }
        e.push((0, 3, 0.1));
        e.push((4, 7, 0.1));
        let g = SingleRelationalGraph::undirected(n, e).unwrap();
        let surf = SurfConfig::default();
        let b = adjusted_transition(&dense_matrix(&g), surf.teleport);
        let x = stationary(&b);
        let (best, best_part) = exhaustive_minimum(&b, &x);
        let m = minimize_2d(&g, &cfg(Objective::Rsse)).unwrap();
        assert_eq!(m.partition(), best_part);
        assert!((m.final_objective - best).abs() < 1e-9);
    }
}

/// Three nested levels: `top` super-groups of `mid` groups of `size` nodes.
fn planted_hierarchy(top: usize, mid: usize, size: usize, seed: u64) -> (SingleRelationalGraph, Vec<usize>, Vec<usize>) {
    let n = top * mid * size;
    let group = |v: usize| v / size;
    let sup = |v: usize| v / (size * mid);
    let mut r = rng(seed);
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if group(u) == group(v) {
                0.9
            } else if sup(u) == sup(v) {
                0.05
            } else {
                0.004
            };
            if r.gen_bool(p) {
                e.push((u, v, 1.0));
            }
        }
    }
    let g = SingleRelationalGraph::undirected(n, e).unwrap();
    (g, (0..n).map(group).collect(), (0..n).map(sup).collect())
}

#[test]
fn recursive_levels_recover_a_planted_hierarchy() {
    for seed in 0..5 {
        let (g, groups, supers) = planted_hierarchy(4, 4, 10, seed);
        let levels = minimize_recursive(&g, 3, &cfg(Objective::Mrse)).unwrap();
        assert!(levels.len() >= 2, "seed {seed}: {} levels", levels.len());
        let fine = nmi(&levels[0], &GroundTruthLabels::new(groups)).unwrap();
        let coarse = nmi(&levels[1], &GroundTruthLabels::new(supers)).unwrap();
        assert!(fine > 0.9, "seed {seed}: fine level NMI {fine}");
        assert!(coarse > 0.9, "seed {seed}: coarse level NMI {coarse}");
        // successive levels nest and never get finer
        for w in levels.windows(2) {
            assert!(w[1].len() <= w[0].len());
            EncodingTree::from_hierarchy(g.node_count(), w).unwrap();
        }
    }
}

#[test]
fn random_merges_keep_the_tree_valid() {
    let n = 1001;
    let mut tree = EncodingTree::singletons(n).unwrap();
    let mut r = rng(99);
    for _ in 0..1000 {
        let clusters = tree.clusters();
        let a = r.gen_range(0..clusters.len());
        let b = (a + r.gen_range(1..clusters.len())) % clusters.len();
        tree.merge(clusters[a], clusters[b]).unwrap();
        tree.validate().unwrap();
    }
    assert_eq!(tree.clusters().len(), 1);
    assert_eq!(tree.partition().unwrap(), Partition::whole(n));
}
