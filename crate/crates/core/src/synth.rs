//! Synthetic graphs: Barabási–Albert growth, edge dropout to a target
//! sparsity, relation stacking and planted partitions.
//!
//! Every generator is a pure function of its configuration and seed. Each
//! generation stage draws from its own named ChaCha stream so that adding a
//! stage never shifts the random numbers of another.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GroundTruthLabels, LabelSet, MultiRelationalGraph, SingleRelationalGraph};

/// Random stream `name` derived from `seed`.
pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a keeps stream ids stable across platforms and releases.
    let mut id: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        id ^= u64::from(b);
        id = id.wrapping_mul(0x0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub nodes: usize,
    /// Edges attached by each arriving node.
    pub attach: usize,
    /// Target sparsity in `[0, 1)`; `None` keeps the BA graph as grown.
    pub sparsity: Option<f64>,
    pub relations: usize,
    pub seed: u64,
    /// Keep only the arc from each arriving node to its attachment target.
    pub directed: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            nodes: 100,
            attach: 3,
            sparsity: None,
            relations: 1,
            seed: 0,
            directed: false,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.attach == 0 || self.attach >= self.nodes {
            return Err(Error::InvalidConfig(format!(
                "attachment count {} must be in [1, {})",
                self.attach, self.nodes
            )));
        }
        if self.relations == 0 {
            return Err(Error::InvalidConfig("relation count must be at least 1".into()));
        }
        if let Some(s) = self.sparsity {
            if !(0.0..1.0).contains(&s) {
                return Err(Error::InvalidConfig(format!("sparsity {s} outside [0, 1)")));
            }
        }
        Ok(())
    }

    /// One BA graph per relation, each dropped to the target sparsity, stacked.
    pub fn generate(&self) -> Result<MultiRelationalGraph> {
        self.validate()?;
        let mut slices = Vec::with_capacity(self.relations);
        for r in 0..self.relations {
            let seed = stream(self.seed, &format!("relation-{r}")).gen();
            let mut g = generate_ba(&SynthConfig { seed, ..*self })?;
            if let Some(s) = self.sparsity {
                g = dropout_to_sparsity(&g, s, seed)?;
            }
            if self.directed {
                g = orient_by_arrival(&g)?;
            }
            slices.push(g);
        }
        stack_relations(&slices)
    }
}

/// Undirected Barabási–Albert graph grown from a complete seed graph on
/// `attach` nodes.
pub fn generate_ba(cfg: &SynthConfig) -> Result<SingleRelationalGraph> {
    let (n, m) = (cfg.nodes, cfg.attach);
    if m == 0 || m >= n {
        return Err(Error::InvalidConfig(format!(
            "attachment count {m} must be in [1, {n})"
        )));
    }
    let mut rng = stream(cfg.seed, "ba");
    let mut edges = Vec::with_capacity(m * (n - m) + m * (m - 1) / 2);
    // every node appears once per incident edge
    let mut ends: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for i in 0..m {
        for j in i + 1..m {
            edges.push((i, j, 1.0));
            ends.extend([i, j]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in m..n {
        targets.clear();
        while targets.len() < m {
            let t = if ends.is_empty() {
                rng.gen_range(0..v)
            } else {
                ends[rng.gen_range(0..ends.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v, 1.0));
            ends.extend([t, v]);
        }
    }
    SingleRelationalGraph::undirected(n, edges)
}

/// Directed copy keeping, for every edge, the arc from the later node to the
/// earlier one (the direction in which BA growth attached it).
pub fn orient_by_arrival(g: &SingleRelationalGraph) -> Result<SingleRelationalGraph> {
    let arcs = g
        .arcs()
        .iter()
        .filter(|a| a.source >= a.target)
        .map(|a| (a.source, a.target, a.weight));
    SingleRelationalGraph::with_labels(g.nodes().clone(), arcs, true)
}

/// Removes uniformly chosen edges until `1 - edges / (n(n-1)/2)` reaches
/// `target`, keeping `ceil((1 - target) n(n-1)/2)` edges. Both directions of
/// an edge go together; self-loops are kept.
pub fn dropout_to_sparsity(
    g: &SingleRelationalGraph,
    target: f64,
    seed: u64,
) -> Result<SingleRelationalGraph> {
    if !(0.0..1.0).contains(&target) {
        return Err(Error::InvalidConfig(format!("sparsity {target} outside [0, 1)")));
    }
    let current = g.sparsity();
    if target < current - 1e-12 {
        return Err(Error::InvalidConfig(format!(
            "target sparsity {target} is below the current sparsity {current}"
        )));
    }
    let n = g.node_count();
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    let keep = ((1.0 - target) * pairs - 1e-9).ceil().max(0.0) as usize;

    let mut groups: BTreeMap<(usize, usize), Vec<(usize, usize, f64)>> = BTreeMap::new();
    let mut loops = Vec::new();
    for a in g.arcs() {
        let item = (a.source, a.target, a.weight);
        if a.source == a.target {
            loops.push(item);
        } else {
            let key = (a.source.min(a.target), a.source.max(a.target));
            groups.entry(key).or_default().push(item);
        }
    }
    if keep >= groups.len() {
        return Ok(g.clone());
    }
    let mut keys: Vec<(usize, usize)> = groups.keys().copied().collect();
    keys.shuffle(&mut stream(seed, "dropout"));
    keys.truncate(keep);
    let arcs = keys
        .iter()
        .flat_map(|k| groups[k].iter().copied())
        .chain(loops);
    SingleRelationalGraph::with_labels(g.nodes().clone(), arcs, true).map(|h| {
        if g.is_directed() {
            h
        } else {
            h.into_undirected()
        }
    })
}

/// Multi-relational graph whose relation `r` is `graphs[r]`.
pub fn stack_relations(graphs: &[SingleRelationalGraph]) -> Result<MultiRelationalGraph> {
    let Some(first) = graphs.first() else {
        return Err(Error::InvalidConfig("nothing to stack".into()));
    };
    let n = first.node_count();
    let mut arcs = Vec::new();
    for (r, g) in graphs.iter().enumerate() {
        if g.node_count() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.node_count(),
            });
        }
        arcs.extend(g.arcs().iter().map(|a| (a.source, a.target, r, a.weight)));
    }
    let directed = graphs.iter().any(|g| g.is_directed());
    MultiRelationalGraph::with_labels(
        first.nodes().clone(),
        LabelSet::numbered(graphs.len()),
        arcs,
        true,
    )
    .map(|g| if directed { g } else { g.into_undirected() })
}

/// Undirected planted-partition graph: nodes are numbered community by
/// community, and every relation independently draws each pair with
/// probability `intra_p` inside a community and `inter_p` across.
pub fn planted_partition(
    communities: &[usize],
    intra_p: f64,
    inter_p: f64,
    relation_count: usize,
    seed: u64,
) -> Result<(MultiRelationalGraph, GroundTruthLabels)> {
    for p in [intra_p, inter_p] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidConfig(format!("probability {p} outside [0, 1]")));
        }
    }
    if intra_p <= inter_p {
        return Err(Error::InvalidConfig(
            "intra-community probability must exceed the inter-community one".into(),
        ));
    }
    if relation_count == 0 || communities.iter().all(|&c| c == 0) {
        return Err(Error::InvalidConfig("empty planted graph".into()));
    }
    let classes: Vec<usize> = communities
        .iter()
        .enumerate()
        .flat_map(|(c, &size)| std::iter::repeat_n(c, size))
        .collect();
    let n = classes.len();
    let mut arcs = Vec::new();
    for r in 0..relation_count {
        let mut rng = stream(seed, &format!("planted-{r}"));
        for i in 0..n {
            for j in i + 1..n {
                let p = if classes[i] == classes[j] { intra_p } else { inter_p };
                if rng.gen::<f64>() < p {
                    arcs.push((i, j, r, 1.0));
                }
            }
        }
    }
    let g = MultiRelationalGraph::new(n, relation_count, arcs, false)?;
    Ok((g, GroundTruthLabels::new(classes)))
}
