//! Greedy two-level entropy minimization.
//!
//! Starting from a height-2 tree, the greedy loop repeatedly merges the pair
//! of edge-connected clusters whose merge lowers the entropy the most, and
//! stops once no merge lowers it. The hierarchical driver runs the same loop
//! on consecutive chunks of the cluster list, and the recursive driver
//! consolidates communities into nodes and minimizes again one level up.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::entropy::{shannon_entropy, EntropyTerms, FlowField};
use crate::error::{Error, Result};
use crate::graph::{MultiRelationalGraph, ReduceMode, SingleRelationalGraph};
use crate::surfing::{
    build_multirel_transitions, build_transition, multirank, power_method, SurfConfig,
};
use crate::tree::{EncodingTree, Partition, TreeNodeId};

/// Deltas closer to zero than this never trigger a merge.
pub const MERGE_THRESHOLD: f64 = -1e-12;
/// Resolution at which deltas are compared before tie-breaking on ids.
pub const DELTA_RESOLUTION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Degree-based structural entropy.
    Se,
    /// Random-surfing structural entropy.
    Rsse,
    /// Multi-relational structural entropy.
    #[default]
    Mrse,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Se, Objective::Rsse, Objective::Mrse];

    pub fn name(self) -> &'static str {
        match self {
            Objective::Se => "se",
            Objective::Rsse => "rsse",
            Objective::Mrse => "mrse",
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "se" => Ok(Objective::Se),
            "rsse" => Ok(Objective::Rsse),
            "mrse" => Ok(Objective::Mrse),
            other => Err(Error::InvalidConfig(format!("unknown objective `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Vanilla,
    Hierarchical,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vanilla" => Ok(Strategy::Vanilla),
            "hierarchical" => Ok(Strategy::Hierarchical),
            other => Err(Error::InvalidConfig(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Which merge delta drives the greedy choice.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DeltaMode {
    /// Exact change of the objective.
    #[default]
    Exact,
    /// Closed form with cluster occupancies as leaf coefficients.
    Paper,
}

impl std::str::FromStr for DeltaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DeltaMode::Exact),
            "paper" => Ok(DeltaMode::Paper),
            other => Err(Error::InvalidConfig(format!("unknown delta mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeConfig {
    pub objective: Objective,
    pub strategy: Strategy,
    /// Clusters per chunk for the hierarchical strategy.
    pub subgraph_size: usize,
    pub delta: DeltaMode,
    pub surf: SurfConfig,
    /// How SE and RSSE view a multi-relational graph.
    pub reduction: ReduceMode,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        Self {
            objective: Objective::Mrse,
            strategy: Strategy::Vanilla,
            subgraph_size: 100,
            delta: DeltaMode::Exact,
            surf: SurfConfig::default(),
            reduction: ReduceMode::Presence,
        }
    }
}

impl MinimizeConfig {
    pub fn for_objective(objective: Objective) -> Self {
        Self {
            objective,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.subgraph_size < 2 {
            return Err(Error::InvalidConfig("sub-graph size must be at least 2".into()));
        }
        self.surf.validate()
    }
}

/// Flow data of a graph under one objective, plus its one-dimensional entropy.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub field: FlowField,
    /// Shannon entropy of the occupancy (degree-based: height-1 tree value).
    pub one_dim: f64,
    /// Solver iterations spent (0 for the degree-based objective).
    pub iterations: usize,
    /// Relation stationary vector (multi-relational objective only).
    pub relations: Vec<f64>,
}

/// Graphs the minimizers can run on.
pub trait SurfableGraph: Sized {
    fn node_count(&self) -> usize;
    fn has_arcs(&self) -> bool;
    fn induced(&self, nodes: &[usize]) -> Self;
    fn consolidate(&self, partition: &Partition) -> Result<Self>;
    fn prepare(&self, objective: Objective, cfg: &MinimizeConfig) -> Result<Prepared>;
}

fn prepare_single(g: &SingleRelationalGraph, objective: Objective, surf: &SurfConfig) -> Result<Prepared> {
    match objective {
        Objective::Se => {
            let field = FlowField::from_degrees(g)?;
            let one_dim = field.evaluate(&EncodingTree::height1(g.node_count())?)?;
            Ok(Prepared {
                field,
                one_dim,
                iterations: 0,
                relations: Vec::new(),
            })
        }
        Objective::Rsse => {
            let tm = build_transition(g, surf)?;
            let x = power_method(&tm, surf)?;
            Ok(Prepared {
                one_dim: shannon_entropy(&x.x),
                iterations: x.iterations,
                field: FlowField::from_surfing(&tm, &x)?,
                relations: Vec::new(),
            })
        }
        Objective::Mrse => prepare_multi(&g.to_multi(), surf),
    }
}

fn prepare_multi(g: &MultiRelationalGraph, surf: &SurfConfig) -> Result<Prepared> {
    let mt = build_multirel_transitions(g, surf)?;
    let mr = multirank(&mt, surf)?;
    Ok(Prepared {
        one_dim: shannon_entropy(&mr.x),
        iterations: mr.iterations,
        field: FlowField::from_multirank(&mt, &mr)?,
        relations: mr.y,
    })
}

impl SurfableGraph for SingleRelationalGraph {
    fn node_count(&self) -> usize {
        SingleRelationalGraph::node_count(self)
    }

    fn has_arcs(&self) -> bool {
        !self.arcs().is_empty()
    }

    fn induced(&self, nodes: &[usize]) -> Self {
        SingleRelationalGraph::induced(self, nodes)
    }

    fn consolidate(&self, partition: &Partition) -> Result<Self> {
        SingleRelationalGraph::consolidate(self, partition)
    }

    fn prepare(&self, objective: Objective, cfg: &MinimizeConfig) -> Result<Prepared> {
        prepare_single(self, objective, &cfg.surf)
    }
}

impl SurfableGraph for MultiRelationalGraph {
    fn node_count(&self) -> usize {
        MultiRelationalGraph::node_count(self)
    }

    fn has_arcs(&self) -> bool {
        !self.arcs().is_empty()
    }

    fn induced(&self, nodes: &[usize]) -> Self {
        MultiRelationalGraph::induced(self, nodes)
    }

    fn consolidate(&self, partition: &Partition) -> Result<Self> {
        MultiRelationalGraph::consolidate(self, partition)
    }

    fn prepare(&self, objective: Objective, cfg: &MinimizeConfig) -> Result<Prepared> {
        match objective {
            Objective::Mrse => prepare_multi(self, &cfg.surf),
            single => prepare_single(&self.reduce_to_single(cfg.reduction), single, &cfg.surf),
        }
    }
}

/// One accepted merge.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeStep {
    /// Smallest graph node of each merged cluster.
    pub cluster_a: usize,
    pub cluster_b: usize,
    /// Delta that drove the choice (exact or closed form, per config).
    pub delta: f64,
    /// Exact objective after the merge. For hierarchical runs this is the
    /// objective of the sub-graph the merge happened in.
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct Minimization {
    pub tree: EncodingTree,
    pub trace: Vec<MergeStep>,
    /// Objective of the starting tree.
    pub initial_objective: f64,
    /// Objective of the returned tree, recomputed from scratch.
    pub final_objective: f64,
    /// One-dimensional entropy of the whole graph.
    pub one_dim: f64,
    /// Sub-graph size used by each hierarchical pass (empty for vanilla runs).
    pub pass_sizes: Vec<usize>,
}

impl Minimization {
    pub fn partition(&self) -> Partition {
        self.tree.partition().expect("minimizers return height-2 trees")
    }
}

#[derive(Debug)]
struct GreedyOutcome {
    tree: EncodingTree,
    trace: Vec<MergeStep>,
    initial: f64,
    last: f64,
}

fn candidate_key(delta: f64, a: TreeNodeId, b: TreeNodeId) -> Reverse<(i64, usize, usize)> {
    let rounded = (delta / DELTA_RESOLUTION).round() as i64;
    Reverse((rounded, a.0.min(b.0), a.0.max(b.0)))
}

/// Greedy merging on a flow field starting from `initial`.
fn greedy(field: &FlowField, initial: &Partition, mode: DeltaMode, labels: &[usize]) -> Result<GreedyOutcome> {
    let mut tree = EncodingTree::from_partition(initial)?;
    let mut terms = EntropyTerms::new(field, &tree)?;
    let mut rep: Vec<usize> = vec![usize::MAX; 2 * tree.size() + 1];
    for c in tree.clusters() {
        rep[c.0] = labels[tree.members(c)[0]];
    }
    let delta_of = |terms: &EntropyTerms, a, b| match mode {
        DeltaMode::Exact => terms.delta_exact(a, b),
        DeltaMode::Paper => terms.delta_paper(a, b),
    };
    let mut heap = BinaryHeap::new();
    for a in tree.clusters() {
        for (b, _) in terms.neighbors(a) {
            if a < b {
                heap.push(candidate_key(delta_of(&terms, a, b)?, a, b));
            }
        }
    }
    let initial_objective = terms.objective();
    let mut objective = initial_objective;
    let mut trace = Vec::new();
    while let Some(Reverse((_, a, b))) = heap.pop() {
        let (a, b) = (TreeNodeId(a), TreeNodeId(b));
        if !tree.is_alive(a) || !tree.is_alive(b) {
            continue;
        }
        let delta = delta_of(&terms, a, b)?;
        if delta >= MERGE_THRESHOLD {
            break;
        }
        let exact = match mode {
            DeltaMode::Exact => delta,
            DeltaMode::Paper => terms.delta_exact(a, b)?,
        };
        let merged = terms.merge(&mut tree, a, b)?;
        objective += exact;
        if rep.len() <= merged.0 {
            rep.resize(merged.0 + 1, usize::MAX);
        }
        rep[merged.0] = rep[a.0].min(rep[b.0]);
        trace.push(MergeStep {
            cluster_a: rep[a.0].min(rep[b.0]),
            cluster_b: rep[a.0].max(rep[b.0]),
            delta,
            objective,
        });
        let neighbors: Vec<TreeNodeId> = terms.neighbors(merged).map(|(k, _)| k).collect();
        for k in neighbors {
            heap.push(candidate_key(delta_of(&terms, merged, k)?, merged, k));
        }
    }
    Ok(GreedyOutcome {
        tree,
        trace,
        initial: initial_objective,
        last: objective,
    })
}

/// Greedy minimization from an arbitrary starting partition, on a
/// precomputed flow field.
pub fn minimize_from(field: &FlowField, initial: &Partition, mode: DeltaMode) -> Result<(EncodingTree, Vec<MergeStep>)> {
    let labels: Vec<usize> = (0..field.node_count()).collect();
    let out = greedy(field, initial, mode, &labels)?;
    Ok((out.tree, out.trace))
}

/// Greedy two-level minimization from the all-singletons tree.
pub fn minimize_2d<G: SurfableGraph>(g: &G, cfg: &MinimizeConfig) -> Result<Minimization> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let prepared = g.prepare(cfg.objective, cfg)?;
    let labels: Vec<usize> = (0..n).collect();
    let out = greedy(&prepared.field, &Partition::singletons(n), cfg.delta, &labels)?;
    let final_objective = prepared.field.evaluate(&out.tree)?;
    debug_assert!(cfg.delta == DeltaMode::Paper || (final_objective - out.last).abs() < 1e-6);
    Ok(Minimization {
        tree: out.tree,
        trace: out.trace,
        initial_objective: out.initial,
        final_objective,
        one_dim: prepared.one_dim,
        pass_sizes: Vec::new(),
    })
}

/// Chunked minimization: consecutive groups of at most `subgraph_size`
/// clusters (ordered by smallest member) are refined on their induced
/// sub-graphs until a pass fits in one group; a pass that changes nothing
/// doubles the group size.
pub fn hierarchical_minimize<G: SurfableGraph>(g: &G, cfg: &MinimizeConfig) -> Result<Minimization> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut size = cfg.subgraph_size;
    let mut partition = Partition::singletons(n);
    let mut trace = Vec::new();
    let mut pass_sizes = Vec::new();
    loop {
        pass_sizes.push(size);
        let groups: Vec<&[Vec<usize>]> = partition.communities().chunks(size).collect();
        let single_group = groups.len() == 1;
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(partition.len());
        for group in groups {
            let mut nodes: Vec<usize> = group.iter().flatten().copied().collect();
            nodes.sort_unstable();
            let sub = g.induced(&nodes);
            if group.len() < 2 || !sub.has_arcs() {
                next.extend(group.iter().cloned());
                continue;
            }
            let mut local = vec![0usize; n];
            for (i, &v) in nodes.iter().enumerate() {
                local[v] = i;
            }
            let seed = Partition::new(
                group
                    .iter()
                    .map(|c| c.iter().map(|&v| local[v]).collect())
                    .collect(),
            )?;
            let prepared = sub.prepare(cfg.objective, cfg)?;
            let out = greedy(&prepared.field, &seed, cfg.delta, &nodes)?;
            trace.extend(out.trace);
            for c in out.tree.partition()?.communities() {
                next.push(c.iter().map(|&i| nodes[i]).collect());
            }
        }
        let next = Partition::new(next)?;
        if single_group {
            partition = next;
            break;
        }
        if next == partition {
            size = size.saturating_mul(2);
        }
        partition = next;
    }
    let prepared = g.prepare(cfg.objective, cfg)?;
    let tree = EncodingTree::from_partition(&partition)?;
    let initial_objective = prepared.field.evaluate(&EncodingTree::singletons(n)?)?;
    let final_objective = prepared.field.evaluate(&tree)?;
    Ok(Minimization {
        tree,
        trace,
        initial_objective,
        final_objective,
        one_dim: prepared.one_dim,
        pass_sizes,
    })
}

/// Dispatches on the configured strategy.
pub fn minimize<G: SurfableGraph>(g: &G, cfg: &MinimizeConfig) -> Result<Minimization> {
    match cfg.strategy {
        Strategy::Vanilla => minimize_2d(g, cfg),
        Strategy::Hierarchical => hierarchical_minimize(g, cfg),
    }
}

/// Higher levels by repeated minimization on consolidated graphs. Returns one
/// partition of the original nodes per level, finest first.
pub fn minimize_recursive<G: SurfableGraph>(g: &G, depth: usize, cfg: &MinimizeConfig) -> Result<Vec<Partition>> {
    if depth == 0 {
        return Err(Error::InvalidConfig("depth must be at least 1".into()));
    }
    let mut levels: Vec<Partition> = Vec::new();
    let mut mapping = Partition::singletons(g.node_count());
    let mut current: Option<G> = None;
    for level in 0..depth {
        let graph = current.as_ref().unwrap_or(g);
        let result = minimize(graph, cfg)?;
        let p = result.partition();
        if level > 0 && p.len() == graph.node_count() {
            break;
        }
        let lifted = mapping.lift(&p)?;
        levels.push(lifted.clone());
        if p.len() == 1 {
            break;
        }
        let next = graph.consolidate(&p)?;
        current = Some(next);
        mapping = lifted;
    }
    Ok(levels)
}
