//! Graph containers.
//!
//! Both graph kinds store weighted arcs in the directed convention: an
//! undirected edge `{u, v}` is kept as the two arcs `u -> v` and `v -> u`
//! with equal weight, and an undirected self-loop as a single arc `v -> v`.
//! Duplicate arcs are aggregated by summing weights and zero-weight arcs are
//! dropped, so every stored arc is unique and strictly positive.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tree::Partition;

/// Dense index of a graph node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// Dense index of a relation type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationId(pub usize);

/// Bidirectional map between external string labels and dense indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelSet {
    /// Labels `"0"`, `"1"`, ... for generated graphs.
    pub fn numbered(count: usize) -> Self {
        let mut set = Self::default();
        for i in 0..count {
            set.intern(&i.to_string());
        }
        set
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = Self::default();
        for name in names {
            let name = name.as_ref();
            if set.get(name).is_some() {
                return Err(Error::InvalidConfig(format!("duplicate label `{name}`")));
            }
            set.intern(name);
        }
        Ok(set)
    }

    /// Returns the index of `name`, assigning the next free index on first sight.
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelArc {
    pub source: usize,
    pub target: usize,
    pub relation: usize,
    pub weight: f64,
}

/// How relations are collapsed when a multi-relational graph is reduced to a
/// single relation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ReduceMode {
    /// Weight 1 wherever any relation connects the ordered pair.
    #[default]
    Presence,
    /// Sum of weights across relations.
    WeightSum,
}

impl std::str::FromStr for ReduceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "presence" => Ok(ReduceMode::Presence),
            "weight-sum" | "sum" => Ok(ReduceMode::WeightSum),
            other => Err(Error::InvalidConfig(format!("unknown reduce mode `{other}`"))),
        }
    }
}

fn check_weight(weight: f64) -> Result<()> {
    if weight.is_nan() || weight < 0.0 || weight.is_infinite() {
        return Err(Error::InvalidConfig(format!(
            "arc weight must be finite and non-negative, got {weight}"
        )));
    }
    Ok(())
}

/// Sorts by key and sums weights of equal keys; drops zero weights.
fn aggregate<K: Ord + Copy>(mut items: Vec<(K, f64)>) -> Vec<(K, f64)> {
    items.sort_by_key(|a| a.0);
    let mut out: Vec<(K, f64)> = Vec::with_capacity(items.len());
    for (key, w) in items {
        match out.last_mut() {
            Some(last) if last.0 == key => last.1 += w,
            _ => out.push((key, w)),
        }
    }
    out.retain(|&(_, w)| w > 0.0);
    out
}

/// Number of unordered, non-self pairs `{u, v}` joined in either direction.
fn undirected_pairs<'a>(pairs: impl Iterator<Item = (usize, usize)> + 'a) -> usize {
    let mut seen: Vec<(usize, usize)> = pairs
        .filter(|(u, v)| u != v)
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn sparsity_from(node_count: usize, edges: usize) -> f64 {
    if node_count < 2 {
        return 0.0;
    }
    let pairs = (node_count * (node_count - 1) / 2) as f64;
    1.0 - edges as f64 / pairs
}

/// Weighted graph with a single relation type.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleRelationalGraph {
    nodes: LabelSet,
    arcs: Vec<Arc>,
    directed: bool,
}

impl SingleRelationalGraph {
    /// Builds a directed graph from `(source, target, weight)` arcs.
    pub fn directed(
        node_count: usize,
        arcs: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        Self::build(LabelSet::numbered(node_count), arcs, true)
    }

    /// Builds an undirected graph; each `(u, v, w)` edge is mirrored.
    pub fn undirected(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        Self::build(LabelSet::numbered(node_count), edges, false)
    }

    pub fn with_labels(
        nodes: LabelSet,
        arcs: impl IntoIterator<Item = (usize, usize, f64)>,
        directed: bool,
    ) -> Result<Self> {
        Self::build(nodes, arcs, directed)
    }

    fn build(
        nodes: LabelSet,
        arcs: impl IntoIterator<Item = (usize, usize, f64)>,
        directed: bool,
    ) -> Result<Self> {
        let n = nodes.len();
        let mut items = Vec::new();
        for (s, t, w) in arcs {
            check_weight(w)?;
            for v in [s, t] {
                if v >= n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: v + 1,
                    });
                }
            }
            items.push(((s, t), w));
            if !directed && s != t {
                items.push(((t, s), w));
            }
        }
        let arcs = aggregate(items)
            .into_iter()
            .map(|((source, target), weight)| Arc {
                source,
                target,
                weight,
            })
            .collect();
        Ok(Self {
            nodes,
            arcs,
            directed,
        })
    }

    /// Marks an already symmetric arc set as undirected.
    pub(crate) fn into_undirected(mut self) -> Self {
        self.directed = false;
        self
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &LabelSet {
        &self.nodes
    }

    /// Arcs sorted by `(source, target)`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn total_weight(&self) -> f64 {
        self.arcs.iter().map(|a| a.weight).sum()
    }

    /// Sum of incoming arc weights per node, self-arcs included.
    pub fn in_degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.node_count()];
        for a in &self.arcs {
            d[a.target] += a.weight;
        }
        d
    }

    pub fn out_degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.node_count()];
        for a in &self.arcs {
            d[a.source] += a.weight;
        }
        d
    }

    /// Number of distinct unordered node pairs joined by an arc (self-arcs excluded).
    pub fn undirected_edge_count(&self) -> usize {
        undirected_pairs(self.arcs.iter().map(|a| (a.source, a.target)))
    }

    /// `1 - edges / (|V|(|V|-1)/2)`.
    pub fn sparsity(&self) -> f64 {
        sparsity_from(self.node_count(), self.undirected_edge_count())
    }

    /// The same arcs viewed as a one-relation graph.
    pub fn to_multi(&self) -> MultiRelationalGraph {
        MultiRelationalGraph {
            nodes: self.nodes.clone(),
            relations: LabelSet::numbered(1),
            arcs: self
                .arcs
                .iter()
                .map(|a| RelArc {
                    source: a.source,
                    target: a.target,
                    relation: 0,
                    weight: a.weight,
                })
                .collect(),
            directed: self.directed,
        }
    }

    /// Subgraph on `nodes` (relabelled `0..nodes.len()` in the given order)
    /// keeping arcs with both endpoints inside.
    pub fn induced(&self, nodes: &[usize]) -> Self {
        let map = position_map(self.node_count(), nodes);
        let labels = LabelSet::from_names(nodes.iter().map(|&v| self.nodes.name(v)))
            .expect("node labels are unique");
        let arcs = self
            .arcs
            .iter()
            .filter_map(|a| Some((map[a.source]?, map[a.target]?, a.weight)));
        Self::build(labels, arcs, true)
            .map(|mut g| {
                g.directed = self.directed;
                g
            })
            .expect("induced arcs are valid")
    }

    /// Collapses each community into a single node, summing arc weights.
    /// Intra-community arcs become self-arcs.
    pub fn consolidate(&self, partition: &Partition) -> Result<Self> {
        partition.check_cover(self.node_count())?;
        let assign = partition.assignment();
        let arcs = self
            .arcs
            .iter()
            .map(|a| (assign[a.source], assign[a.target], a.weight));
        let mut g = Self::build(LabelSet::numbered(partition.len()), arcs, true)?;
        g.directed = self.directed;
        Ok(g)
    }
}

/// Weighted graph whose arcs carry a relation type; the sparse form of the
/// adjacency tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiRelationalGraph {
    nodes: LabelSet,
    relations: LabelSet,
    arcs: Vec<RelArc>,
    directed: bool,
}

impl MultiRelationalGraph {
    /// Builds a graph from `(source, target, relation, weight)` tuples. When
    /// `directed` is false every non-loop tuple is mirrored.
    pub fn new(
        node_count: usize,
        relation_count: usize,
        arcs: impl IntoIterator<Item = (usize, usize, usize, f64)>,
        directed: bool,
    ) -> Result<Self> {
        Self::with_labels(
            LabelSet::numbered(node_count),
            LabelSet::numbered(relation_count),
            arcs,
            directed,
        )
    }

    pub fn with_labels(
        nodes: LabelSet,
        relations: LabelSet,
        arcs: impl IntoIterator<Item = (usize, usize, usize, f64)>,
        directed: bool,
    ) -> Result<Self> {
        let n = nodes.len();
        let k = relations.len();
        let mut items = Vec::new();
        for (s, t, r, w) in arcs {
            check_weight(w)?;
            if s >= n || t >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.max(t) + 1,
                });
            }
            if r >= k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: r + 1,
                });
            }
            items.push(((r, s, t), w));
            if !directed && s != t {
                items.push(((r, t, s), w));
            }
        }
        let arcs = aggregate(items)
            .into_iter()
            .map(|((relation, source, target), weight)| RelArc {
                source,
                target,
                relation,
                weight,
            })
            .collect();
        Ok(Self {
            nodes,
            relations,
            arcs,
            directed,
        })
    }

    /// Marks an already symmetric arc set as undirected.
    pub(crate) fn into_undirected(mut self) -> Self {
        self.directed = false;
        self
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn nodes(&self) -> &LabelSet {
        &self.nodes
    }

    pub fn relations(&self) -> &LabelSet {
        &self.relations
    }

    /// Arcs sorted by `(relation, source, target)`.
    pub fn arcs(&self) -> &[RelArc] {
        &self.arcs
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Arcs of one relation.
    pub fn relation_arcs(&self, relation: usize) -> &[RelArc] {
        let lo = self.arcs.partition_point(|a| a.relation < relation);
        let hi = self.arcs.partition_point(|a| a.relation <= relation);
        &self.arcs[lo..hi]
    }

    /// Relation `r` as a single-relational graph.
    pub fn slice(&self, relation: usize) -> SingleRelationalGraph {
        let arcs = self
            .relation_arcs(relation)
            .iter()
            .map(|a| Arc {
                source: a.source,
                target: a.target,
                weight: a.weight,
            })
            .collect();
        SingleRelationalGraph {
            nodes: self.nodes.clone(),
            arcs,
            directed: self.directed,
        }
    }

    pub fn relation_weight(&self, relation: usize) -> f64 {
        self.relation_arcs(relation).iter().map(|a| a.weight).sum()
    }

    pub fn sparsity(&self, relation: usize) -> f64 {
        let edges =
            undirected_pairs(self.relation_arcs(relation).iter().map(|a| (a.source, a.target)));
        sparsity_from(self.node_count(), edges)
    }

    /// Relations with no arcs at all.
    pub fn empty_relations(&self) -> Vec<usize> {
        (0..self.relation_count())
            .filter(|&r| self.relation_arcs(r).is_empty())
            .collect()
    }

    /// Errors with [`Error::NoArcs`] when any relation slice is empty.
    pub fn validate_nonempty_slices(&self) -> Result<()> {
        if self.arcs.is_empty() || !self.empty_relations().is_empty() {
            return Err(Error::NoArcs);
        }
        Ok(())
    }

    /// Ignores relation types, mapping the graph onto one relation.
    pub fn reduce_to_single(&self, mode: ReduceMode) -> SingleRelationalGraph {
        let items = self
            .arcs
            .iter()
            .map(|a| {
                let w = match mode {
                    ReduceMode::Presence => 1.0,
                    ReduceMode::WeightSum => a.weight,
                };
                ((a.source, a.target), w)
            })
            .collect();
        let mut merged = aggregate(items);
        if mode == ReduceMode::Presence {
            for item in &mut merged {
                item.1 = 1.0;
            }
        }
        SingleRelationalGraph {
            nodes: self.nodes.clone(),
            arcs: merged
                .into_iter()
                .map(|((source, target), weight)| Arc {
                    source,
                    target,
                    weight,
                })
                .collect(),
            directed: self.directed,
        }
    }

    /// Subgraph on `nodes` (relabelled in the given order) keeping every
    /// relation, including ones left without arcs.
    pub fn induced(&self, nodes: &[usize]) -> Self {
        let map = position_map(self.node_count(), nodes);
        let labels = LabelSet::from_names(nodes.iter().map(|&v| self.nodes.name(v)))
            .expect("node labels are unique");
        let arcs: Vec<_> = self
            .arcs
            .iter()
            .filter_map(|a| Some((map[a.source]?, map[a.target]?, a.relation, a.weight)))
            .collect();
        let mut g = Self::with_labels(labels, self.relations.clone(), arcs, true)
            .expect("induced arcs are valid");
        g.directed = self.directed;
        g
    }

    /// One node per community; per-relation weights between communities are
    /// summed, intra-community arcs become self-arcs.
    pub fn consolidate(&self, partition: &Partition) -> Result<Self> {
        partition.check_cover(self.node_count())?;
        let assign = partition.assignment();
        let arcs: Vec<_> = self
            .arcs
            .iter()
            .map(|a| (assign[a.source], assign[a.target], a.relation, a.weight))
            .collect();
        let mut g = Self::with_labels(
            LabelSet::numbered(partition.len()),
            self.relations.clone(),
            arcs,
            true,
        )?;
        g.directed = self.directed;
        Ok(g)
    }
}

impl From<&SingleRelationalGraph> for MultiRelationalGraph {
    fn from(g: &SingleRelationalGraph) -> Self {
        g.to_multi()
    }
}

fn position_map(node_count: usize, nodes: &[usize]) -> Vec<Option<usize>> {
    let mut map = vec![None; node_count];
    for (i, &v) in nodes.iter().enumerate() {
        map[v] = Some(i);
    }
    map
}

/// Ground-truth class of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthLabels {
    classes: Vec<usize>,
    class_count: usize,
}

impl GroundTruthLabels {
    /// Class indices are compacted to `0..class_count` in first-appearance order.
    pub fn new(classes: Vec<usize>) -> Self {
        let mut remap = HashMap::new();
        let classes: Vec<usize> = classes
            .into_iter()
            .map(|c| {
                let next = remap.len();
                *remap.entry(c).or_insert(next)
            })
            .collect();
        Self {
            class_count: remap.len(),
            classes,
        }
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_assignment(&self.classes)
    }
}
