//! Structural entropy functionals and merge deltas.
//!
//! All three measures share one shape. Given an occupancy probability per
//! node and the probability mass moving between nodes in one step, the
//! entropy of a graph relative to an encoding tree is
//!
//! ```text
//! H = - sum over non-root tree nodes a of  enter(a) * log2( p(a) / p(parent(a)) )
//! ```
//!
//! where `p(a)` is the occupancy of the nodes under `a` and `enter(a)` the
//! mass flowing into them from outside in one step. Degree-based entropy uses
//! `p = in-degree / volume` and `flow(i -> j) = A[j][i] / volume`; the
//! random-surfing variants use the stationary distribution and the adjusted
//! transition. [`FlowField`] holds that common data.
//!
//! All logarithms are base 2.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{MultiRelationalGraph, SingleRelationalGraph};
use crate::surfing::{MultiRankResult, MultiRelTransition, StationaryDistribution, TransitionMatrix};
use crate::tree::{EncodingTree, TreeNodeId};

/// `a * log2(b)` with `0 * log(0) = 0`.
#[inline]
pub(crate) fn xlog2(a: f64, b: f64) -> f64 {
    if a == 0.0 || b <= 0.0 {
        0.0
    } else {
        a * b.log2()
    }
}

/// Shannon entropy in bits.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().map(|&v| xlog2(v, v)).sum::<f64>()
}

/// One-step occupancy and flow of a surfer over the graph nodes.
///
/// The flow out of node `i` into node `j != i` is a sparse part plus a
/// per-source `leak` added to every destination (teleportation and dangling
/// redistribution). Flow from a node to itself never enters a set and is not
/// stored.
#[derive(Debug, Clone)]
pub struct FlowField {
    occupancy: Vec<f64>,
    out: Vec<Vec<(usize, f64)>>,
    leak: Vec<f64>,
    leak_total: f64,
}

impl FlowField {
    fn new(occupancy: Vec<f64>, out: Vec<Vec<(usize, f64)>>, leak: Vec<f64>) -> Self {
        let leak_total = leak.iter().sum();
        Self {
            occupancy,
            out,
            leak,
            leak_total,
        }
    }

    /// Degree statistics: occupancy `vol(v) / vol(V)` and flow
    /// `A[j][i] / vol(V)`, so that entering mass equals `g / vol(V)`.
    pub fn from_degrees(g: &SingleRelationalGraph) -> Result<Self> {
        let n = g.node_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let vol = g.total_weight();
        if vol <= 0.0 {
            return Err(Error::ZeroVolume);
        }
        let occupancy = g.in_degrees().into_iter().map(|d| d / vol).collect();
        let mut out = vec![Vec::new(); n];
        for a in g.arcs() {
            if a.source != a.target {
                out[a.source].push((a.target, a.weight / vol));
            }
        }
        Ok(Self::new(occupancy, out, vec![0.0; n]))
    }

    /// Stationary distribution `x` with the adjusted transition `B`.
    pub fn from_surfing(t: &TransitionMatrix, x: &StationaryDistribution) -> Result<Self> {
        let n = t.node_count();
        if x.x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.x.len(),
            });
        }
        let c = t.teleport();
        let out = (0..n)
            .map(|i| {
                t.column(i)
                    .iter()
                    .filter(|(j, _)| *j != i)
                    .map(|&(j, p)| (j, x.x[i] * c * p))
                    .collect()
            })
            .collect();
        let leak = (0..n).map(|i| x.x[i] * t.leak(i)).collect();
        Ok(Self::new(x.x.clone(), out, leak))
    }

    /// Node distribution `x'` with the relation-averaged node transition.
    pub fn from_multirank(t: &MultiRelTransition, mr: &MultiRankResult) -> Result<Self> {
        let n = t.node_count();
        if mr.x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: mr.x.len(),
            });
        }
        if mr.y.len() != t.relation_count() {
            return Err(Error::DimensionMismatch {
                expected: t.relation_count(),
                found: mr.y.len(),
            });
        }
        let (columns, leak) = t.effective_columns(&mr.y);
        let out = columns
            .into_iter()
            .enumerate()
            .map(|(i, col)| {
                col.into_iter()
                    .filter(|(j, _)| *j != i)
                    .map(|(j, p)| (j, mr.x[i] * p))
                    .collect()
            })
            .collect();
        let leak = leak.iter().zip(&mr.x).map(|(l, xi)| l * xi).collect();
        Ok(Self::new(mr.x.clone(), out, leak))
    }

    pub fn node_count(&self) -> usize {
        self.occupancy.len()
    }

    pub fn occupancy(&self) -> &[f64] {
        &self.occupancy
    }

    /// Off-diagonal sparse flows out of `i`.
    pub fn out_flows(&self, i: usize) -> &[(usize, f64)] {
        &self.out[i]
    }

    /// Flow from `i` added to every destination.
    pub fn leak(&self, i: usize) -> f64 {
        self.leak[i]
    }

    /// Mass entering a single node from all other nodes.
    pub fn leaf_entering(&self) -> Vec<f64> {
        let mut enter: Vec<f64> = self.leak.iter().map(|w| self.leak_total - w).collect();
        for list in &self.out {
            for &(j, f) in list {
                enter[j] += f;
            }
        }
        enter
    }

    /// Mass entering `members` from outside in one step.
    pub fn entering(&self, members: &[usize]) -> f64 {
        let mut inside = vec![false; self.node_count()];
        members.iter().for_each(|&v| inside[v] = true);
        let mut sparse = 0.0;
        let mut leak_inside = 0.0;
        for (i, list) in self.out.iter().enumerate() {
            if inside[i] {
                leak_inside += self.leak[i];
                continue;
            }
            sparse += list.iter().filter(|(j, _)| inside[*j]).map(|(_, f)| f).sum::<f64>();
        }
        sparse + members.len() as f64 * (self.leak_total - leak_inside)
    }

    /// Entropy relative to an encoding tree of any height.
    pub fn evaluate(&self, tree: &EncodingTree) -> Result<f64> {
        let n = self.node_count();
        if tree.node_count() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: tree.node_count(),
            });
        }
        // ancestor of every graph node at each height, walking up from the leaves
        let mut holder: Vec<TreeNodeId> = (0..n).map(|v| tree.leaf(v)).collect();
        let root = tree.root();
        let total: f64 = self.occupancy.iter().sum();
        let mut h = 0.0;
        while holder[0] != root {
            let mut sets: BTreeMap<TreeNodeId, (f64, f64, usize)> = BTreeMap::new();
            for v in 0..n {
                let e = sets.entry(holder[v]).or_default();
                e.0 += self.occupancy[v];
                e.1 += self.leak[v];
                e.2 += 1;
            }
            let mut sparse_in: BTreeMap<TreeNodeId, f64> = BTreeMap::new();
            for (i, list) in self.out.iter().enumerate() {
                for &(j, f) in list {
                    if holder[i] != holder[j] {
                        *sparse_in.entry(holder[j]).or_default() += f;
                    }
                }
            }
            let parents: BTreeMap<TreeNodeId, f64> = {
                let mut m: BTreeMap<TreeNodeId, f64> = BTreeMap::new();
                for (&id, &(p, _, _)) in &sets {
                    let parent = tree.parent(id).expect("non-root node has a parent");
                    *m.entry(parent).or_default() += p;
                }
                m
            };
            for (&id, &(p, w, size)) in &sets {
                let enter = sparse_in.get(&id).copied().unwrap_or(0.0)
                    + size as f64 * (self.leak_total - w);
                let parent = tree.parent(id).expect("non-root node has a parent");
                let p_parent = if parent == root { total } else { parents[&parent] };
                if p > 0.0 {
                    h -= xlog2(enter, p / p_parent);
                }
            }
            for slot in holder.iter_mut() {
                *slot = tree.parent(*slot).expect("non-root node has a parent");
            }
            // leaves of a tree may sit at different depths only if heights are
            // inconsistent, which `EncodingTree` rules out
            debug_assert!(holder.iter().all(|&a| tree.node_height(a) == tree.node_height(holder[0])));
        }
        Ok(h)
    }
}

/// Degree-based structural entropy relative to `tree`.
pub fn se(g: &SingleRelationalGraph, tree: &EncodingTree) -> Result<f64> {
    FlowField::from_degrees(g)?.evaluate(tree)
}

/// One-dimensional degree-based structural entropy (height-1 tree).
pub fn se_1d(g: &SingleRelationalGraph) -> Result<f64> {
    se(g, &EncodingTree::height1(g.node_count())?)
}

/// Random-surfing structural entropy.
pub fn rsse(
    g: &SingleRelationalGraph,
    tree: &EncodingTree,
    x: &StationaryDistribution,
    tm: &TransitionMatrix,
) -> Result<f64> {
    if tm.node_count() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: tm.node_count(),
        });
    }
    FlowField::from_surfing(tm, x)?.evaluate(tree)
}

/// `-sum x_i log2 x_i`.
pub fn rsse_1d(x: &StationaryDistribution) -> f64 {
    shannon_entropy(&x.x)
}

/// Multi-relational structural entropy.
pub fn mrse(
    g: &MultiRelationalGraph,
    tree: &EncodingTree,
    mr: &MultiRankResult,
    mt: &MultiRelTransition,
) -> Result<f64> {
    if mt.node_count() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: mt.node_count(),
        });
    }
    if mt.relation_count() != g.relation_count() {
        return Err(Error::DimensionMismatch {
            expected: g.relation_count(),
            found: mt.relation_count(),
        });
    }
    FlowField::from_multirank(mt, mr)?.evaluate(tree)
}

/// `-sum x'_i log2 x'_i`.
pub fn mrse_1d(mr: &MultiRankResult) -> f64 {
    shannon_entropy(&mr.x)
}

/// `(one_d - min_two_d) / one_d`.
pub fn decoded_fraction(one_d: f64, min_two_d: f64) -> Result<f64> {
    if !(one_d > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "one-dimensional entropy must be positive, got {one_d}"
        )));
    }
    Ok((one_d - min_two_d) / one_d)
}

/// Cached quantities of one height-1 cluster.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClusterTerms {
    /// Occupancy of the cluster.
    pub occupancy: f64,
    /// Mass entering the cluster from outside.
    pub entering: f64,
    /// Sum of the entering mass of the cluster's leaves.
    pub child_entering: f64,
    /// Sum of member leaks.
    pub leak: f64,
    pub size: usize,
}

/// Incrementally maintained terms of a height-2 encoding tree.
///
/// Clusters are addressed by their tree handles; [`EntropyTerms::merge`]
/// applies the merge to both the tree and the caches so the handles stay in
/// step.
#[derive(Debug, Clone)]
pub struct EntropyTerms {
    clusters: Vec<Option<ClusterTerms>>,
    /// Sparse flow between two clusters, both directions summed. An entry
    /// exists exactly when at least one arc joins the clusters.
    links: Vec<BTreeMap<usize, f64>>,
    leaf_entering: Vec<f64>,
    leaf_constant: f64,
    total_occupancy: f64,
    leak_total: f64,
}

impl EntropyTerms {
    pub fn new(field: &FlowField, tree: &EncodingTree) -> Result<Self> {
        let n = field.node_count();
        if tree.node_count() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: tree.node_count(),
            });
        }
        if tree.height() != 2 {
            return Err(Error::InvalidTree("entropy terms need a height-2 tree".into()));
        }
        let leaf_entering = field.leaf_entering();
        let occ = field.occupancy();
        let leaf_constant = -(0..n).map(|v| xlog2(leaf_entering[v], occ[v])).sum::<f64>();

        let slots = tree.clusters().iter().map(|c| c.0 + 1).max().unwrap_or(0);
        let mut clusters: Vec<Option<ClusterTerms>> = vec![None; slots];
        let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); slots];
        let mut owner = vec![0usize; n];
        for c in tree.clusters() {
            let mut t = ClusterTerms::default();
            for v in tree.members(c) {
                owner[v] = c.0;
                t.occupancy += occ[v];
                t.child_entering += leaf_entering[v];
                t.leak += field.leak(v);
                t.size += 1;
            }
            clusters[c.0] = Some(t);
        }
        let mut sparse_in = vec![0.0; slots];
        for i in 0..n {
            for &(j, f) in field.out_flows(i) {
                let (a, b) = (owner[i], owner[j]);
                if a != b {
                    sparse_in[b] += f;
                    *links[a].entry(b).or_default() += f;
                    *links[b].entry(a).or_default() += f;
                }
            }
        }
        let leak_total = field.leak_total;
        for (id, slot) in clusters.iter_mut().enumerate() {
            if let Some(t) = slot {
                t.entering = sparse_in[id] + t.size as f64 * (leak_total - t.leak);
            }
        }
        Ok(Self {
            clusters,
            links,
            leaf_entering,
            leaf_constant,
            total_occupancy: occ.iter().sum(),
            leak_total,
        })
    }

    pub fn cluster(&self, id: TreeNodeId) -> Option<&ClusterTerms> {
        self.clusters.get(id.0).and_then(Option::as_ref)
    }

    fn get(&self, id: TreeNodeId) -> Result<&ClusterTerms> {
        self.cluster(id)
            .ok_or_else(|| Error::InvalidTree(format!("tree node {} is not a live cluster", id.0)))
    }

    /// Entering mass of each graph node as a singleton.
    pub fn leaf_entering(&self) -> &[f64] {
        &self.leaf_entering
    }

    /// Clusters joined to `id` by at least one arc, with their summed sparse flow.
    pub fn neighbors(&self, id: TreeNodeId) -> impl Iterator<Item = (TreeNodeId, f64)> + '_ {
        self.links[id.0].iter().map(|(&k, &f)| (TreeNodeId(k), f))
    }

    pub fn are_linked(&self, a: TreeNodeId, b: TreeNodeId) -> bool {
        self.links.get(a.0).is_some_and(|m| m.contains_key(&b.0))
    }

    fn check_pair(&self, a: TreeNodeId, b: TreeNodeId) -> Result<(&ClusterTerms, &ClusterTerms)> {
        if a == b {
            return Err(Error::InvalidTree("a cluster cannot merge with itself".into()));
        }
        Ok((self.get(a)?, self.get(b)?))
    }

    /// Occupancy and entering mass of the cluster a merge would create.
    pub fn merged_terms(&self, a: TreeNodeId, b: TreeNodeId) -> Result<(f64, f64)> {
        let (ta, tb) = self.check_pair(a, b)?;
        let between = self.links[a.0].get(&b.0).copied().unwrap_or(0.0);
        let entering = ta.entering + tb.entering
            - between
            - tb.size as f64 * ta.leak
            - ta.size as f64 * tb.leak;
        Ok((ta.occupancy + tb.occupancy, entering.max(0.0)))
    }

    /// Exact change of the entropy if `a` and `b` were merged.
    pub fn delta_exact(&self, a: TreeNodeId, b: TreeNodeId) -> Result<f64> {
        let (ta, tb) = self.check_pair(a, b)?;
        let (pn, en) = self.merged_terms(a, b)?;
        let ratio = |p: f64| if p > 0.0 { pn / p } else { 1.0 };
        let mut d = -xlog2(en, pn) + xlog2(ta.entering, ta.occupancy) + xlog2(tb.entering, tb.occupancy)
            + xlog2(ta.child_entering, ratio(ta.occupancy))
            + xlog2(tb.child_entering, ratio(tb.occupancy));
        // cluster terms are relative to the root occupancy, which is 1 up to rounding
        d += xlog2(en - ta.entering - tb.entering, self.total_occupancy);
        Ok(d)
    }

    /// The closed-form merge delta that uses cluster occupancy in place of the
    /// summed entering mass of the cluster's leaves. It equals
    /// [`EntropyTerms::delta_exact`] whenever no mass stays on a node for a
    /// step.
    pub fn delta_paper(&self, a: TreeNodeId, b: TreeNodeId) -> Result<f64> {
        let (ta, tb) = self.check_pair(a, b)?;
        let (pn, en) = self.merged_terms(a, b)?;
        let (pa, pb) = (ta.occupancy, tb.occupancy);
        let rel = |p: f64| if pn > 0.0 { p / pn } else { 0.0 };
        Ok(-xlog2(en, pn) - xlog2(pa, rel(pa)) - xlog2(pb, rel(pb))
            + xlog2(ta.entering, pa)
            + xlog2(tb.entering, pb))
    }

    /// Entropy of the current two-level tree.
    pub fn objective(&self) -> f64 {
        let mut h = self.leaf_constant;
        for t in self.clusters.iter().flatten() {
            h -= xlog2(t.entering, t.occupancy / self.total_occupancy);
            h += xlog2(t.child_entering, t.occupancy);
        }
        h
    }

    /// Merges `a` and `b` in `tree` and in the caches.
    pub fn merge(
        &mut self,
        tree: &mut EncodingTree,
        a: TreeNodeId,
        b: TreeNodeId,
    ) -> Result<TreeNodeId> {
        let (occupancy, entering) = self.merged_terms(a, b)?;
        let merged = tree.merge(a, b)?;
        let ta = self.clusters[a.0].take().expect("checked above");
        let tb = self.clusters[b.0].take().expect("checked above");
        let terms = ClusterTerms {
            occupancy,
            entering,
            child_entering: ta.child_entering + tb.child_entering,
            leak: ta.leak + tb.leak,
            size: ta.size + tb.size,
        };
        let la = std::mem::take(&mut self.links[a.0]);
        let lb = std::mem::take(&mut self.links[b.0]);
        let mut merged_links: BTreeMap<usize, f64> = BTreeMap::new();
        for (k, f) in la.into_iter().chain(lb) {
            if k == a.0 || k == b.0 {
                continue;
            }
            *merged_links.entry(k).or_default() += f;
        }
        for (&k, &f) in &merged_links {
            let l = &mut self.links[k];
            l.remove(&a.0);
            l.remove(&b.0);
            l.insert(merged.0, f);
        }
        if self.clusters.len() <= merged.0 {
            self.clusters.resize(merged.0 + 1, None);
            self.links.resize(merged.0 + 1, BTreeMap::new());
        }
        self.clusters[merged.0] = Some(terms);
        self.links[merged.0] = merged_links;
        Ok(merged)
    }

    pub fn leak_total(&self) -> f64 {
        self.leak_total
    }
}

/// Degree statistics of a height-2 tree: cut weight `g` and volume of each
/// cluster.
#[derive(Debug, Clone)]
pub struct DegreeStats {
    terms: EntropyTerms,
    volume: f64,
}

impl DegreeStats {
    pub fn new(g: &SingleRelationalGraph, tree: &EncodingTree) -> Result<Self> {
        let field = FlowField::from_degrees(g)?;
        Ok(Self {
            terms: EntropyTerms::new(&field, tree)?,
            volume: g.total_weight(),
        })
    }

    /// `vol(V)`.
    pub fn total_volume(&self) -> f64 {
        self.volume
    }

    /// Weight of arcs entering the cluster from outside.
    pub fn cut(&self, id: TreeNodeId) -> Option<f64> {
        self.terms.cluster(id).map(|t| t.entering * self.volume)
    }

    pub fn volume(&self, id: TreeNodeId) -> Option<f64> {
        self.terms.cluster(id).map(|t| t.occupancy * self.volume)
    }

    pub fn terms(&self) -> &EntropyTerms {
        &self.terms
    }

    pub fn merge(
        &mut self,
        tree: &mut EncodingTree,
        a: TreeNodeId,
        b: TreeNodeId,
    ) -> Result<TreeNodeId> {
        self.terms.merge(tree, a, b)
    }
}

/// Exact change of the degree-based entropy if `a` and `b` were merged.
pub fn delta_se(stats: &DegreeStats, a: TreeNodeId, b: TreeNodeId) -> Result<f64> {
    stats.terms.delta_exact(a, b)
}

/// Exact change of the random-surfing entropy under a merge.
pub fn delta_mrse_exact(terms: &EntropyTerms, a: TreeNodeId, b: TreeNodeId) -> Result<f64> {
    terms.delta_exact(a, b)
}

/// Closed-form merge delta with cluster occupancies as leaf coefficients.
pub fn delta_mrse_paper(terms: &EntropyTerms, a: TreeNodeId, b: TreeNodeId) -> Result<f64> {
    terms.delta_paper(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfing::{build_transition, power_method, SurfConfig};
    use crate::tree::Partition;

    fn complete(n: usize) -> SingleRelationalGraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j, 1.0));
            }
        }
        SingleRelationalGraph::undirected(n, e).unwrap()
    }

    #[test]
    fn complete_graph_one_dim_is_two_bits() {
        assert!((se_1d(&complete(4)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn path_one_dim() {
        let g = SingleRelationalGraph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        // -(1/4 log 1/4 + 2/4 log 2/4 + 1/4 log 1/4) = 0.5 + 0.5 + 0.5
        assert!((se_1d(&g).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn complete_graph_two_blocks_by_hand() {
        // each block: cut 4, volume 6 of 12; each leaf: g = 3, vol 3 of block 6
        let g = complete(4);
        let t = EncodingTree::from_partition(&Partition::new(vec![vec![0, 1], vec![2, 3]]).unwrap())
            .unwrap();
        let cluster = -(4.0 / 12.0) * (6.0f64 / 12.0).log2();
        let leaf = -(3.0 / 12.0) * (3.0f64 / 6.0).log2();
        let expected = 2.0 * cluster + 4.0 * leaf;
        assert!((se(&g, &t).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn empty_graph_errors() {
        let g = SingleRelationalGraph::undirected(3, []).unwrap();
        assert!(matches!(se_1d(&g), Err(Error::ZeroVolume)));
    }

    #[test]
    fn shannon_limits() {
        assert!((shannon_entropy(&[0.125; 8]) - 3.0).abs() < 1e-12);
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0]), 0.0);
        let x: [f64; 2] = [0.5 / 1.425, 0.925 / 1.425];
        let expected = -(x[0] * x[0].log2() + x[1] * x[1].log2());
        assert!((shannon_entropy(&x) - expected).abs() < 1e-15);
        assert!((expected - 0.9348).abs() < 1e-3);
    }

    #[test]
    fn decoded_fraction_cases() {
        assert_eq!(decoded_fraction(2.0, 1.0).unwrap(), 0.5);
        assert_eq!(decoded_fraction(1.3, 1.3).unwrap(), 0.0);
        assert!(decoded_fraction(0.0, 0.0).is_err());
    }

    fn symmetric_pair_terms() -> (EncodingTree, EntropyTerms) {
        let g = SingleRelationalGraph::undirected(2, [(0, 1, 1.0)]).unwrap();
        let cfg = SurfConfig::default();
        let tm = build_transition(&g, &cfg).unwrap();
        let x = power_method(&tm, &cfg).unwrap();
        let field = FlowField::from_surfing(&tm, &x).unwrap();
        let tree = EncodingTree::singletons(2).unwrap();
        let terms = EntropyTerms::new(&field, &tree).unwrap();
        (tree, terms)
    }

    #[test]
    fn symmetric_pair_paper_delta() {
        let (tree, terms) = symmetric_pair_terms();
        let c = tree.clusters();
        let t = terms.cluster(c[0]).unwrap();
        assert!((t.entering - 0.4625).abs() < 1e-12);
        assert!((terms.delta_paper(c[0], c[1]).unwrap() - 0.075).abs() < 1e-12);
        assert!(terms.delta_exact(c[0], c[1]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn exact_delta_matches_recompute_on_small_graph() {
        let g = SingleRelationalGraph::undirected(
            5,
            [(0, 1, 1.0), (1, 2, 2.0), (2, 0, 1.0), (2, 3, 0.5), (3, 4, 1.0), (4, 2, 1.0)],
        )
        .unwrap();
        let cfg = SurfConfig::default();
        let tm = build_transition(&g, &cfg).unwrap();
        let x = power_method(&tm, &cfg).unwrap();
        let field = FlowField::from_surfing(&tm, &x).unwrap();
        let mut tree = EncodingTree::singletons(5).unwrap();
        let mut terms = EntropyTerms::new(&field, &tree).unwrap();
        assert!((terms.objective() - field.evaluate(&tree).unwrap()).abs() < 1e-12);
        let c = tree.clusters();
        let m = terms.merge(&mut tree, c[0], c[1]).unwrap();
        let before = field.evaluate(&tree).unwrap();
        let d = terms.delta_exact(m, c[2]).unwrap();
        terms.merge(&mut tree, m, c[2]).unwrap();
        let after = field.evaluate(&tree).unwrap();
        assert!((after - before - d).abs() < 1e-12);
        assert!((terms.objective() - after).abs() < 1e-12);
    }

    #[test]
    fn identical_pair_rejected() {
        let (tree, terms) = symmetric_pair_terms();
        let c = tree.clusters();
        assert!(terms.delta_exact(c[0], c[0]).is_err());
        assert!(terms.delta_paper(c[0], tree.root()).is_err());
    }

    #[test]
    fn degree_stats_report_cut_and_volume() {
        let g = complete(4);
        let t = EncodingTree::from_partition(&Partition::new(vec![vec![0, 1], vec![2, 3]]).unwrap())
            .unwrap();
        let stats = DegreeStats::new(&g, &t).unwrap();
        for c in t.clusters() {
            assert!((stats.cut(c).unwrap() - 4.0).abs() < 1e-12);
            assert!((stats.volume(c).unwrap() - 6.0).abs() < 1e-12);
        }
        assert_eq!(stats.total_volume(), 12.0);
    }

    #[test]
    fn two_disjoint_triangles_merge_by_hand() {
        // merging the two components: both have cut 0 and volume 6 of 12, so
        // the cluster terms vanish and each leaf coefficient g_v/vol = 2/12
        // sees its log ratio drop from log(2/6) to log(2/12): delta = 6 * (2/12) * 1 = 1
        let g = SingleRelationalGraph::undirected(
            6,
            [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 3, 1.0)],
        )
        .unwrap();
        let t = EncodingTree::from_partition(
            &Partition::new(vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap(),
        )
        .unwrap();
        let stats = DegreeStats::new(&g, &t).unwrap();
        let c = t.clusters();
        assert!((delta_se(&stats, c[0], c[1]).unwrap() - 1.0).abs() < 1e-12);
        assert!(delta_se(&stats, c[0], c[0]).is_err());
    }
}
