//! Random surfing on single- and multi-relational graphs.
//!
//! Transition structures keep only the sparse, column-normalized part of the
//! adjacency. The two adjustments are applied analytically whenever a vector
//! is multiplied:
//!
//! * stochasticity: a source with no outgoing weight (a dangling column, or a
//!   dangling `(source, relation)` fiber) spreads its mass uniformly over all
//!   nodes;
//! * primitivity: the surfer follows the graph with probability `c` and
//!   teleports to a uniformly random node with probability `1 - c`.
//!
//! The effective one-step transition out of a source `i` is therefore a
//! sparse column plus a constant "leak" added to every destination. The
//! entropy module consumes exactly that decomposition.

use crate::error::{Error, Result};
use crate::graph::{MultiRelationalGraph, SingleRelationalGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfConfig {
    /// Probability of following an arc rather than teleporting.
    pub teleport: f64,
    /// L1 tolerance on the fixed-point residual.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SurfConfig {
    fn default() -> Self {
        Self {
            teleport: 0.85,
            tolerance: 1e-10,
            max_iterations: 10_000,
        }
    }
}

impl SurfConfig {
    pub fn with_teleport(teleport: f64) -> Self {
        Self {
            teleport,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.teleport > 0.0 && self.teleport <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "teleport constant must lie in (0, 1], got {}",
                self.teleport
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

/// Column-stochastic transition of a single-relational graph.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    teleport: f64,
    /// Normalized out-arcs `(target, probability)` per source.
    columns: Vec<Vec<(usize, f64)>>,
    dangling: Vec<bool>,
}

impl TransitionMatrix {
    pub fn node_count(&self) -> usize {
        self.columns.len()
    }

    pub fn teleport(&self) -> f64 {
        self.teleport
    }

    /// Sparse part of column `i` before teleport (empty when dangling).
    pub fn column(&self, i: usize) -> &[(usize, f64)] {
        &self.columns[i]
    }

    pub fn is_dangling(&self, i: usize) -> bool {
        self.dangling[i]
    }

    pub fn dangling_count(&self) -> usize {
        self.dangling.iter().filter(|&&d| d).count()
    }

    /// Probability added to every destination when leaving `i`.
    pub fn leak(&self, i: usize) -> f64 {
        let n = self.node_count() as f64;
        let c = self.teleport;
        let d = if self.dangling[i] { c } else { 0.0 };
        (d + 1.0 - c) / n
    }

    /// Adjusted entry `B[j][i]`, the probability of stepping from `i` to `j`.
    pub fn entry(&self, j: usize, i: usize) -> f64 {
        let sparse: f64 = self.columns[i]
            .iter()
            .filter(|(t, _)| *t == j)
            .map(|(_, p)| p)
            .sum();
        self.teleport * sparse + self.leak(i)
    }

    /// `B x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.node_count();
        let c = self.teleport;
        let mut out = vec![0.0; n];
        let mut spread = 0.0;
        for (i, col) in self.columns.iter().enumerate() {
            let xi = x[i];
            if self.dangling[i] {
                spread += c * xi;
            }
            for &(j, p) in col {
                out[j] += c * p * xi;
            }
        }
        spread += (1.0 - c) * x.iter().sum::<f64>();
        let u = spread / n as f64;
        out.iter_mut().for_each(|v| *v += u);
        out
    }

    /// `|B x - x|_1`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        l1_distance(&self.apply(x), x)
    }
}

/// Column-normalizes the adjacency of `g`, recording dangling columns.
pub fn build_transition(g: &SingleRelationalGraph, cfg: &SurfConfig) -> Result<TransitionMatrix> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for a in g.arcs() {
        columns[a.source].push((a.target, a.weight));
    }
    let mut dangling = vec![false; n];
    for (i, col) in columns.iter_mut().enumerate() {
        let total: f64 = col.iter().map(|(_, w)| w).sum();
        if total > 0.0 {
            col.iter_mut().for_each(|(_, w)| *w /= total);
        } else {
            col.clear();
            dangling[i] = true;
        }
    }
    Ok(TransitionMatrix {
        teleport: cfg.teleport,
        columns,
        dangling,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `|B x - x|_1` of the returned vector.
    pub residual: f64,
}

/// Power iteration from the uniform vector.
pub fn power_method(t: &TransitionMatrix, cfg: &SurfConfig) -> Result<StationaryDistribution> {
    cfg.validate()?;
    let n = t.node_count();
    let mut x = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for iterations in 0..=cfg.max_iterations {
        let mut next = t.apply(&x);
        residual = l1_distance(&next, &x);
        if residual <= cfg.tolerance {
            return Ok(StationaryDistribution {
                x,
                iterations,
                residual,
            });
        }
        normalize(&mut next);
        x = next;
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iterations,
        residual,
    })
}

#[derive(Debug, Clone)]
struct RelationSlice {
    columns: Vec<Vec<(usize, f64)>>,
    dangling: Vec<bool>,
}

/// Relation choice distribution for one ordered pair that has arcs.
#[derive(Debug, Clone)]
struct PairFiber {
    source: usize,
    target: usize,
    probs: Vec<(usize, f64)>,
}

/// Node and relation transition tensors of multi-relational surfing.
#[derive(Debug, Clone)]
pub struct MultiRelTransition {
    node_count: usize,
    teleport: f64,
    slices: Vec<RelationSlice>,
    pairs: Vec<PairFiber>,
}

impl MultiRelTransition {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn relation_count(&self) -> usize {
        self.slices.len()
    }

    pub fn teleport(&self) -> f64 {
        self.teleport
    }

    /// Sparse part of fiber `(source i, relation r)` before teleport.
    pub fn column(&self, i: usize, r: usize) -> &[(usize, f64)] {
        &self.slices[r].columns[i]
    }

    pub fn is_dangling(&self, i: usize, r: usize) -> bool {
        self.slices[r].dangling[i]
    }

    /// Adjusted node transition: probability of stepping `i -> j` given relation `r`.
    pub fn node_entry(&self, j: usize, i: usize, r: usize) -> f64 {
        let n = self.node_count as f64;
        let c = self.teleport;
        let slice = &self.slices[r];
        let inner = if slice.dangling[i] {
            1.0 / n
        } else {
            slice.columns[i]
                .iter()
                .filter(|(t, _)| *t == j)
                .map(|(_, p)| p)
                .sum()
        };
        c * inner + (1.0 - c) / n
    }

    /// Adjusted relation transition for the arc `i -> j` under relation `r`.
    pub fn relation_entry(&self, j: usize, i: usize, r: usize) -> f64 {
        match self
            .pairs
            .binary_search_by(|p| (p.target, p.source).cmp(&(j, i)))
        {
            Ok(k) => self.pairs[k]
                .probs
                .iter()
                .find(|(rr, _)| *rr == r)
                .map_or(0.0, |(_, p)| *p),
            Err(_) => 1.0 / self.relation_count() as f64,
        }
    }

    /// One node update: `x_i <- sum_r sum_j V[i][j][r] x_j y_r`.
    pub fn apply_nodes(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.node_count;
        let c = self.teleport;
        let mut out = vec![0.0; n];
        let mut spread = 0.0;
        let total_x: f64 = x.iter().sum();
        for (slice, &yr) in self.slices.iter().zip(y) {
            for (j, col) in slice.columns.iter().enumerate() {
                let w = c * yr * x[j];
                if slice.dangling[j] {
                    spread += w;
                }
                for &(i, p) in col {
                    out[i] += w * p;
                }
            }
            spread += (1.0 - c) * yr * total_x;
        }
        let u = spread / n as f64;
        out.iter_mut().for_each(|v| *v += u);
        out
    }

    /// One relation update: `y_r <- sum_i sum_j R[i][j][r] x_j x_i`.
    pub fn apply_relations(&self, x: &[f64]) -> Vec<f64> {
        let k = self.relation_count();
        let mut out = vec![0.0; k];
        let total_x: f64 = x.iter().sum();
        let mut covered = 0.0;
        for pair in &self.pairs {
            let w = x[pair.source] * x[pair.target];
            covered += w;
            for &(r, p) in &pair.probs {
                out[r] += w * p;
            }
        }
        let rest = (total_x * total_x - covered) / k as f64;
        out.iter_mut().for_each(|v| *v += rest);
        out
    }

    /// Effective single-step transition after averaging relations with `y`:
    /// sparse columns `(target, probability)` per source plus the per-source
    /// uniform leak.
    pub fn effective_columns(&self, y: &[f64]) -> (Vec<Vec<(usize, f64)>>, Vec<f64>) {
        let n = self.node_count;
        let c = self.teleport;
        let total_y: f64 = y.iter().sum();
        let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut leak = vec![(1.0 - c) * total_y / n as f64; n];
        for (slice, &yr) in self.slices.iter().zip(y) {
            for (i, col) in slice.columns.iter().enumerate() {
                if slice.dangling[i] {
                    leak[i] += c * yr / n as f64;
                }
                columns[i].extend(col.iter().map(|&(j, p)| (j, c * yr * p)));
            }
        }
        for col in &mut columns {
            col.sort_by_key(|&(j, _)| j);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(col.len());
            for &(j, p) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += p,
                    _ => merged.push((j, p)),
                }
            }
            *col = merged;
        }
        (columns, leak)
    }
}

/// Normalizes each `(source, relation)` fiber over destinations and each
/// connected `(source, target)` pair over relations.
pub fn build_multirel_transitions(
    g: &MultiRelationalGraph,
    cfg: &SurfConfig,
) -> Result<MultiRelTransition> {
    cfg.validate()?;
    let n = g.node_count();
    let k = g.relation_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if k == 0 {
        return Err(Error::InvalidConfig("graph has no relations".into()));
    }
    let slices = (0..k)
        .map(|r| {
            let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
            for a in g.relation_arcs(r) {
                columns[a.source].push((a.target, a.weight));
            }
            let mut dangling = vec![false; n];
            for (i, col) in columns.iter_mut().enumerate() {
                let total: f64 = col.iter().map(|(_, w)| w).sum();
                if total > 0.0 {
                    col.iter_mut().for_each(|(_, w)| *w /= total);
                } else {
                    col.clear();
                    dangling[i] = true;
                }
            }
            RelationSlice { columns, dangling }
        })
        .collect();

    let mut by_pair: Vec<(usize, usize, usize, f64)> = g
        .arcs()
        .iter()
        .map(|a| (a.target, a.source, a.relation, a.weight))
        .collect();
    by_pair.sort_by_key(|a| (a.0, a.1, a.2));
    let mut pairs: Vec<PairFiber> = Vec::new();
    for (target, source, r, w) in by_pair {
        match pairs.last_mut() {
            Some(p) if p.target == target && p.source == source => p.probs.push((r, w)),
            _ => pairs.push(PairFiber {
                source,
                target,
                probs: vec![(r, w)],
            }),
        }
    }
    for p in &mut pairs {
        let total: f64 = p.probs.iter().map(|(_, w)| w).sum();
        p.probs.iter_mut().for_each(|(_, w)| *w /= total);
    }
    Ok(MultiRelTransition {
        node_count: n,
        teleport: cfg.teleport,
        slices,
        pairs,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiRankResult {
    /// Node stationary distribution.
    pub x: Vec<f64>,
    /// Relation stationary distribution.
    pub y: Vec<f64>,
    pub iterations: usize,
    pub residual_x: f64,
    pub residual_y: f64,
}

/// Alternating fixed-point iteration from uniform starts: nodes first, then
/// relations, until both L1 residuals are within tolerance.
pub fn multirank(t: &MultiRelTransition, cfg: &SurfConfig) -> Result<MultiRankResult> {
    cfg.validate()?;
    let n = t.node_count();
    let k = t.relation_count();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![1.0 / k as f64; k];
    let mut residual = f64::INFINITY;
    for iterations in 0..=cfg.max_iterations {
        let mut next_x = t.apply_nodes(&x, &y);
        let residual_x = l1_distance(&next_x, &x);
        let residual_y = l1_distance(&t.apply_relations(&x), &y);
        residual = residual_x.max(residual_y);
        if residual_x <= cfg.tolerance && residual_y <= cfg.tolerance {
            return Ok(MultiRankResult {
                x,
                y,
                iterations,
                residual_x,
                residual_y,
            });
        }
        normalize(&mut next_x);
        x = next_x;
        y = t.apply_relations(&x);
        normalize(&mut y);
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn single_edge_transition() {
        let g = SingleRelationalGraph::undirected(2, [(0, 1, 1.0)]).unwrap();
        let t = build_transition(&g, &SurfConfig::with_teleport(1.0)).unwrap();
        assert_eq!(t.column(0), &[(1, 1.0)]);
        assert_eq!(t.column(1), &[(0, 1.0)]);
        assert_eq!(t.entry(0, 0), 0.0);
    }

    #[test]
    fn dangling_column_becomes_uniform() {
        let g = SingleRelationalGraph::directed(2, [(0, 1, 1.0)]).unwrap();
        let t = build_transition(&g, &SurfConfig::with_teleport(1.0)).unwrap();
        assert!(t.is_dangling(1));
        assert_eq!(t.entry(0, 1), 0.5);
        assert_eq!(t.entry(1, 1), 0.5);
    }

    #[test]
    fn weighted_column_normalizes() {
        let g = SingleRelationalGraph::directed(3, [(0, 1, 1.0), (0, 2, 3.0)]).unwrap();
        let t = build_transition(&g, &SurfConfig::with_teleport(1.0)).unwrap();
        assert_eq!(t.column(0), &[(1, 0.25), (2, 0.75)]);
    }

    #[test]
    fn columns_sum_to_one() {
        let g = SingleRelationalGraph::directed(4, [(0, 1, 1.0), (0, 2, 3.0), (2, 0, 1.0)])
            .unwrap();
        let t = build_transition(&g, &SurfConfig::default()).unwrap();
        for i in 0..4 {
            let s: f64 = (0..4).map(|j| t.entry(j, i)).sum();
            assert!(approx(s, 1.0, 1e-12));
        }
    }

    #[test]
    fn regular_graph_is_uniform() {
        // 4-cycle
        let g = SingleRelationalGraph::undirected(
            4,
            [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)],
        )
        .unwrap();
        for c in [0.5, 0.85, 0.99] {
            let t = build_transition(&g, &SurfConfig::with_teleport(c)).unwrap();
            let x = power_method(&t, &SurfConfig::with_teleport(c)).unwrap();
            assert!(x.x.iter().all(|&v| approx(v, 0.25, 1e-12)));
        }
    }

    #[test]
    fn single_arc_two_nodes() {
        // x = B x with B = [[.075, .5], [.925, .5]] solved densely:
        // x0 = .075 x0 + .5 x1, x0 + x1 = 1  =>  x0 = .5 / 1.425
        let expected0 = 0.5 / 1.425;
        let g = SingleRelationalGraph::directed(2, [(0, 1, 1.0)]).unwrap();
        let cfg = SurfConfig::default();
        let x = power_method(&build_transition(&g, &cfg).unwrap(), &cfg).unwrap();
        assert!(approx(x.x[0], expected0, 1e-9));
        assert!(approx(x.x[0], 0.3509, 1e-4));
        assert!(approx(x.x[1], 0.6491, 1e-4));
        assert!(x.residual <= cfg.tolerance);
    }

    #[test]
    fn directed_cycle_is_uniform() {
        let g = SingleRelationalGraph::directed(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
            .unwrap();
        let cfg = SurfConfig::default();
        let x = power_method(&build_transition(&g, &cfg).unwrap(), &cfg).unwrap();
        assert!(x.x.iter().all(|&v| approx(v, 1.0 / 3.0, 1e-12)));
    }

    #[test]
    fn non_convergence_reported() {
        // periodic chain with no teleport never settles from a non-uniform start;
        // the uniform start is stationary, so use a weighted 2-cycle plus a tail
        let g = SingleRelationalGraph::directed(3, [(0, 1, 1.0), (1, 0, 1.0), (2, 0, 1.0)])
            .unwrap();
        let cfg = SurfConfig {
            teleport: 1.0,
            tolerance: 1e-12,
            max_iterations: 50,
        };
        let err = power_method(&build_transition(&g, &cfg).unwrap(), &cfg).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 50, .. }));
    }

    #[test]
    fn invalid_teleport_rejected() {
        let g = SingleRelationalGraph::directed(2, [(0, 1, 1.0)]).unwrap();
        assert!(build_transition(&g, &SurfConfig::with_teleport(0.0)).is_err());
        assert!(build_transition(&g, &SurfConfig::with_teleport(1.5)).is_err());
    }

    #[test]
    fn all_ones_tensor_is_uniform() {
        let mut arcs = Vec::new();
        for r in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    arcs.push((i, j, r, 1.0));
                }
            }
        }
        let g = MultiRelationalGraph::new(3, 2, arcs, true).unwrap();
        let cfg = SurfConfig::default();
        let t = build_multirel_transitions(&g, &cfg).unwrap();
        for r in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    assert!(approx(t.node_entry(j, i, r), 1.0 / 3.0, 1e-12));
                    assert!(approx(t.relation_entry(j, i, r), 0.5, 1e-12));
                }
            }
        }
        let mr = multirank(&t, &cfg).unwrap();
        assert!(mr.x.iter().all(|&v| approx(v, 1.0 / 3.0, 1e-12)));
        assert!(mr.y.iter().all(|&v| approx(v, 0.5, 1e-12)));
    }

    #[test]
    fn unconnected_pair_has_uniform_relation_fiber() {
        let g = MultiRelationalGraph::new(3, 3, [(0, 1, 0, 1.0)], true).unwrap();
        let t = build_multirel_transitions(&g, &SurfConfig::default()).unwrap();
        for r in 0..3 {
            assert!(approx(t.relation_entry(2, 0, r), 1.0 / 3.0, 1e-15));
        }
        assert_eq!(t.relation_entry(1, 0, 0), 1.0);
        assert_eq!(t.relation_entry(1, 0, 1), 0.0);
    }

    #[test]
    fn fibers_are_stochastic() {
        let g = MultiRelationalGraph::new(
            4,
            2,
            [(0, 1, 0, 1.0), (0, 2, 0, 2.0), (1, 2, 1, 1.0), (3, 3, 1, 1.0)],
            true,
        )
        .unwrap();
        let t = build_multirel_transitions(&g, &SurfConfig::default()).unwrap();
        for i in 0..4 {
            for r in 0..2 {
                let s: f64 = (0..4).map(|j| t.node_entry(j, i, r)).sum();
                assert!(approx(s, 1.0, 1e-12));
            }
            for j in 0..4 {
                let s: f64 = (0..2).map(|r| t.relation_entry(j, i, r)).sum();
                assert!(approx(s, 1.0, 1e-12));
            }
        }
    }

    #[test]
    fn effective_columns_match_relation_average() {
        let g = MultiRelationalGraph::new(
            3,
            2,
            [(0, 1, 0, 1.0), (0, 2, 0, 1.0), (1, 2, 1, 1.0), (2, 0, 1, 1.0)],
            true,
        )
        .unwrap();
        let t = build_multirel_transitions(&g, &SurfConfig::default()).unwrap();
        let y = [0.3, 0.7];
        let (cols, leak) = t.effective_columns(&y);
        for i in 0..3 {
            for j in 0..3 {
                let expected: f64 = (0..2).map(|r| t.node_entry(j, i, r) * y[r]).sum();
                let sparse: f64 = cols[i].iter().filter(|(t, _)| *t == j).map(|(_, p)| p).sum();
                assert!(approx(sparse + leak[i], expected, 1e-12));
            }
        }
    }
}
