//! Dense reference implementations used as test oracles.
//!
//! Everything here works on explicit |V|x|V| (x|R|) matrices and follows the
//! textbook definitions directly: stationary vectors come from Gaussian
//! elimination instead of power iteration, and entropies are summed over the
//! tree node by node.
#![allow(dead_code)]

use mrse_kit::graph::{MultiRelationalGraph, SingleRelationalGraph};
use mrse_kit::tree::{EncodingTree, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a[r][j][i]` = weight of the arc i -> j under relation r.
pub fn dense_tensor(g: &MultiRelationalGraph) -> Vec<Vec<Vec<f64>>> {
    let n = g.node_count();
    let mut a = vec![vec![vec![0.0; n]; n]; g.relation_count()];
    for arc in g.arcs() {
        a[arc.relation][arc.target][arc.source] += arc.weight;
    }
    a
}

pub fn dense_matrix(g: &SingleRelationalGraph) -> Vec<Vec<f64>> {
    dense_tensor(&g.to_multi()).remove(0)
}

/// Column-stochastic matrix with empty columns replaced by 1/n, then mixed
/// with uniform teleportation.
pub fn adjusted_transition(a: &[Vec<f64>], c: f64) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut b = vec![vec![0.0; n]; n];
    for i in 0..n {
        let col: f64 = (0..n).map(|j| a[j][i]).sum();
        for j in 0..n {
            let p = if col > 0.0 { a[j][i] / col } else { 1.0 / n as f64 };
            b[j][i] = c * p + (1.0 - c) / n as f64;
        }
    }
    b
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - s) / m[row][row];
    }
    x
}

/// Stationary vector of a column-stochastic irreducible matrix.
pub fn stationary(b: &[Vec<f64>]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| b[j][i] - if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    m[n - 1] = vec![1.0; n];
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;
    solve(m, rhs)
}

/// Node-choice tensor `v[r][j][i]` after the stochasticity and teleport
/// adjustments, and relation-choice tensor `q[r][j][i]`.
pub fn multirel_tensors(a: &[Vec<Vec<f64>>], c: f64) -> (Vec<Vec<Vec<f64>>>, Vec<Vec<Vec<f64>>>) {
    let k = a.len();
    let n = a[0].len();
    let v: Vec<Vec<Vec<f64>>> = a.iter().map(|slice| adjusted_transition(slice, c)).collect();
    let mut q = vec![vec![vec![0.0; n]; n]; k];
    for j in 0..n {
        for i in 0..n {
            let total: f64 = (0..k).map(|r| a[r][j][i]).sum();
            for r in 0..k {
                q[r][j][i] = if total > 0.0 { a[r][j][i] / total } else { 1.0 / k as f64 };
            }
        }
    }
    (v, q)
}

/// Effective node transition `sum_r y_r v[r]`.
pub fn mix(v: &[Vec<Vec<f64>>], y: &[f64]) -> Vec<Vec<f64>> {
    let n = v[0].len();
    let mut b = vec![vec![0.0; n]; n];
    for (r, slice) in v.iter().enumerate() {
        for j in 0..n {
            for i in 0..n {
                b[j][i] += y[r] * slice[j][i];
            }
        }
    }
    b
}

/// Fixed point of x = stat(sum_r y_r V_r), y_r = sum_ij Q[r][i][j] x_j x_i,
/// solved by alternating an exact linear solve for x with the y update.
pub fn multirank_dense(a: &[Vec<Vec<f64>>], c: f64) -> (Vec<f64>, Vec<f64>) {
    let k = a.len();
    let n = a[0].len();
    let (v, q) = multirel_tensors(a, c);
    let mut y = vec![1.0 / k as f64; k];
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..10_000 {
        let x_new = stationary(&mix(&v, &y));
        let mut y_new = vec![0.0; k];
        for r in 0..k {
            for i in 0..n {
                for j in 0..n {
                    y_new[r] += q[r][i][j] * x_new[j] * x_new[i];
                }
            }
        }
        let s: f64 = y_new.iter().sum();
        y_new.iter_mut().for_each(|t| *t /= s);
        let change: f64 = x_new.iter().zip(&x).map(|(p, q)| (p - q).abs()).sum::<f64>()
            + y_new.iter().zip(&y).map(|(p, q)| (p - q).abs()).sum::<f64>();
        x = x_new;
        y = y_new;
        if change < 1e-15 {
            break;
        }
    }
    (x, y)
}

/// `-sum_{alpha != root} p_enter(alpha) log2(p_alpha / p_parent)` with
/// `p_enter(alpha) = sum_{i outside} x_i sum_{j inside} b[j][i]`.
pub fn surfing_entropy(b: &[Vec<f64>], x: &[f64], tree: &EncodingTree) -> f64 {
    let n = x.len();
    let mut h = 0.0;
    for alpha in tree.non_root().collect::<Vec<_>>() {
        let members = tree.members(alpha);
        let mut inside = vec![false; n];
        for &v in &members {
            inside[v] = true;
        }
        let parent = tree.parent(alpha).unwrap();
        let p_alpha: f64 = members.iter().map(|&v| x[v]).sum();
        let p_parent: f64 = tree.members(parent).iter().map(|&v| x[v]).sum();
        let mut enter = 0.0;
        for i in (0..n).filter(|&i| !inside[i]) {
            for &j in &members {
                enter += x[i] * b[j][i];
            }
        }
        if enter > 0.0 {
            h -= enter * (p_alpha / p_parent).log2();
        }
    }
    h
}

/// Degree form on an undirected weighted graph: cut weight over volume
/// times log2 of the volume ratio.
pub fn degree_entropy(a: &[Vec<f64>], tree: &EncodingTree) -> f64 {
    let n = a.len();
    let degree: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[j][i]).sum()).collect();
    let vol: f64 = degree.iter().sum();
    let mut h = 0.0;
    for alpha in tree.non_root().collect::<Vec<_>>() {
        let members = tree.members(alpha);
        let mut inside = vec![false; n];
        for &v in &members {
            inside[v] = true;
        }
        let parent = tree.parent(alpha).unwrap();
        let v_alpha: f64 = members.iter().map(|&v| degree[v]).sum();
        let v_parent: f64 = tree.members(parent).iter().map(|&v| degree[v]).sum();
        let mut cut = 0.0;
        for i in (0..n).filter(|&i| !inside[i]) {
            for &j in &members {
                cut += a[j][i];
            }
        }
        if cut > 0.0 {
            h -= cut / vol * (v_alpha / v_parent).log2();
        }
    }
    h
}

pub fn shannon(x: &[f64]) -> f64 {
    x.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// Calls `f` with every set partition of `0..n` as an assignment vector.
pub fn for_each_partition(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(a: &mut Vec<usize>, i: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
        if i == a.len() {
            f(a);
            return;
        }
        for c in 0..=max + 1 {
            a[i] = c;
            rec(a, i + 1, max.max(c), f);
        }
    }
    if n == 0 {
        return;
    }
    let mut a = vec![0; n];
    rec(&mut a, 1, 0, f);
}

pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Partition {
    let k = rng.gen_range(1..=n);
    let assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_assignment(&assignment)
}

/// Random tree of height up to 3 built from nested random partitions.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> EncodingTree {
    let fine = random_partition(rng, n);
    if rng.gen_bool(0.5) || fine.len() < 2 {
        return EncodingTree::from_partition(&fine).unwrap();
    }
    let coarse = random_partition(rng, fine.len());
    let lifted = fine.lift(&coarse).unwrap();
    EncodingTree::from_hierarchy(n, &[fine, lifted]).unwrap()
}

/// Connected undirected weighted graph containing a triangle (so the plain
/// random walk is aperiodic).
pub fn random_connected_undirected(rng: &mut ChaCha8Rng, n: usize) -> SingleRelationalGraph {
    let mut edges = vec![(0, 1, rng.gen_range(0.5..2.0)), (1, 2, rng.gen_range(0.5..2.0)), (0, 2, rng.gen_range(0.5..2.0))];
    for v in 3..n {
        edges.push((rng.gen_range(0..v), v, rng.gen_range(0.5..2.0)));
    }
    for _ in 0..rng.gen_range(0..2 * n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push((a, b, rng.gen_range(0.1..3.0)));
        }
    }
    SingleRelationalGraph::undirected(n, edges).unwrap()
}

/// Directed weighted graph with arbitrary structure (dangling nodes and
/// self-loops allowed).
pub fn random_directed(rng: &mut ChaCha8Rng, n: usize) -> SingleRelationalGraph {
    let m = rng.gen_range(1..3 * n);
    let arcs: Vec<_> = (0..m)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0.1..3.0)))
        .collect();
    SingleRelationalGraph::directed(n, arcs).unwrap()
}

/// Random multi-relational graph; some relations may be sparse.
pub fn random_multi(rng: &mut ChaCha8Rng, n: usize, k: usize) -> MultiRelationalGraph {
    let m = rng.gen_range(k..3 * n * k);
    let mut arcs: Vec<_> = (0..m)
        .map(|_| {
            (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..k),
                rng.gen_range(0.1..3.0),
            )
        })
        .collect();
    for r in 0..k {
        arcs.push((rng.gen_range(0..n), rng.gen_range(0..n), r, 1.0));
    }
    MultiRelationalGraph::new(n, k, arcs, rng.gen_bool(0.5)).unwrap()
}

/// Multi-relational graph whose every relation contains an odd cycle through
/// all nodes and no self-loops: with teleport 1 every node has exactly zero
/// self-transition probability.
pub fn loopless_multi(rng: &mut ChaCha8Rng, n: usize, k: usize) -> MultiRelationalGraph {
    assert!(n % 2 == 1 && n >= 3);
    let mut arcs = Vec::new();
    for r in 0..k {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        for i in 0..n {
            arcs.push((order[i], order[(i + 1) % n], r, rng.gen_range(0.5..2.0)));
        }
        for _ in 0..n {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                arcs.push((a, b, r, rng.gen_range(0.1..2.0)));
            }
        }
    }
    MultiRelationalGraph::new(n, k, arcs, false).unwrap()
}

/// Two m-cliques joined by one unit edge between node m-1 and node m.
pub fn bridged_cliques(m: usize, bridge: f64) -> SingleRelationalGraph {
    let mut e = Vec::new();
    for base in [0, m] {
        for i in 0..m {
            for j in i + 1..m {
                e.push((base + i, base + j, 1.0));
            }
        }
    }
    e.push((m - 1, m, bridge));
    SingleRelationalGraph::undirected(2 * m, e).unwrap()
}

/// Exact two-level minimum over all partitions, for a flow given by the
/// effective transition `b` and occupancy `x`. Returns (value, partition).
pub fn exhaustive_minimum(b: &[Vec<f64>], x: &[f64]) -> (f64, Partition) {
    let n = x.len();
    let self_leave: Vec<f64> = (0..n).map(|i| x[i] * (1.0 - b[i][i])).collect();
    let mut best = (f64::INFINITY, Vec::new());
    let mut p_alpha = vec![0.0; n];
    let mut inflow = vec![0.0; n];
    for_each_partition(n, &mut |assign| {
        p_alpha.iter_mut().for_each(|v| *v = 0.0);
        inflow.iter_mut().for_each(|v| *v = 0.0);
        for v in 0..n {
            p_alpha[assign[v]] += x[v];
        }
        for i in 0..n {
            for j in 0..n {
                if assign[i] != assign[j] {
                    inflow[assign[j]] += x[i] * b[j][i];
                }
            }
        }
        let mut h = 0.0;
        for c in 0..n {
            if p_alpha[c] > 0.0 && inflow[c] > 0.0 {
                h -= inflow[c] * p_alpha[c].log2();
            }
        }
        for v in 0..n {
            if self_leave[v] > 0.0 {
                h -= self_leave[v] * (x[v] / p_alpha[assign[v]]).log2();
            }
        }
        if h < best.0 - 1e-12 {
            best = (h, assign.to_vec());
        }
    });
    (best.0, Partition::from_assignment(&best.1))
}
