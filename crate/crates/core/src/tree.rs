//! Encoding trees and the partitions read off their height-1 layer.
//!
//! A tree is stored as an arena. Handles ([`TreeNodeId`]) stay valid for the
//! lifetime of the tree; nodes removed by [`EncodingTree::merge`] are marked
//! dead rather than reused, so handles held by a caller never alias a newer
//! node.

use crate::error::{Error, Result};

/// A partition of graph nodes into communities.
///
/// Canonical form: members sorted ascending inside each community and
/// communities ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    communities: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates that communities are non-empty and pairwise disjoint.
    pub fn new(communities: Vec<Vec<usize>>) -> Result<Self> {
        let mut communities: Vec<Vec<usize>> = communities
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        if communities.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("empty community".into()));
        }
        let mut all: Vec<usize> = communities.iter().flatten().copied().collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition(format!(
                "node {} appears in more than one community",
                w[0]
            )));
        }
        for c in &communities {
            if let Some(w) = c.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidPartition(format!("node {} repeated", w[0])));
            }
        }
        communities.sort_by_key(|c| c[0]);
        Ok(Self { communities })
    }

    pub fn singletons(node_count: usize) -> Self {
        Self {
            communities: (0..node_count).map(|v| vec![v]).collect(),
        }
    }

    pub fn whole(node_count: usize) -> Self {
        Self {
            communities: vec![(0..node_count).collect()],
        }
    }

    /// Groups nodes by an arbitrary community label per node.
    pub fn from_assignment(assignment: &[usize]) -> Self {
        let mut by_label: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (v, &c) in assignment.iter().enumerate() {
            by_label.entry(c).or_default().push(v);
        }
        let mut communities: Vec<Vec<usize>> = by_label.into_values().collect();
        communities.sort_by_key(|c| c[0]);
        Self { communities }
    }

    pub fn communities(&self) -> &[Vec<usize>] {
        &self.communities
    }

    /// Number of communities.
    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    /// Number of nodes covered.
    pub fn node_count(&self) -> usize {
        self.communities.iter().map(Vec::len).sum()
    }

    /// Errors unless the communities cover exactly `0..node_count`.
    pub fn check_cover(&self, node_count: usize) -> Result<()> {
        let mut seen = vec![false; node_count];
        for &v in self.communities.iter().flatten() {
            if v >= node_count {
                return Err(Error::InvalidPartition(format!(
                    "node {v} outside 0..{node_count}"
                )));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("node {v} not covered")));
        }
        Ok(())
    }

    /// Community index of each node. Requires a cover of `0..node_count()`.
    pub fn assignment(&self) -> Vec<usize> {
        let mut a = vec![usize::MAX; self.node_count()];
        for (c, members) in self.communities.iter().enumerate() {
            for &v in members {
                a[v] = c;
            }
        }
        a
    }

    /// Maps a partition of consolidated nodes back onto the original nodes,
    /// where consolidated node `i` stands for `self.communities()[i]`.
    pub fn lift(&self, coarse: &Partition) -> Result<Partition> {
        coarse.check_cover(self.len())?;
        Partition::new(
            coarse
                .communities
                .iter()
                .map(|c| {
                    c.iter()
                        .flat_map(|&i| self.communities[i].iter().copied())
                        .collect()
                })
                .collect(),
        )
    }
}

/// Stable handle of an encoding-tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeNodeId(pub usize);

#[derive(Debug, Clone)]
struct TreeNode {
    parent: Option<usize>,
    children: Vec<usize>,
    height: usize,
    vertex: Option<usize>,
    alive: bool,
}

/// Hierarchical partition of the graph nodes: the root holds every node,
/// each leaf exactly one, and children of a tree node partition its set.
#[derive(Debug, Clone)]
pub struct EncodingTree {
    nodes: Vec<TreeNode>,
    root: usize,
    leaf_of: Vec<usize>,
}

impl EncodingTree {
    fn with_root(node_count: usize, root_height: usize) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut nodes = Vec::with_capacity(2 * node_count + 1);
        nodes.push(TreeNode {
            parent: None,
            children: Vec::new(),
            height: root_height,
            vertex: None,
            alive: true,
        });
        Ok(Self {
            nodes,
            root: 0,
            leaf_of: vec![usize::MAX; node_count],
        })
    }

    fn push(&mut self, parent: usize, height: usize, vertex: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            parent: Some(parent),
            children: Vec::new(),
            height,
            vertex,
            alive: true,
        });
        self.nodes[parent].children.push(id);
        if let Some(v) = vertex {
            self.leaf_of[v] = id;
        }
        id
    }

    /// The unique height-1 tree: root with one leaf per graph node.
    pub fn height1(node_count: usize) -> Result<Self> {
        let mut t = Self::with_root(node_count, 1)?;
        for v in 0..node_count {
            t.push(0, 0, Some(v));
        }
        Ok(t)
    }

    /// Height-2 tree with every graph node in its own cluster.
    pub fn singletons(node_count: usize) -> Result<Self> {
        Self::from_partition(&Partition::singletons(node_count))
    }

    /// Height-2 tree whose height-1 layer is `partition`.
    pub fn from_partition(partition: &Partition) -> Result<Self> {
        let n = partition.node_count();
        partition.check_cover(n)?;
        let mut t = Self::with_root(n, 2)?;
        for community in partition.communities() {
            let c = t.push(0, 1, None);
            for &v in community {
                t.push(c, 0, Some(v));
            }
        }
        Ok(t)
    }

    /// Tree of height `levels.len() + 1` from successively coarser partitions;
    /// every community of `levels[k + 1]` must be a union of communities of
    /// `levels[k]`.
    pub fn from_hierarchy(node_count: usize, levels: &[Partition]) -> Result<Self> {
        if levels.is_empty() {
            return Self::height1(node_count);
        }
        for p in levels {
            p.check_cover(node_count)?;
        }
        let top = levels.len();
        let mut t = Self::with_root(node_count, top + 1)?;
        // current tree node holding each graph node, walking down from the top level
        let mut holder = vec![0usize; node_count];
        for (depth, level) in levels.iter().rev().enumerate() {
            let height = top - depth;
            for community in level.communities() {
                let parent = holder[community[0]];
                if community.iter().any(|&v| holder[v] != parent) {
                    return Err(Error::InvalidPartition(
                        "levels are not nested".to_string(),
                    ));
                }
                let id = t.push(parent, height, None);
                for &v in community {
                    holder[v] = id;
                }
            }
        }
        for v in 0..node_count {
            t.push(holder[v], 0, Some(v));
        }
        Ok(t)
    }

    pub fn root(&self) -> TreeNodeId {
        TreeNodeId(self.root)
    }

    pub fn node_count(&self) -> usize {
        self.leaf_of.len()
    }

    /// Number of live tree nodes, root and leaves included.
    pub fn size(&self) -> usize {
        self.nodes.iter().filter(|n| n.alive).count()
    }

    pub fn height(&self) -> usize {
        self.nodes[self.root].height
    }

    pub fn is_alive(&self, id: TreeNodeId) -> bool {
        self.nodes.get(id.0).is_some_and(|n| n.alive)
    }

    pub fn parent(&self, id: TreeNodeId) -> Option<TreeNodeId> {
        self.nodes[id.0].parent.map(TreeNodeId)
    }

    pub fn children(&self, id: TreeNodeId) -> impl Iterator<Item = TreeNodeId> + '_ {
        self.nodes[id.0].children.iter().map(|&c| TreeNodeId(c))
    }

    pub fn node_height(&self, id: TreeNodeId) -> usize {
        self.nodes[id.0].height
    }

    /// Graph node of a leaf.
    pub fn vertex(&self, id: TreeNodeId) -> Option<usize> {
        self.nodes[id.0].vertex
    }

    pub fn leaf(&self, vertex: usize) -> TreeNodeId {
        TreeNodeId(self.leaf_of[vertex])
    }

    /// Live non-root tree nodes in arena order.
    pub fn non_root(&self) -> impl Iterator<Item = TreeNodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(i, n)| n.alive && *i != self.root)
            .map(|(i, _)| TreeNodeId(i))
    }

    /// Live height-1 tree nodes in arena order.
    pub fn clusters(&self) -> Vec<TreeNodeId> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.alive && n.height == 1)
            .map(|(i, _)| TreeNodeId(i))
            .collect()
    }

    /// Graph nodes under `id`, ascending.
    pub fn members(&self, id: TreeNodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id.0];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i];
            match node.vertex {
                Some(v) => out.push(v),
                None => stack.extend(node.children.iter().copied()),
            }
        }
        out.sort_unstable();
        out
    }

    /// Merges two height-1 clusters of a height-2 tree into a new cluster
    /// under the root, returning its handle.
    pub fn merge(&mut self, a: TreeNodeId, b: TreeNodeId) -> Result<TreeNodeId> {
        if a == b {
            return Err(Error::InvalidTree("cannot merge a node with itself".into()));
        }
        if self.height() != 2 {
            return Err(Error::InvalidTree("merge requires a height-2 tree".into()));
        }
        for id in [a, b] {
            if !self.is_alive(id) {
                return Err(Error::InvalidTree(format!("tree node {} is not live", id.0)));
            }
            if id.0 == self.root {
                return Err(Error::InvalidTree("cannot merge the root".into()));
            }
            if self.nodes[id.0].height != 1 {
                return Err(Error::InvalidTree(format!(
                    "tree node {} has height {}, expected 1",
                    id.0, self.nodes[id.0].height
                )));
            }
        }
        let mut children = std::mem::take(&mut self.nodes[a.0].children);
        children.extend(std::mem::take(&mut self.nodes[b.0].children));
        self.nodes[a.0].alive = false;
        self.nodes[b.0].alive = false;
        let root = self.root;
        self.nodes[root].children.retain(|&c| c != a.0 && c != b.0);
        let merged = self.push(root, 1, None);
        for &c in &children {
            self.nodes[c].parent = Some(merged);
        }
        self.nodes[merged].children = children;
        debug_assert!(self.validate().is_ok());
        Ok(TreeNodeId(merged))
    }

    /// The height-1 layer of a height-2 tree.
    pub fn partition(&self) -> Result<Partition> {
        if self.height() != 2 {
            return Err(Error::InvalidTree(format!(
                "partition requires height 2, tree has height {}",
                self.height()
            )));
        }
        Partition::new(self.clusters().into_iter().map(|c| self.members(c)).collect())
    }

    /// Checks every structural invariant: root covers all nodes, leaves hold
    /// one node each, children partition their parent, heights decrease by one
    /// per level and the root height is the maximum.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidTree(m));
        let n = self.node_count();
        let root = &self.nodes[self.root];
        if root.parent.is_some() || !root.alive {
            return fail("root must be live and parentless".into());
        }
        let mut count = vec![0usize; n];
        let mut max_height = 0;
        for (i, node) in self.nodes.iter().enumerate() {
            if !node.alive {
                continue;
            }
            max_height = max_height.max(node.height);
            match node.vertex {
                Some(v) => {
                    if node.height != 0 || !node.children.is_empty() {
                        return fail(format!("leaf {i} must have height 0 and no children"));
                    }
                    if self.leaf_of[v] != i {
                        return fail(format!("leaf index for node {v} is stale"));
                    }
                    count[v] += 1;
                }
                None => {
                    if node.children.is_empty() {
                        return fail(format!("internal node {i} has no children"));
                    }
                }
            }
            if i != self.root {
                let Some(p) = node.parent else {
                    return fail(format!("tree node {i} has no parent"));
                };
                let parent = &self.nodes[p];
                if !parent.alive || !parent.children.contains(&i) {
                    return fail(format!("tree node {i} is detached from its parent"));
                }
                if parent.height != node.height + 1 {
                    return fail(format!("height of {i} inconsistent with parent"));
                }
            }
            for &c in &node.children {
                if self.nodes[c].parent != Some(i) || !self.nodes[c].alive {
                    return fail(format!("child {c} of {i} is inconsistent"));
                }
            }
        }
        if max_height != root.height {
            return fail("root height is not the tree height".into());
        }
        if let Some(v) = count.iter().position(|&c| c != 1) {
            return fail(format!("graph node {v} held by {} leaves", count[v]));
        }
        Ok(())
    }
}
