//! Unlabeled trees over dense vertex indices.
//!
//! Every structure here is immutable once built. Vertex indices are `0..n`
//! and carry no identity of their own: operations that drop vertices
//! re-compact the survivors, and isomorphism is decided by canonical codes.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("line {line}: expected two integer vertex labels")]
    Malformed { line: usize },
    #[error("line {line}: self-loop on vertex {label}")]
    SelfLoop { line: usize, label: usize },
    #[error("line {line}: vertex label {label} out of range 1..={n}")]
    LabelOutOfRange { line: usize, label: usize, n: usize },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("cycle detected through edge {0}-{1}")]
    CycleDetected(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex index {index} is invalid for a tree with {n} vertices")]
    InvalidVertex { index: usize, n: usize },
    #[error("operation requires a non-empty tree")]
    EmptyTree,
}

/// A finite tree, optionally with a distinguished root.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tree {
    adjacency: Vec<Vec<usize>>,
    root: Option<usize>,
}

/// The components left over after deleting vertices from a tree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Forest {
    pub components: Vec<Tree>,
}

impl Forest {
    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(Tree::len).sum()
    }
}

impl Tree {
    /// The empty tree (P0).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single() -> Self {
        Tree {
            adjacency: vec![Vec::new()],
            root: Some(0),
        }
    }

    /// Path on `n` vertices, `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::unchecked(n, &edges)
    }

    /// Star with one hub (vertex 0) and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::unchecked(leaves + 1, &edges)
    }

    /// Builds a tree from 0-based edges, validating that they form a tree.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        let mut adjacency = vec![Vec::new(); n];
        let mut dsu = DisjointSets::new(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(TreeError::InvalidVertex { index: x, n });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop { line: 0, label: u });
            }
            if adjacency[u].contains(&v) {
                return Err(TreeError::DuplicateEdge(u, v));
            }
            if !dsu.union(u, v) {
                return Err(TreeError::CycleDetected(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        if n > 0 && edges.len() != n - 1 {
            return Err(TreeError::Disconnected);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Tree {
            adjacency,
            root: None,
        })
    }

    /// Builds a tree from edges already known to form one.
    pub(crate) fn unchecked(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Tree {
            adjacency,
            root: None,
        }
    }

    pub(crate) fn from_adjacency(adjacency: Vec<Vec<usize>>, root: Option<usize>) -> Self {
        Tree { adjacency, root }
    }

    /// Parses the edge-list text format: one edge per line as two
    /// whitespace-separated 1-based labels, blank lines ignored.
    ///
    /// The labels must cover exactly `1..=n` where `n` is one more than the
    /// number of edges. A lone vertex has no edge list, so empty input parses
    /// as the empty tree.
    pub fn parse_edge_list(text: &str) -> Result<Self, TreeError> {
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let mut label = || -> Result<usize, TreeError> {
                fields
                    .next()
                    .and_then(|f| f.parse::<usize>().ok())
                    .ok_or(TreeError::Malformed { line })
            };
            let (a, b) = (label()?, label()?);
            if fields.next().is_some() {
                return Err(TreeError::Malformed { line });
            }
            if a == b {
                return Err(TreeError::SelfLoop { line, label: a });
            }
            edges.push((line, a, b));
        }

        let n = if edges.is_empty() { 0 } else { edges.len() + 1 };
        let mut adjacency = vec![Vec::new(); n];
        let mut dsu = DisjointSets::new(n);
        for &(line, a, b) in &edges {
            for label in [a, b] {
                if label == 0 || label > n {
                    return Err(TreeError::LabelOutOfRange { line, label, n });
                }
            }
            let (u, v) = (a - 1, b - 1);
            if adjacency[u].contains(&v) {
                return Err(TreeError::DuplicateEdge(a, b));
            }
            if !dsu.union(u, v) {
                return Err(TreeError::CycleDetected(a, b));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        // n - 1 acyclic edges over n vertices always connect them, so a
        // label set with gaps surfaces above as out-of-range or a cycle.
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Tree {
            adjacency,
            root: None,
        })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn with_root(mut self, root: usize) -> Result<Self, TreeError> {
        self.check(root)?;
        self.root = Some(root);
        Ok(self)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    fn check(&self, v: usize) -> Result<(), TreeError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(TreeError::InvalidVertex {
                index: v,
                n: self.len(),
            })
        }
    }

    /// Re-validates the structural invariants: symmetric adjacency without
    /// loops or repeats, `n - 1` edges, connected.
    pub fn validate(&self) -> Result<(), TreeError> {
        let n = self.len();
        if let Some(r) = self.root {
            self.check(r)?;
        }
        let mut degree_sum = 0;
        for (u, ns) in self.adjacency.iter().enumerate() {
            for (i, &v) in ns.iter().enumerate() {
                self.check(v)?;
                if v == u {
                    return Err(TreeError::SelfLoop { line: 0, label: u });
                }
                if i > 0 && ns[i - 1] >= v {
                    return Err(TreeError::DuplicateEdge(u, v));
                }
                if self.adjacency[v].binary_search(&u).is_err() {
                    return Err(TreeError::DuplicateEdge(u, v));
                }
            }
            degree_sum += ns.len();
        }
        if n == 0 {
            return Ok(());
        }
        if degree_sum != 2 * (n - 1) {
            return Err(TreeError::Disconnected);
        }
        let reached = self.bfs_order(0).len();
        if reached != n {
            return Err(TreeError::Disconnected);
        }
        Ok(())
    }

    /// `{v}` together with its neighbours, ascending.
    pub fn closed_neighborhood(&self, v: usize) -> Result<Vec<usize>, TreeError> {
        self.check(v)?;
        let mut out = Vec::with_capacity(self.degree(v) + 1);
        out.push(v);
        out.extend_from_slice(&self.adjacency[v]);
        out.sort_unstable();
        Ok(out)
    }

    /// Removes `vs` and every incident edge, returning the surviving
    /// components with their indices compacted to `0..k`.
    pub fn delete_vertices(&self, vs: &[usize]) -> Result<Forest, TreeError> {
        let n = self.len();
        let mut removed = vec![false; n];
        for &v in vs {
            self.check(v)?;
            removed[v] = true;
        }
        let mut new_index = vec![usize::MAX; n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if removed[start] || new_index[start] != usize::MAX {
                continue;
            }
            // Collect the component in discovery order, then relabel.
            let mut members = Vec::new();
            new_index[start] = 0;
            stack.push(start);
            while let Some(u) = stack.pop() {
                members.push(u);
                for &w in &self.adjacency[u] {
                    if !removed[w] && new_index[w] == usize::MAX {
                        new_index[w] = 0;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            for (i, &u) in members.iter().enumerate() {
                new_index[u] = i;
            }
            let adjacency = members
                .iter()
                .map(|&u| {
                    self.adjacency[u]
                        .iter()
                        .filter(|&&w| !removed[w])
                        .map(|&w| new_index[w])
                        .collect()
                })
                .collect();
            components.push(Tree {
                adjacency,
                root: None,
            });
        }
        Ok(Forest { components })
    }

    /// The one or two vertices of minimum eccentricity, found by stripping
    /// leaves in rounds until at most two vertices remain.
    pub fn centers(&self) -> Result<Vec<usize>, TreeError> {
        let n = self.len();
        if n == 0 {
            return Err(TreeError::EmptyTree);
        }
        if n <= 2 {
            return Ok((0..n).collect());
        }
        let mut degree: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                degree[leaf] = 0;
                for &w in &self.adjacency[leaf] {
                    if degree[w] > 0 {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        Ok(layer)
    }

    /// Vertex degrees, largest first.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Breadth-first order from `start`.
    pub fn bfs_order(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::with_capacity(self.len());
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Copy of this tree with a new leaf (index `n`) hanging off `v`.
    pub fn with_leaf(&self, v: usize) -> Result<Self, TreeError> {
        self.check(v)?;
        let n = self.len();
        let mut adjacency = self.adjacency.clone();
        adjacency[v].push(n);
        adjacency.push(vec![v]);
        Ok(Tree {
            adjacency,
            root: self.root,
        })
    }

    /// Relabels vertex `v` as `perm[v]`; `perm` must be a permutation.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.len();
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut adjacency = vec![Vec::new(); n];
        for (u, ns) in self.adjacency.iter().enumerate() {
            let mut mapped: Vec<usize> = ns.iter().map(|&w| perm[w]).collect();
            mapped.sort_unstable();
            adjacency[perm[u]] = mapped;
        }
        Tree {
            adjacency,
            root: self.root.map(|r| perm[r]),
        }
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
