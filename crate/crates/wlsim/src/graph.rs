//! Simple undirected node-labeled graphs.
//!
//! Nodes are identified as `0..n-1`. Edges are unordered pairs without
//! self-loops or multi-edges. Labels are optional; an unlabeled graph is
//! treated as carrying one shared label. Graphs are immutable after
//! construction, so they can be shared freely across experiment workers.

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Identifier of a node label. Two nodes carry the same label iff their
/// `LabelId`s are equal; the numeric values themselves carry no meaning
/// beyond identity and ordering.
pub type LabelId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted neighbor lists, one per node.
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
    labels: Option<Vec<LabelId>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(NodeId, NodeId)], labels: Option<Vec<LabelId>>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at node {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid("duplicate edge".to_string()));
            }
        }
        if let Some(ref l) = labels {
            if l.len() != n {
                return Err(Error::invalid(format!(
                    "label vector has {} entries for {} nodes",
                    l.len(),
                    n
                )));
            }
        }
        Ok(Graph {
            n,
            adj,
            edge_count: edges.len(),
            labels,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Neighbors of `v` in ascending node order.
    pub fn neighbors(&self, v: NodeId) -> Result<&[NodeId]> {
        self.adj
            .get(v as usize)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::invalid(format!("node {v} out of range 0..{}", self.n)))
    }

    /// Unchecked neighbor access for hot loops; `v` must be in range.
    #[inline]
    pub(crate) fn adj(&self, v: usize) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn labels(&self) -> Option<&[LabelId]> {
        self.labels.as_deref()
    }

    /// Edges as (u, v) pairs with u < v, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n as NodeId).flat_map(move |u| {
            self.adj[u as usize]
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj
            .get(u as usize)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Disjoint union: nodes of `other` are shifted by `self.node_count()`;
    /// no edges are added between the parts, labels are carried over.
    /// If only one operand is labeled, the other part keeps the implicit
    /// shared label 0 of an unlabeled graph.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.n as NodeId;
        let mut edges: Vec<(NodeId, NodeId)> = self.edges().collect();
        edges.extend(other.edges().map(|(u, v)| (u + offset, v + offset)));
        let labels = if self.labels.is_none() && other.labels.is_none() {
            None
        } else {
            let mut l = self
                .labels
                .clone()
                .unwrap_or_else(|| vec![0; self.n]);
            l.extend(other.labels.clone().unwrap_or_else(|| vec![0; other.n]));
            Some(l)
        };
        Graph::new(self.n + other.n, &edges, labels)
            .expect("union of two valid graphs is valid")
    }

    /// Applies a node permutation: node `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[NodeId]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::invalid("permutation length mismatch".to_string()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            let idx = p as usize;
            if idx >= self.n || seen[idx] {
                return Err(Error::invalid("not a permutation".to_string()));
            }
            seen[idx] = true;
        }
        let edges: Vec<(NodeId, NodeId)> = self
            .edges()
            .map(|(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![0; self.n];
            for (v, &lab) in l.iter().enumerate() {
                out[perm[v] as usize] = lab;
            }
            out
        });
        Graph::new(self.n, &edges, labels)
    }

    /// Re-checks the structural invariants. Constructors already enforce
    /// them; tests run this over generated graphs.
    pub fn validate(&self) -> Result<()> {
        let mut edge_count = 0usize;
        for (v, list) in self.adj.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::invalid(format!("duplicate edge at node {v}")));
                }
                if w[0] > w[1] {
                    return Err(Error::invalid(format!("unsorted adjacency at node {v}")));
                }
            }
            for &u in list {
                if u as usize >= self.n {
                    return Err(Error::invalid(format!("endpoint {u} out of range")));
                }
                if u as usize == v {
                    return Err(Error::invalid(format!("self-loop at node {v}")));
                }
                if !self.adj[u as usize].binary_search(&(v as NodeId)).is_ok() {
                    return Err(Error::invalid(format!("edge ({v}, {u}) not symmetric")));
                }
            }
            edge_count += list.len();
        }
        if edge_count != 2 * self.edge_count {
            return Err(Error::invalid("edge count mismatch".to_string()));
        }
        if let Some(ref l) = self.labels {
            if l.len() != self.n {
                return Err(Error::invalid("label vector length mismatch".to_string()));
            }
        }
        Ok(())
    }
}

impl Graph {
    /// Path graph 0-1-...-(n-1).
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1) as NodeId)
            .map(|u| (u, u + 1))
            .collect();
        Graph::new(n, &edges, None).expect("path is valid")
    }

    /// Cycle graph on `n >= 3` nodes.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        let mut edges: Vec<_> = (0..n as NodeId - 1).map(|u| (u, u + 1)).collect();
        edges.push((0, n as NodeId - 1));
        Graph::new(n, &edges, None).expect("cycle is valid")
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as NodeId {
            for v in u + 1..n as NodeId {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges, None).expect("complete graph is valid")
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[], None).expect("empty graph is valid")
    }

    /// Star with the center at node 0 and `leaves` leaf nodes.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves as NodeId).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &edges, None).expect("star is valid")
    }
}
