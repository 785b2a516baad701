//! Color refinement (1-WL) with canonical per-round compression.
//!
//! Each round maps every node to the key `(previous color, sorted multiset
//! of neighbor colors)`. Keys are pooled across *all* graphs being refined,
//! sorted lexicographically, and replaced by their rank, so colors are
//! directly comparable between graphs and independent of node numbering.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A refinement color. Colors are dense ranks: `0..class_count`.
pub type Color = u32;
/// One color per node.
pub type Coloring = Vec<Color>;

/// Refinement history for a set of jointly refined graphs.
#[derive(Debug, Clone)]
pub struct JointTrace {
    /// `colorings[t][g]` is graph `g`'s coloring after round `t`
    /// (round 0 is the initial coloring).
    pub colorings: Vec<Vec<Coloring>>,
    /// Total number of distinct colors across all graphs at each round.
    pub class_counts: Vec<usize>,
    /// Whether the joint partition stabilized within the round budget.
    pub converged: bool,
}

impl JointTrace {
    /// The first round whose partition the next round reproduces, when the
    /// trace converged. Round 0 means the initial coloring was already
    /// stable.
    pub fn stable_round(&self) -> Option<usize> {
        self.converged.then(|| self.colorings.len() - 2)
    }

    /// The coloring of graph `g` in the last computed round.
    pub fn final_coloring(&self, g: usize) -> &Coloring {
        &self.colorings.last().expect("trace has at least the initial round")[g]
    }
}

/// Refinement history for a single graph.
#[derive(Debug, Clone)]
pub struct WlTrace {
    /// `colorings[t]` is the coloring after round `t`.
    pub colorings: Vec<Coloring>,
    /// Number of color classes at each round.
    pub class_counts: Vec<usize>,
    /// Whether the partition stabilized within the round budget.
    pub converged: bool,
}

impl WlTrace {
    /// See [`JointTrace::stable_round`].
    pub fn stable_round(&self) -> Option<usize> {
        self.converged.then(|| self.colorings.len() - 2)
    }

    /// The coloring in the last computed round.
    pub fn final_coloring(&self) -> &Coloring {
        self.colorings.last().expect("trace has at least the initial round")
    }

    /// Class count in the last computed round.
    pub fn final_class_count(&self) -> usize {
        *self.class_counts.last().expect("trace has at least the initial round")
    }
}

/// Outcome of running refinement on a pair of graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistinguishOutcome {
    /// The color multisets first differed at this round.
    Distinguished { round: usize },
    /// The joint partition stabilized (or the round budget ran out) with
    /// equal multisets; `rounds` is the number of refinement rounds run.
    Undistinguished { rounds: usize },
}

impl DistinguishOutcome {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, DistinguishOutcome::Distinguished { .. })
    }
}

/// Assigns rank colors to pooled keys: sort all distinct keys from every
/// graph lexicographically, then replace each key by its rank.
fn compress<K: Ord + Clone + Hash>(keys: &[Vec<K>]) -> (Vec<Coloring>, usize) {
    let mut distinct: Vec<&K> = keys.iter().flatten().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let rank: HashMap<&K, Color> =
        distinct.iter().enumerate().map(|(i, k)| (*k, i as Color)).collect();
    let colorings = keys
        .iter()
        .map(|graph_keys| graph_keys.iter().map(|k| rank[k]).collect())
        .collect();
    (colorings, distinct.len())
}

/// Initial colors: node labels where present, pooled and ranked across all
/// graphs. Unlabeled graphs contribute a single shared pseudo-label that is
/// distinct from every real label.
fn initial_coloring(graphs: &[&Graph]) -> (Vec<Coloring>, usize) {
    let keys: Vec<Vec<Option<u32>>> = graphs
        .iter()
        .map(|g| match g.labels() {
            Some(labels) => labels.iter().map(|&l| Some(l)).collect(),
            None => vec![None; g.node_count()],
        })
        .collect();
    compress(&keys)
}

/// One refinement round over all graphs, returning the compressed colorings
/// and the joint class count.
fn refine_round(graphs: &[&Graph], prev: &[Coloring]) -> (Vec<Coloring>, usize) {
    let keys: Vec<Vec<(Color, Vec<Color>)>> = graphs
        .iter()
        .zip(prev)
        .map(|(g, colors)| {
            (0..g.node_count())
                .map(|v| {
                    let mut neigh: Vec<Color> =
                        g.adj(v).iter().map(|&u| colors[u as usize]).collect();
                    neigh.sort_unstable();
                    (colors[v], neigh)
                })
                .collect()
        })
        .collect();
    compress(&keys)
}

/// Whether two colorings induce the same partition of the same node set.
pub fn partitions_equivalent<A, B>(a: &[A], b: &[B]) -> bool
where
    A: Eq + Hash,
    B: Eq + Hash,
{
    if a.len() != b.len() {
        return false;
    }
    let mut fwd: HashMap<&A, &B> = HashMap::new();
    let mut bwd: HashMap<&B, &A> = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        if *fwd.entry(x).or_insert(y) != y {
            return false;
        }
        if *bwd.entry(y).or_insert(x) != x {
            return false;
        }
    }
    true
}

fn flatten(colorings: &[Coloring]) -> Vec<Color> {
    colorings.iter().flatten().copied().collect()
}

/// Jointly refines `graphs` until the combined partition stabilizes or
/// `max_rounds` rounds have run. The trace always contains the initial
/// coloring; when it converges, the last round is the one that confirmed
/// stability.
pub fn wl_refine(graphs: &[&Graph], max_rounds: usize) -> Result<JointTrace> {
    if graphs.is_empty() {
        return Err(Error::invalid("refinement needs at least one graph".to_string()));
    }
    let (init, count) = initial_coloring(graphs);
    let mut trace = JointTrace {
        colorings: vec![init],
        class_counts: vec![count],
        converged: false,
    };
    for _ in 0..max_rounds {
        let prev = trace.colorings.last().expect("non-empty");
        let (next, count) = refine_round(graphs, prev);
        let stable = partitions_equivalent(&flatten(prev), &flatten(&next));
        trace.colorings.push(next);
        trace.class_counts.push(count);
        if stable {
            trace.converged = true;
            break;
        }
    }
    Ok(trace)
}

/// Default round budget for a single graph.
pub fn default_max_rounds(graph: &Graph) -> usize {
    graph.node_count().max(1)
}

/// Refines a single graph; see [`wl_refine`].
pub fn wl_run(graph: &Graph, max_rounds: usize) -> Result<WlTrace> {
    let joint = wl_refine(&[graph], max_rounds)?;
    Ok(WlTrace {
        colorings: joint.colorings.into_iter().map(|mut per| per.pop().expect("one graph")).collect(),
        class_counts: joint.class_counts,
        converged: joint.converged,
    })
}

fn sorted(coloring: &Coloring) -> Coloring {
    let mut s = coloring.clone();
    s.sort_unstable();
    s
}

/// Runs joint refinement on two graphs and reports the first round whose
/// color multisets differ, or that none did. Because colors are pooled
/// ranks, comparing sorted colorings compares multisets exactly. Stops
/// refining at the distinguishing round (or at joint stability).
pub fn wl_distinguish(g1: &Graph, g2: &Graph, max_rounds: usize) -> Result<DistinguishOutcome> {
    let graphs = [g1, g2];
    let (prev, _) = initial_coloring(&graphs);
    if sorted(&prev[0]) != sorted(&prev[1]) {
        return Ok(DistinguishOutcome::Distinguished { round: 0 });
    }
    let mut prev = prev;
    for t in 1..=max_rounds {
        let (next, _) = refine_round(&graphs, &prev);
        if sorted(&next[0]) != sorted(&next[1]) {
            return Ok(DistinguishOutcome::Distinguished { round: t });
        }
        if partitions_equivalent(&flatten(&prev), &flatten(&next)) {
            return Ok(DistinguishOutcome::Undistinguished { rounds: t });
        }
        prev = next;
    }
    Ok(DistinguishOutcome::Undistinguished { rounds: max_rounds })
}

/// Default round budget for a pair of graphs: the disjoint-union size.
pub fn default_pair_rounds(g1: &Graph, g2: &Graph) -> usize {
    g1.node_count() + g2.node_count()
}
