//! k-order refinement over V^k and the matching k-order network.
//!
//! Tuples live in a flat dense array under the mixed-radix index
//! `(v_1,...,v_k) -> v_1*n^(k-1) + ... + v_k`. Round 0 colors each tuple by
//! its isomorphism type: the k x k matrix over {EQUAL, EDGE, NON-EDGE}
//! recording coordinate equality and adjacency (plus the tuple of node
//! labels when the graph is labeled). Each later round re-keys a tuple by
//! its previous color together with, for every coordinate i, the multiset
//! of colors over N_i(v) — the n tuples that substitute coordinate i.
//! Compression pools keys across graphs exactly as in [`crate::wl`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::mpnn::{feature_classes, first_primes, Activation, Features};
use crate::precision::{PrecisionContext, Real};
use crate::wl::{partitions_equivalent, Color, DistinguishOutcome};

/// Default cap on the total number of tuples a k-order run may touch.
pub const DEFAULT_TUPLE_BUDGET: u64 = 20_000_000;

/// `n^k` without overflow surprises.
pub fn tuple_count(n: usize, k: usize) -> u128 {
    (n as u128).pow(k as u32)
}

fn checked_tuple_total(graphs: &[&Graph], k: usize, budget: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::invalid(format!("order k must be at least 2, got {k}")));
    }
    let counts: Vec<u128> = graphs.iter().map(|g| tuple_count(g.node_count(), k)).collect();
    let total: u128 = counts.iter().sum();
    if total > budget as u128 {
        let worst = counts.iter().max().copied().unwrap_or(0);
        return Err(Error::Resource(format!(
            "k-order run needs n^k = {worst} tuples (total {total}), budget is {budget}"
        )));
    }
    Ok(counts.into_iter().map(|c| c as usize).collect())
}

/// One entry of an isomorphism-type matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IsoEntry {
    Equal,
    Edge,
    NonEdge,
}

/// Decodes a flat index back into its k-tuple.
pub fn index_tuple(mut index: usize, n: usize, k: usize) -> Vec<NodeId> {
    let mut tuple = vec![0 as NodeId; k];
    for slot in tuple.iter_mut().rev() {
        *slot = (index % n) as NodeId;
        index /= n;
    }
    tuple
}

/// Encodes a k-tuple as its flat index.
pub fn tuple_index(tuple: &[NodeId], n: usize) -> usize {
    tuple.iter().fold(0usize, |acc, &v| acc * n + v as usize)
}

/// The n tuples that coincide with `tuple` everywhere except coordinate
/// `coord` (0-based), in ascending substituted-node order; includes the
/// tuple itself.
pub fn tuple_neighbors(tuple: &[NodeId], coord: usize, n: usize) -> Vec<Vec<NodeId>> {
    (0..n as NodeId)
        .map(|u| {
            let mut t = tuple.to_vec();
            t[coord] = u;
            t
        })
        .collect()
}

/// Row-major k x k isomorphism-type matrix of a tuple.
pub fn iso_type_matrix(g: &Graph, tuple: &[NodeId]) -> Vec<IsoEntry> {
    let k = tuple.len();
    let mut m = Vec::with_capacity(k * k);
    for &a in tuple {
        for &b in tuple {
            m.push(if a == b {
                IsoEntry::Equal
            } else if g.has_edge(a, b) {
                IsoEntry::Edge
            } else {
                IsoEntry::NonEdge
            });
        }
    }
    m
}

/// Colors over V^k for one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleLabeling {
    pub colors: Vec<Color>,
    pub k: usize,
    pub round: usize,
}

/// Joint k-order refinement history, mirroring [`crate::wl::JointTrace`]
/// with tuples in place of nodes.
#[derive(Debug, Clone)]
pub struct NwlTrace {
    /// `colorings[t][g]` = graph `g`'s tuple coloring after round `t`.
    pub colorings: Vec<Vec<Vec<Color>>>,
    pub class_counts: Vec<usize>,
    pub converged: bool,
    pub k: usize,
}

impl NwlTrace {
    pub fn stable_round(&self) -> Option<usize> {
        self.converged.then(|| self.colorings.len() - 2)
    }
}

fn compress_pooled<K: Ord + Clone + std::hash::Hash>(keys: &[Vec<K>]) -> (Vec<Vec<Color>>, usize) {
    let mut distinct: Vec<&K> = keys.iter().flatten().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let rank: HashMap<&K, Color> =
        distinct.iter().enumerate().map(|(i, k)| (*k, i as Color)).collect();
    (
        keys.iter().map(|per| per.iter().map(|k| rank[k]).collect()).collect(),
        distinct.len(),
    )
}

type IsoKey = (Vec<IsoEntry>, Option<Vec<u32>>);

fn iso_keys(g: &Graph, k: usize, tuples: usize) -> Vec<IsoKey> {
    let n = g.node_count();
    (0..tuples)
        .map(|idx| {
            let tuple = index_tuple(idx, n, k);
            let labels = g.labels().map(|l| tuple.iter().map(|&v| l[v as usize]).collect());
            (iso_type_matrix(g, &tuple), labels)
        })
        .collect()
}

/// Round-0 coloring: tuples keyed by isomorphism type, pooled over all
/// graphs so colors are cross-graph comparable.
pub fn iso_type_labelings(graphs: &[&Graph], k: usize, budget: u64) -> Result<(Vec<TupleLabeling>, usize)> {
    let counts = checked_tuple_total(graphs, k, budget)?;
    let keys: Vec<Vec<IsoKey>> =
        graphs.iter().zip(&counts).map(|(g, &c)| iso_keys(g, k, c)).collect();
    let (colorings, classes) = compress_pooled(&keys);
    let labelings = colorings
        .into_iter()
        .map(|colors| TupleLabeling { colors, k, round: 0 })
        .collect();
    Ok((labelings, classes))
}

/// Single-graph round-0 coloring.
pub fn iso_type_labeling(g: &Graph, k: usize, budget: u64) -> Result<TupleLabeling> {
    let (mut labelings, _) = iso_type_labelings(&[g], k, budget)?;
    Ok(labelings.pop().expect("one graph"))
}

/// Sorted run-length encoding of a color multiset.
fn rle(mut colors: Vec<Color>) -> Vec<(Color, u32)> {
    colors.sort_unstable();
    let mut out: Vec<(Color, u32)> = Vec::new();
    for c in colors {
        match out.last_mut() {
            Some((last, count)) if *last == c => *count += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

type NwlKey = (Color, Vec<Vec<(Color, u32)>>);

fn nwl_keys(g: &Graph, k: usize, colors: &[Color]) -> Vec<NwlKey> {
    let n = g.node_count();
    // place_value[i] = n^(k-1-i): the stride of coordinate i in the index.
    let place_value: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    (0..colors.len())
        .map(|idx| {
            let tuple = index_tuple(idx, n, k);
            let per_coord = (0..k)
                .map(|i| {
                    let base = idx - tuple[i] as usize * place_value[i];
                    rle((0..n).map(|u| colors[base + u * place_value[i]]).collect())
                })
                .collect();
            (colors[idx], per_coord)
        })
        .collect()
}

/// Jointly refines the tuple colorings of `graphs` until the combined
/// partition stabilizes or `max_rounds` rounds have run.
pub fn nwl_refine(graphs: &[&Graph], k: usize, max_rounds: usize, budget: u64) -> Result<NwlTrace> {
    if graphs.is_empty() {
        return Err(Error::invalid("refinement needs at least one graph".to_string()));
    }
    let (init, classes) = iso_type_labelings(graphs, k, budget)?;
    let mut trace = NwlTrace {
        colorings: vec![init.into_iter().map(|l| l.colors).collect()],
        class_counts: vec![classes],
        converged: false,
        k,
    };
    for _ in 0..max_rounds {
        let prev = trace.colorings.last().expect("non-empty");
        let keys: Vec<Vec<NwlKey>> =
            graphs.iter().zip(prev).map(|(g, colors)| nwl_keys(g, k, colors)).collect();
        let (next, classes) = compress_pooled(&keys);
        let flat_prev: Vec<Color> = prev.iter().flatten().copied().collect();
        let flat_next: Vec<Color> = next.iter().flatten().copied().collect();
        let stable = partitions_equivalent(&flat_prev, &flat_next);
        trace.colorings.push(next);
        trace.class_counts.push(classes);
        if stable {
            trace.converged = true;
            break;
        }
    }
    Ok(trace)
}

/// Round budget that always suffices for convergence: one refinement round
/// per tuple.
pub fn default_nwl_rounds(graphs: &[&Graph], k: usize) -> usize {
    graphs
        .iter()
        .map(|g| tuple_count(g.node_count(), k).min(u64::MAX as u128) as usize)
        .sum()
}

/// Runs k-order refinement on a single graph to convergence.
pub fn nwl_run(g: &Graph, k: usize, budget: u64) -> Result<NwlTrace> {
    nwl_refine(&[g], k, default_nwl_rounds(&[g], k), budget)
}

fn multisets_differ(per_graph: &[Vec<Color>]) -> bool {
    let mut a = per_graph[0].clone();
    let mut b = per_graph[1].clone();
    a.sort_unstable();
    b.sort_unstable();
    a != b
}

/// Compares two graphs under the k-order test: distinguished at the first
/// round whose tuple-color multisets differ. Stops refining at that round
/// (or at joint stability).
pub fn nwl_distinguish(g1: &Graph, g2: &Graph, k: usize, budget: u64) -> Result<DistinguishOutcome> {
    let graphs = [g1, g2];
    let (init, _) = iso_type_labelings(&graphs, k, budget)?;
    let mut prev: Vec<Vec<Color>> = init.into_iter().map(|l| l.colors).collect();
    if multisets_differ(&prev) {
        return Ok(DistinguishOutcome::Distinguished { round: 0 });
    }
    for t in 1..=default_nwl_rounds(&graphs, k) {
        let keys: Vec<Vec<NwlKey>> =
            graphs.iter().zip(&prev).map(|(g, colors)| nwl_keys(g, k, colors)).collect();
        let (next, _) = compress_pooled(&keys);
        if multisets_differ(&next) {
            return Ok(DistinguishOutcome::Distinguished { round: t });
        }
        let flat_prev: Vec<Color> = prev.iter().flatten().copied().collect();
        let flat_next: Vec<Color> = next.iter().flatten().copied().collect();
        if partitions_equivalent(&flat_prev, &flat_next) {
            return Ok(DistinguishOutcome::Undistinguished { rounds: t });
        }
        prev = next;
    }
    Ok(DistinguishOutcome::Undistinguished { rounds: default_nwl_rounds(&graphs, k) })
}

/// Initial k-order features: iso-type classes map to sqrt(2), sqrt(3), ...
/// in ascending canonical class order.
pub fn k_mpnn_init(g: &Graph, k: usize, ctx: &PrecisionContext, budget: u64) -> Result<Features> {
    let labeling = iso_type_labeling(g, k, budget)?;
    let classes = labeling.colors.iter().map(|&c| c as usize).max().map_or(0, |m| m + 1);
    let primes = first_primes(classes);
    let roots: Vec<Real> = primes.iter().map(|&p| ctx.sqrt_of(p)).collect();
    Ok(Features {
        values: labeling.colors.iter().map(|&c| roots[c as usize].clone()).collect(),
        round: 0,
    })
}

/// One k-order layer:
/// `f'(v) = a(gamma * (f(v) + sum_i (n+1)^i * sum_{u in N_i(v)} f(u)))`.
/// Inner sums are multiset sums; the outer combination runs left to right
/// over the fixed i = 1..k structure.
pub fn k_mpnn_step(
    g: &Graph,
    features: &Features,
    k: usize,
    gamma: f64,
    activation: Activation,
    ctx: &PrecisionContext,
) -> Result<Features> {
    let n = g.node_count();
    let tuples = features.values.len();
    if tuple_count(n, k) != tuples as u128 {
        return Err(Error::invalid(format!(
            "feature count {tuples} does not cover V^{k} of an n={n} graph"
        )));
    }
    let gamma = ctx.from_f64(gamma);
    let place_value: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    // weights[i] = (n+1)^(i+1) for coordinate i, loaded at ctx precision.
    let weights: Vec<Real> =
        (1..=k as u32).map(|i| ctx.from_u64((n as u64 + 1).pow(i))).collect();
    let values = (0..tuples)
        .map(|idx| {
            let tuple = index_tuple(idx, n, k);
            let mut x = features.values[idx].clone();
            for i in 0..k {
                let base = idx - tuple[i] as usize * place_value[i];
                let neigh: Vec<Real> = (0..n)
                    .map(|u| features.values[base + u * place_value[i]].clone())
                    .collect();
                let weighted = ctx.mul(&weights[i], &ctx.sum(&neigh));
                x = ctx.add(&x, &weighted);
            }
            activation.eval(&ctx.mul(&gamma, &x), ctx)
        })
        .collect();
    Ok(Features { values, round: features.round + 1 })
}

/// Runs `rounds` k-order layers from the iso-type encoding; returns the
/// full trace.
pub fn k_mpnn_run(
    g: &Graph,
    k: usize,
    gamma: f64,
    activation: Activation,
    rounds: usize,
    ctx: &PrecisionContext,
    budget: u64,
) -> Result<Vec<Features>> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid(format!("gamma {gamma} not in the open interval (0, 1)")));
    }
    let mut trace = vec![k_mpnn_init(g, k, ctx, budget)?];
    for _ in 0..rounds {
        let next = k_mpnn_step(g, trace.last().expect("non-empty"), k, gamma, activation, ctx)?;
        trace.push(next);
    }
    Ok(trace)
}

/// True iff the k-order network's feature partition matches the k-order
/// refinement partition at every round up to (and including) the round
/// that confirms convergence.
pub fn k_perfect_simulation(
    g: &Graph,
    k: usize,
    gamma: f64,
    activation: Activation,
    ctx: &PrecisionContext,
    budget: u64,
) -> Result<bool> {
    let nwl = nwl_run(g, k, budget)?;
    let rounds = nwl.colorings.len() - 1;
    let mpnn = k_mpnn_run(g, k, gamma, activation, rounds, ctx, budget)?;
    Ok(nwl
        .colorings
        .iter()
        .zip(&mpnn)
        .all(|(colors, feats)| partitions_equivalent(&colors[0], &feature_classes(&feats.values))))
}
