//! Seeded random graph generation.
//!
//! All randomness flows through xoshiro256** whose 256-bit state is expanded
//! from the user-facing `u64` seed with SplitMix64. The uniform-double and
//! bounded-integer helpers below are part of the reproducibility contract:
//! the same (n, p or m, seed) triple yields the same edge set on every
//! platform and build.

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Expands a 64-bit seed into xoshiro256** state via SplitMix64.
pub fn rng_from_seed(seed: u64) -> Xoshiro256StarStar {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    Xoshiro256StarStar::from_seed(key)
}

/// Uniform double in [0, 1): the top 53 bits of one xoshiro output.
pub fn uniform01(rng: &mut impl Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Unbiased uniform integer in 0..bound via rejection sampling.
pub fn uniform_below(rng: &mut impl Rng, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return x % bound;
        }
    }
}

/// Uniform gamma in (0, 1); the open endpoints are enforced by rejection.
pub fn uniform_gamma(rng: &mut impl Rng) -> f64 {
    loop {
        let g = uniform01(rng);
        if g > 0.0 {
            return g;
        }
    }
}

/// `count` independent gammas uniform in (lo, hi).
pub fn sample_gammas(count: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = lo + (hi - lo) * uniform01(&mut rng);
        if g > lo && g < hi {
            out.push(g);
        }
    }
    out
}

/// G(n, p): each of the C(n, 2) pairs is an edge independently with
/// probability `p`. Pairs are visited in lexicographic (u, v) order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} not in [0, 1]")));
    }
    if n < 1 {
        return Err(Error::invalid("node count must be at least 1".to_string()));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if uniform01(&mut rng) < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges, None)
}

/// Default Erdos-Renyi edge probability 4/n (average degree about 4), the
/// sparse regime used throughout the experiments.
pub fn sparse_edge_probability(n: usize) -> f64 {
    (4.0 / n as f64).min(1.0)
}

/// Barabasi-Albert preferential attachment. The initial configuration is a
/// star on m+1 nodes centered at node 0; every later node attaches to `m`
/// distinct existing nodes chosen proportionally to degree, sampled without
/// replacement from the degree-weighted urn.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m < 1 || m >= n {
        return Err(Error::invalid(format!(
            "attachment count m={m} must satisfy 1 <= m < n={n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m + m * (n - m - 1));
    // One entry per degree unit; sampling an index uniformly picks a node
    // with probability proportional to its degree.
    let mut urn: Vec<NodeId> = Vec::with_capacity(2 * (m + m * (n - m - 1)));
    for leaf in 1..=m as NodeId {
        edges.push((0, leaf));
        urn.push(0);
        urn.push(leaf);
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for new in (m + 1) as NodeId..n as NodeId {
        targets.clear();
        while targets.len() < m {
            let pick = urn[uniform_below(&mut rng, urn.len() as u64) as usize];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            urn.push(t);
            urn.push(new);
        }
    }
    Graph::new(n, &edges, None)
}
