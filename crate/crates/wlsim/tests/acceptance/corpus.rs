//! Exhaustive corpus of pairwise non-isomorphic graphs on up to seven
//! nodes. Graphs are edge bitmasks; isomorphism is decided by brute-force
//! permutation search, and the corpus is built by extending each (n-1)-node
//! representative with every possible neighborhood of a new node, keeping
//! the lexicographically minimal mask over all n! relabelings.

use wlsim::Graph;

/// Expected corpus sizes for n = 1..=7.
pub const GRAPH_COUNTS: [usize; 7] = [1, 2, 4, 11, 34, 156, 1044];

/// Bit position of edge {u, v} (u != v) in the triangular layout.
pub fn edge_slot(u: usize, v: usize) -> u32 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (b * (b - 1) / 2 + a) as u32
}

/// All permutations of 0..n in a deterministic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// The mask of the relabeled graph.
pub fn apply_perm(mask: u32, n: usize, perm: &[usize]) -> u32 {
    let mut out = 0;
    for v in 1..n {
        for u in 0..v {
            if mask & (1 << edge_slot(u, v)) != 0 {
                out |= 1 << edge_slot(perm[u], perm[v]);
            }
        }
    }
    out
}

/// Minimal mask over every relabeling.
pub fn canonical(mask: u32, n: usize, perms: &[Vec<usize>]) -> u32 {
    perms.iter().map(|p| apply_perm(mask, n, p)).min().expect("non-empty permutation set")
}

/// Brute-force isomorphism search on equal-sized masks.
pub fn are_isomorphic(a: u32, b: u32, n: usize, perms: &[Vec<usize>]) -> bool {
    a.count_ones() == b.count_ones() && perms.iter().any(|p| apply_perm(a, n, p) == b)
}

/// Canonical masks for every unlabeled graph, indexed by n - 1.
pub fn enumerate(max_n: usize) -> Vec<Vec<u32>> {
    let mut by_n: Vec<Vec<u32>> = vec![vec![0]];
    for n in 2..=max_n {
        let perms = permutations(n);
        let mut seen: Vec<u32> = Vec::new();
        for &base in &by_n[n - 2] {
            for subset in 0u32..(1 << (n - 1)) {
                let mut mask = base;
                for u in 0..n - 1 {
                    if subset & (1 << u) != 0 {
                        mask |= 1 << edge_slot(u, n - 1);
                    }
                }
                seen.push(canonical(mask, n, &perms));
            }
        }
        seen.sort_unstable();
        seen.dedup();
        by_n.push(seen);
    }
    by_n
}

/// Materializes a mask as a library graph.
pub fn to_graph(mask: u32, n: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if mask & (1 << edge_slot(u, v)) != 0 {
                edges.push((u as u32, v as u32));
            }
        }
    }
    Graph::new(n, &edges, None).expect("masks encode simple graphs")
}

/// The mask of an existing small graph.
pub fn mask_of(g: &Graph) -> u32 {
    let mut mask = 0;
    for (u, v) in g.edges() {
        mask |= 1 << edge_slot(u as usize, v as usize);
    }
    mask
}
