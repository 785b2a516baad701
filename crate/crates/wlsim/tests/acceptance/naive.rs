//! Reference refinement with uncompressed structural colors: a color is an
//! interned value — the node label initially, then the pair (previous
//! color, sorted neighbor-color multiset) — with ids handed out in
//! first-encounter order and never re-ranked. Slower but obviously faithful
//! to the definition; the library implementation must match it verdict for
//! verdict, round for round.

use std::collections::HashMap;

use wlsim::wl::{partitions_equivalent, DistinguishOutcome};
use wlsim::Graph;

type ColorId = u64;

fn multisets_differ(colors: &[Vec<ColorId>; 2]) -> bool {
    let mut a = colors[0].clone();
    let mut b = colors[1].clone();
    a.sort_unstable();
    b.sort_unstable();
    a != b
}

pub fn naive_distinguish(g1: &Graph, g2: &Graph, max_rounds: usize) -> DistinguishOutcome {
    let graphs = [g1, g2];
    let mut label_ids: HashMap<Option<u32>, ColorId> = HashMap::new();
    let mut colors: [Vec<ColorId>; 2] = [Vec::new(), Vec::new()];
    for (slot, g) in graphs.iter().enumerate() {
        colors[slot] = (0..g.node_count())
            .map(|v| {
                let key = g.labels().map(|labels| labels[v]);
                let candidate = label_ids.len() as ColorId;
                *label_ids.entry(key).or_insert(candidate)
            })
            .collect();
    }
    if multisets_differ(&colors) {
        return DistinguishOutcome::Distinguished { round: 0 };
    }

    let mut next_id = label_ids.len() as ColorId;
    let mut interned: HashMap<(ColorId, Vec<ColorId>), ColorId> = HashMap::new();
    for t in 1..=max_rounds {
        let mut refreshed: [Vec<ColorId>; 2] = [Vec::new(), Vec::new()];
        for (slot, g) in graphs.iter().enumerate() {
            refreshed[slot] = (0..g.node_count())
                .map(|v| {
                    let mut neigh: Vec<ColorId> = g
                        .neighbors(v as u32)
                        .expect("in range")
                        .iter()
                        .map(|&u| colors[slot][u as usize])
                        .collect();
                    neigh.sort_unstable();
                    *interned.entry((colors[slot][v], neigh)).or_insert_with(|| {
                        let id = next_id;
                        next_id += 1;
                        id
                    })
                })
                .collect();
        }
        if multisets_differ(&refreshed) {
            return DistinguishOutcome::Distinguished { round: t };
        }
        let flat_prev: Vec<ColorId> = colors.iter().flatten().copied().collect();
        let flat_next: Vec<ColorId> = refreshed.iter().flatten().copied().collect();
        if partitions_equivalent(&flat_prev, &flat_next) {
            return DistinguishOutcome::Undistinguished { rounds: t };
        }
        colors = refreshed;
    }
    DistinguishOutcome::Undistinguished { rounds: max_rounds }
}
