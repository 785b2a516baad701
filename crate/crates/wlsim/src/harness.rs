//! Perfect-simulation checking, minimum-precision search, and the three
//! experiment drivers (lottery gamma, precision-vs-size sweep,
//! class-count-vs-precision).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generate::{erdos_renyi, sparse_edge_probability};
use crate::graph::Graph;
use crate::mpnn::{
    feature_class_count, feature_classes, mpnn_run, Activation, Encoding, MpnnConfig, WeightScheme,
};
use crate::precision::PrecisionContext;
use crate::wl::{default_max_rounds, partitions_equivalent, wl_run};

/// Model choices shared by every harness entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelOptions {
    pub activation: Activation,
    pub scheme: WeightScheme,
    pub encoding: Encoding,
}

impl ModelOptions {
    fn config(&self, gamma: f64) -> Result<MpnnConfig> {
        let mut cfg = MpnnConfig::new(gamma)?;
        cfg.activation = self.activation;
        cfg.scheme = self.scheme;
        cfg.encoding = self.encoding;
        Ok(cfg)
    }
}

/// Result of checking whether a network run simulates refinement on one
/// graph. "Perfect" is judged at the refinement convergence round T; the
/// per-round agreement vector is diagnostic only.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimulationReport {
    pub graph_id: String,
    pub gamma: f64,
    pub bits: u32,
    pub perfect: bool,
    /// First round whose feature partition disagrees with refinement;
    /// present exactly when not perfect.
    pub first_divergence_round: Option<usize>,
    /// Refinement convergence round T.
    pub convergence_round: usize,
    /// Refinement class count at T.
    pub wl_classes: usize,
    /// Distinct feature values per round, t = 0..=T.
    pub mpnn_classes_per_round: Vec<usize>,
    /// Partition agreement per round, t = 0..=T.
    pub round_agreement: Vec<bool>,
}

/// Runs refinement to convergence and the network for the same number of
/// rounds; perfect iff the round-T partitions coincide.
pub fn perfect_simulation(
    graph_id: &str,
    g: &Graph,
    gamma: f64,
    ctx: &PrecisionContext,
    opts: &ModelOptions,
) -> Result<SimulationReport> {
    let cfg = opts.config(gamma)?;
    let wl = wl_run(g, default_max_rounds(g))?;
    let rounds = wl.stable_round().unwrap_or(wl.colorings.len() - 1);
    let trace = mpnn_run(g, &cfg, rounds, ctx)?;
    let round_agreement: Vec<bool> = (0..=rounds)
        .map(|t| partitions_equivalent(&wl.colorings[t], &feature_classes(&trace[t].values)))
        .collect();
    let perfect = round_agreement[rounds];
    Ok(SimulationReport {
        graph_id: graph_id.to_string(),
        gamma,
        bits: ctx.bits(),
        perfect,
        first_divergence_round: if perfect {
            None
        } else {
            round_agreement.iter().position(|&ok| !ok)
        },
        convergence_round: rounds,
        wl_classes: wl.class_counts[rounds],
        mpnn_classes_per_round: trace.iter().map(|f| feature_class_count(&f.values)).collect(),
        round_agreement,
    })
}

/// Outcome of the minimum-precision search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinBitsOutcome {
    /// Smallest lattice precision that simulated perfectly, plus the
    /// largest probed precision below it that failed (absent when the
    /// lattice floor already succeeds).
    Found { bits: u32, largest_failing_below: Option<u32> },
    /// No probed precision up to `p_max` succeeded.
    NotFound { p_max: u32 },
}

impl MinBitsOutcome {
    pub fn bits(&self) -> Option<u32> {
        match self {
            MinBitsOutcome::Found { bits, .. } => Some(*bits),
            MinBitsOutcome::NotFound { .. } => None,
        }
    }
}

/// Search transcript: every probed precision with its verdict, in probe
/// order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinBitsSearch {
    pub outcome: MinBitsOutcome,
    pub probes: Vec<(u32, bool)>,
}

/// Smallest precision (on the doubling + bisection lattice starting at 8)
/// at which the network perfectly simulates refinement on `g`. Probes
/// double from 8 to the first success, bisect down to the boundary, and
/// re-verify the winner. Monotonicity in p is not assumed; the result is
/// the smallest probe that succeeded with its predecessor probe failing.
pub fn min_precision_bits(
    g: &Graph,
    gamma: f64,
    p_max: u32,
    opts: &ModelOptions,
) -> Result<MinBitsSearch> {
    if p_max < 4 {
        return Err(crate::error::Error::invalid(format!(
            "precision ceiling {p_max} is below the minimum of 4 bits"
        )));
    }
    let mut probes: Vec<(u32, bool)> = Vec::new();
    let check = |bits: u32, probes: &mut Vec<(u32, bool)>| -> Result<bool> {
        let ctx = PrecisionContext::new(bits)?;
        let ok = perfect_simulation("", g, gamma, &ctx, opts)?.perfect;
        probes.push((bits, ok));
        Ok(ok)
    };

    // Doubling phase: 8, 16, 32, ... capped at p_max.
    let mut lower_fail: Option<u32> = None;
    let mut p = 8.min(p_max);
    while !check(p, &mut probes)? {
        lower_fail = Some(p);
        if p >= p_max {
            return Ok(MinBitsSearch { outcome: MinBitsOutcome::NotFound { p_max }, probes });
        }
        p = (p * 2).min(p_max);
    }

    // Bisection between the last failure and the first success.
    let mut hi = p;
    if let Some(mut lo) = lower_fail {
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if check(mid, &mut probes)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lower_fail = Some(lo);
    }

    // Re-verify the winner.
    let verified = check(hi, &mut probes)?;
    debug_assert!(verified, "deterministic re-check must agree");
    Ok(MinBitsSearch {
        outcome: MinBitsOutcome::Found { bits: hi, largest_failing_below: lower_fail },
        probes,
    })
}

/// One lottery table row: how many of the graphs a gamma simulated
/// perfectly.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LotteryRow {
    pub gamma: f64,
    pub perfect_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LotteryResult {
    pub rows: Vec<LotteryRow>,
    /// Gammas that simulated every graph perfectly.
    pub lottery_gammas: Vec<f64>,
    pub graph_count: usize,
}

/// Evaluates the full gamma x graph grid in parallel.
pub fn lottery_experiment(
    graphs: &[(String, Graph)],
    gammas: &[f64],
    ctx: &PrecisionContext,
    opts: &ModelOptions,
) -> Result<LotteryResult> {
    let rows: Vec<LotteryRow> = gammas
        .par_iter()
        .map(|&gamma| {
            let mut count = 0;
            for (id, g) in graphs {
                if perfect_simulation(id, g, gamma, ctx, opts)?.perfect {
                    count += 1;
                }
            }
            Ok(LotteryRow { gamma, perfect_count: count })
        })
        .collect::<Result<_>>()?;
    let lottery_gammas =
        rows.iter().filter(|r| r.perfect_count == graphs.len()).map(|r| r.gamma).collect();
    Ok(LotteryResult { rows, lottery_gammas, graph_count: graphs.len() })
}

/// One (size, gamma) cell of the precision sweep.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepCell {
    pub n: usize,
    pub seed: u64,
    pub gamma: f64,
    /// Minimum lattice precision, absent when nothing up to p_max worked.
    pub min_bits: Option<u32>,
}

/// Per-size aggregate over the gammas that produced a minimum.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepSummary {
    pub n: usize,
    pub seed: u64,
    pub mean_bits: f64,
    pub sd_bits: f64,
    pub found: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
    pub summary: Vec<SweepSummary>,
}

/// The graph seed used for size `n` under base seed `seed`.
pub fn sweep_seed(seed: u64, n: usize) -> u64 {
    seed.wrapping_add(n as u64)
}

/// For each size: one G(n, 4/n) instance (seeded as [`sweep_seed`]), then
/// `min_precision_bits` per gamma; summarizes mean/sd per size.
pub fn precision_sweep(
    sizes: &[usize],
    gammas: &[f64],
    seed: u64,
    p_max: u32,
    opts: &ModelOptions,
) -> Result<SweepResult> {
    let graphs: Vec<(usize, u64, Graph)> = sizes
        .iter()
        .map(|&n| {
            let s = sweep_seed(seed, n);
            Ok((n, s, erdos_renyi(n, sparse_edge_probability(n), s)?))
        })
        .collect::<Result<_>>()?;
    let grid: Vec<(usize, &(usize, u64, Graph), f64)> = graphs
        .iter()
        .enumerate()
        .flat_map(|(i, g)| gammas.iter().map(move |&gm| (i, g, gm)))
        .collect();
    let mut cells: Vec<(usize, SweepCell)> = grid
        .par_iter()
        .map(|&(i, (n, s, ref g), gamma)| {
            let search = min_precision_bits(g, gamma, p_max, opts)?;
            Ok((i, SweepCell { n: *n, seed: *s, gamma, min_bits: search.outcome.bits() }))
        })
        .collect::<Result<_>>()?;
    cells.sort_by(|a, b| (a.0, a.1.gamma).partial_cmp(&(b.0, b.1.gamma)).expect("finite"));
    let cells: Vec<SweepCell> = cells.into_iter().map(|(_, c)| c).collect();

    let summary = graphs
        .iter()
        .map(|(n, s, _)| {
            let found: Vec<f64> = cells
                .iter()
                .filter(|c| c.n == *n && c.seed == *s)
                .filter_map(|c| c.min_bits.map(f64::from))
                .collect();
            let mean = if found.is_empty() { f64::NAN } else {
                found.iter().sum::<f64>() / found.len() as f64
            };
            let sd = if found.len() < 2 { 0.0 } else {
                (found.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (found.len() - 1) as f64)
                    .sqrt()
            };
            SweepSummary {
                n: *n,
                seed: *s,
                mean_bits: mean,
                sd_bits: sd,
                found: found.len(),
                total: gammas.len(),
            }
        })
        .collect();
    Ok(SweepResult { cells, summary })
}

/// One (gamma, bits) cell of the class-count experiment.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassCountRecord {
    pub gamma: f64,
    pub bits: u32,
    /// Distinct feature values at the refinement convergence round.
    pub mpnn_classes: usize,
    /// Reference: refinement class count at convergence.
    pub wl_classes: usize,
}

/// For each (gamma, p): runs the network to the refinement convergence
/// round and counts distinct feature values against the refinement count.
pub fn class_count_vs_precision(
    g: &Graph,
    gammas: &[f64],
    bits_list: &[u32],
    opts: &ModelOptions,
) -> Result<Vec<ClassCountRecord>> {
    let wl = wl_run(g, default_max_rounds(g))?;
    let rounds = wl.stable_round().unwrap_or(wl.colorings.len() - 1);
    let wl_classes = wl.class_counts[rounds];
    let grid: Vec<(f64, u32)> = gammas
        .iter()
        .flat_map(|&gm| bits_list.iter().map(move |&b| (gm, b)))
        .collect();
    let mut records: Vec<ClassCountRecord> = grid
        .par_iter()
        .map(|&(gamma, bits)| {
            let ctx = PrecisionContext::new(bits)?;
            let cfg = opts.config(gamma)?;
            let trace = mpnn_run(g, &cfg, rounds, &ctx)?;
            Ok(ClassCountRecord {
                gamma,
                bits,
                mpnn_classes: feature_class_count(&trace[rounds].values),
                wl_classes,
            })
        })
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| (a.gamma, a.bits).partial_cmp(&(b.gamma, b.bits)).expect("finite"));
    Ok(records)
}
