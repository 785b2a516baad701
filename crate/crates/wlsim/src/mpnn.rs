//! The one-dimensional message-passing network.
//!
//! Each layer maps node features through
//! `f'(v) = a(W1 * f(v) + W2 * sum_{u in N(v)} f(u))`
//! with a single parameter gamma: the theory scheme sets `W1 = gamma * n`,
//! `W2 = gamma`; the simplified scheme sets both to gamma. All arithmetic
//! runs under a [`PrecisionContext`]; neighbor sums and readouts are
//! multiset sums (ascending value order), so equal neighborhoods produce
//! bit-identical results and relabeling nodes permutes features exactly.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::precision::{PrecisionContext, Real};
use crate::wl::Color;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Activation {
    #[default]
    Sigmoid,
    Arctan,
}

impl Activation {
    pub fn eval(&self, x: &Real, ctx: &PrecisionContext) -> Real {
        match self {
            Activation::Sigmoid => ctx.sigmoid(x),
            Activation::Arctan => ctx.atan(x),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Arctan => "arctan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightScheme {
    /// `W1 = gamma * n`, `W2 = gamma`, with `n` the subject graph size.
    Theory,
    /// `W1 = W2 = gamma`.
    #[default]
    Simplified,
}

impl WeightScheme {
    pub fn name(&self) -> &'static str {
        match self {
            WeightScheme::Theory => "theory",
            WeightScheme::Simplified => "simplified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    /// `f(v) = 1` for every node.
    #[default]
    ConstantOne,
    /// Distinct labels map to sqrt(2), sqrt(3), sqrt(5), ... in ascending
    /// label order. An unlabeled graph counts as one label class.
    SqrtPrimes,
}

impl Encoding {
    pub fn name(&self) -> &'static str {
        match self {
            Encoding::ConstantOne => "constant-one",
            Encoding::SqrtPrimes => "sqrt-primes",
        }
    }
}

/// Network configuration: gamma (one shared value, or one per layer),
/// activation, weight scheme, and feature encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct MpnnConfig {
    pub gammas: Vec<f64>,
    pub activation: Activation,
    pub scheme: WeightScheme,
    pub encoding: Encoding,
}

impl MpnnConfig {
    pub fn new(gamma: f64) -> Result<Self> {
        let cfg = MpnnConfig {
            gammas: vec![gamma],
            activation: Activation::default(),
            scheme: WeightScheme::default(),
            encoding: Encoding::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gammas.is_empty() {
            return Err(Error::invalid("at least one gamma is required".to_string()));
        }
        for &g in &self.gammas {
            if !(g > 0.0 && g < 1.0) {
                return Err(Error::invalid(format!("gamma {g} not in the open interval (0, 1)")));
            }
        }
        Ok(())
    }

    /// Gamma for the given layer: a single configured value is shared by
    /// all layers; a list must cover every layer run.
    pub fn gamma_at(&self, layer: usize) -> Result<f64> {
        if self.gammas.len() == 1 {
            Ok(self.gammas[0])
        } else {
            self.gammas.get(layer).copied().ok_or_else(|| {
                Error::invalid(format!(
                    "layer {layer} has no gamma; {} were configured",
                    self.gammas.len()
                ))
            })
        }
    }
}

/// Feature values per node after a given round.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    pub values: Vec<Real>,
    pub round: usize,
}

/// The first `k` primes, in order.
pub fn first_primes(k: usize) -> Vec<u32> {
    let mut primes: Vec<u32> = Vec::with_capacity(k);
    let mut candidate = 2u32;
    while primes.len() < k {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| !candidate.is_multiple_of(p)) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Initial features for round 0.
pub fn init_features(g: &Graph, encoding: Encoding, ctx: &PrecisionContext) -> Features {
    let values = match encoding {
        Encoding::ConstantOne => vec![ctx.one(); g.node_count()],
        Encoding::SqrtPrimes => {
            let labels: Vec<u32> = match g.labels() {
                Some(l) => l.to_vec(),
                None => vec![0; g.node_count()],
            };
            let mut distinct = labels.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let primes = first_primes(distinct.len());
            let roots: Vec<Real> = primes.iter().map(|&p| ctx.sqrt_of(p)).collect();
            labels
                .iter()
                .map(|l| roots[distinct.binary_search(l).expect("label present")].clone())
                .collect()
        }
    };
    Features { values, round: 0 }
}

/// One layer. `weight_n` is the subject size the theory scheme multiplies
/// into `W1` (the graph itself, or the disjoint-union size when a pair is
/// being compared).
pub fn mpnn_step(
    g: &Graph,
    features: &Features,
    cfg: &MpnnConfig,
    weight_n: usize,
    ctx: &PrecisionContext,
) -> Result<Features> {
    if features.values.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "feature count {} does not match node count {}",
            features.values.len(),
            g.node_count()
        )));
    }
    let gamma = ctx.from_f64(cfg.gamma_at(features.round)?);
    let w1 = match cfg.scheme {
        WeightScheme::Theory => ctx.mul(&gamma, &ctx.from_u64(weight_n as u64)),
        WeightScheme::Simplified => gamma.clone(),
    };
    let w2 = gamma;
    let values = (0..g.node_count())
        .map(|v| {
            let own = ctx.mul(&w1, &features.values[v]);
            let neigh: Vec<Real> =
                g.adj(v).iter().map(|&u| features.values[u as usize].clone()).collect();
            let msg = ctx.mul(&w2, &ctx.sum(&neigh));
            cfg.activation.eval(&ctx.add(&own, &msg), ctx)
        })
        .collect();
    Ok(Features { values, round: features.round + 1 })
}

/// Runs `rounds` layers from the initial encoding and returns the full
/// trace (`rounds + 1` assignments, index = round).
pub fn mpnn_run_with_base(
    g: &Graph,
    cfg: &MpnnConfig,
    rounds: usize,
    weight_n: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<Features>> {
    cfg.validate()?;
    let mut trace = vec![init_features(g, cfg.encoding, ctx)];
    for _ in 0..rounds {
        let next = mpnn_step(g, trace.last().expect("non-empty"), cfg, weight_n, ctx)?;
        trace.push(next);
    }
    Ok(trace)
}

/// [`mpnn_run_with_base`] with the graph's own size as the weight base.
pub fn mpnn_run(
    g: &Graph,
    cfg: &MpnnConfig,
    rounds: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<Features>> {
    mpnn_run_with_base(g, cfg, rounds, g.node_count(), ctx)
}

/// Sum of all features (multiset sum).
pub fn mpnn_readout(features: &Features, ctx: &PrecisionContext) -> Real {
    ctx.sum(&features.values)
}

/// Runs the same network on both graphs (the theory scheme uses the
/// disjoint-union size) and compares the final readouts as p-bit values.
pub fn mpnn_distinguish(
    g1: &Graph,
    g2: &Graph,
    cfg: &MpnnConfig,
    rounds: usize,
    ctx: &PrecisionContext,
) -> Result<bool> {
    let n = g1.node_count() + g2.node_count();
    let t1 = mpnn_run_with_base(g1, cfg, rounds, n, ctx)?;
    let t2 = mpnn_run_with_base(g2, cfg, rounds, n, ctx)?;
    let r1 = mpnn_readout(t1.last().expect("non-empty"), ctx);
    let r2 = mpnn_readout(t2.last().expect("non-empty"), ctx);
    Ok(r1 != r2)
}

/// The partition induced by exact feature equality, as rank colors in
/// ascending value order (equal values share a color).
pub fn feature_classes(values: &[Real]) -> Vec<Color> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite values"));
    let mut classes = vec![0 as Color; values.len()];
    let mut current = 0;
    for w in 0..order.len() {
        if w > 0 && values[order[w]] != values[order[w - 1]] {
            current += 1;
        }
        classes[order[w]] = current;
    }
    classes
}

/// Number of distinct feature values.
pub fn feature_class_count(values: &[Real]) -> usize {
    match feature_classes(values).iter().max() {
        Some(&c) => c as usize + 1,
        None => 0,
    }
}

/// Minimum of `|c1*sqrt(p1) + ... + ck*sqrt(pk)|` over all nonzero integer
/// coefficient vectors with `|ci| <= coeff_bound`, evaluated at `bits`
/// precision. Exhaustive: visits all `(2*coeff_bound+1)^k - 1` combinations
/// via incremental partial sums.
pub fn sqrt_prime_independence_min(k: usize, coeff_bound: i32, bits: u32) -> Result<Real> {
    let ctx = PrecisionContext::new(bits)?;
    if k == 0 {
        return Err(Error::invalid("need at least one prime".to_string()));
    }
    let primes = first_primes(k);
    // terms[i][c + coeff_bound] = c * sqrt(primes[i])
    let terms: Vec<Vec<Real>> = primes
        .iter()
        .map(|&p| {
            let root = ctx.sqrt_of(p);
            (-coeff_bound..=coeff_bound)
                .map(|c| ctx.mul(&ctx.from_f64(c as f64), &root))
                .collect()
        })
        .collect();
    let mut best: Option<Real> = None;
    let mut stack: Vec<(usize, bool, Real)> = vec![(0, false, ctx.zero())];
    while let Some((depth, nonzero, sum)) = stack.pop() {
        if depth == k {
            if nonzero {
                let mag = sum.abs();
                if best.as_ref().is_none_or(|b| mag < *b) {
                    best = Some(mag);
                }
            }
            continue;
        }
        for (idx, term) in terms[depth].iter().enumerate() {
            let c_is_zero = idx as i32 == coeff_bound;
            let next = if c_is_zero { sum.clone() } else { ctx.add(&sum, term) };
            stack.push((depth + 1, nonzero || !c_is_zero, next));
        }
    }
    best.ok_or_else(|| Error::invalid("no nonzero combination".to_string()))
}
