//! Spectral bounds checked against exact combinatorial quantities.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::expansion::edge_expansion_exact;
use crate::error::AnalysisError;
use crate::graph::WeightedMultigraph;
use crate::grower::state_at;
use crate::name::VertexName;
use crate::spectral::{rayleigh_quotient, spectral_report};

/// Slack on the exact side of the Cheeger sandwich.
pub const CHEEGER_SLACK: f64 = 1e-6;
/// Slack on every other floating comparison.
pub const LAMBDA_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CheegerCheck {
    pub lower: f64,
    pub upper: f64,
    pub h: Ratio<u64>,
    pub lambda2: f64,
    pub ok: bool,
}

/// `(d - lambda2)/2 <= h <= sqrt(2 d (d - lambda2))` with `h` exact.
pub fn cheeger_check(g: &WeightedMultigraph) -> Result<CheegerCheck, AnalysisError> {
    cheeger_check_with(g, CHEEGER_SLACK)
}

pub fn cheeger_check_with(g: &WeightedMultigraph, slack: f64) -> Result<CheegerCheck, AnalysisError> {
    let lambda2 = spectral_report(g)?.lambda2;
    let h = edge_expansion_exact(g)?.h;
    let d = g.d() as f64;
    let gap = (d - lambda2).max(0.0);
    let lower = gap / 2.0;
    let upper = (2.0 * d * gap).sqrt();
    let hf = *h.numer() as f64 / *h.denom() as f64;
    Ok(CheegerCheck {
        lower,
        upper,
        h,
        lambda2,
        ok: lower - slack <= hf && hf <= upper + slack,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingCheck {
    pub edges: u64,
    pub expected: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `| w(S,T) - d|S||T|/n | <= lambda sqrt(|S||T|)` for disjoint nonempty `S`, `T`.
pub fn mixing_check(
    g: &WeightedMultigraph,
    s: &BTreeSet<VertexName>,
    t: &BTreeSet<VertexName>,
    lambda: f64,
) -> Result<MixingCheck, AnalysisError> {
    if s.is_empty() || t.is_empty() || !s.is_disjoint(t) {
        return Err(AnalysisError::DegenerateSet);
    }
    let edges = g.weight_between(s, t);
    Ok(mixing_values(g.d() as f64, g.vertex_count(), s.len(), t.len(), edges, lambda))
}

fn mixing_values(d: f64, n: usize, s: usize, t: usize, edges: u64, lambda: f64) -> MixingCheck {
    let expected = d * (s * t) as f64 / n as f64;
    let bound = lambda * ((s * t) as f64).sqrt();
    MixingCheck {
        edges,
        expected,
        bound,
        holds: (edges as f64 - expected).abs() <= bound + LAMBDA_SLACK,
    }
}

/// Aggregate of many mixing checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingSuite {
    pub pairs_checked: u64,
    pub failures: u64,
    /// Smallest `bound - |w(S,T) - expected|` seen.
    pub min_margin: f64,
    pub lambda: f64,
}

struct PairScorer {
    edges: Vec<(usize, usize, u64)>,
    d: f64,
    n: usize,
    lambda: f64,
}

impl PairScorer {
    fn new(g: &WeightedMultigraph) -> Result<Self, AnalysisError> {
        let index = g.index();
        Ok(PairScorer {
            edges: g.edges().map(|(a, b, w)| (index[&a], index[&b], w as u64)).collect(),
            d: g.d() as f64,
            n: g.vertex_count(),
            lambda: spectral_report(g)?.lambda,
        })
    }

    /// `side[v]`: 0 outside, 1 in S, 2 in T.
    fn score(&self, side: &[u8], suite: &mut MixingSuite) {
        let s = side.iter().filter(|&&x| x == 1).count();
        let t = side.iter().filter(|&&x| x == 2).count();
        if s == 0 || t == 0 {
            return;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b, _)| side[a] | side[b] == 3)
            .map(|&(_, _, w)| w)
            .sum();
        let check = mixing_values(self.d, self.n, s, t, edges, self.lambda);
        suite.pairs_checked += 1;
        suite.failures += (!check.holds) as u64;
        suite.min_margin = suite.min_margin.min(check.bound - (edges as f64 - check.expected).abs());
    }
}

/// Every ordered pair of disjoint nonempty sets (`3^n` assignments).
pub fn mixing_suite_exhaustive(g: &WeightedMultigraph) -> Result<MixingSuite, AnalysisError> {
    let n = g.vertex_count();
    if n > 12 {
        return Err(AnalysisError::TooLarge { n, max: 12 });
    }
    let scorer = PairScorer::new(g)?;
    let mut suite = MixingSuite {
        pairs_checked: 0,
        failures: 0,
        min_margin: f64::INFINITY,
        lambda: scorer.lambda,
    };
    let mut side = vec![0u8; n];
    loop {
        scorer.score(&side, &mut suite);
        let mut k = 0;
        while k < n && side[k] == 2 {
            side[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        side[k] += 1;
    }
    Ok(suite)
}

/// `samples` seeded random pairs: each vertex joins S, T or neither uniformly.
pub fn mixing_suite_sampled(g: &WeightedMultigraph, samples: u64, seed: u64) -> Result<MixingSuite, AnalysisError> {
    let scorer = PairScorer::new(g)?;
    let mut suite = MixingSuite {
        pairs_checked: 0,
        failures: 0,
        min_margin: f64::INFINITY,
        lambda: scorer.lambda,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut side = vec![0u8; g.vertex_count()];
    while suite.pairs_checked < samples {
        side.iter_mut().for_each(|x| *x = rng.random_range(0..3));
        scorer.score(&side, &mut suite);
    }
    Ok(suite)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnbalancedCheck {
    pub cut: u64,
    pub bound: f64,
    pub holds: bool,
}

/// `lambda` of the simple graph underlying a doubled lift.
pub fn simple_lambda(h_graph: &WeightedMultigraph) -> Result<f64, AnalysisError> {
    let base = crate::lift::halve(h_graph)?;
    Ok(crate::spectral::simple_spectral_report(&base)?.lambda)
}

/// `w_H(X, complement) >= |X| (d (n - |X|)/n - 4 lambda)` on a doubled lift, with
/// `lambda` taken from the simple graph.
pub fn unbalanced_bound_check(
    h_graph: &WeightedMultigraph,
    x: &BTreeSet<VertexName>,
    lambda: f64,
) -> Result<UnbalancedCheck, AnalysisError> {
    let n = h_graph.vertex_count();
    if x.is_empty() || 2 * x.len() > n {
        return Err(AnalysisError::DegenerateSet);
    }
    let k = x.len() as f64;
    let d = h_graph.d() as f64;
    let cut = h_graph.cut_weight(x);
    let bound = k * (d * (n as f64 - k) / n as f64 - 4.0 * lambda);
    Ok(UnbalancedCheck {
        cut,
        bound,
        holds: cut as f64 >= bound - LAMBDA_SLACK,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayleighCheck {
    pub d: u32,
    pub i: u8,
    pub n: usize,
    pub lambda2: f64,
    /// Rayleigh quotient of the two-spike test vector.
    pub quotient: f64,
    pub threshold: f64,
    /// `lambda2 >= d/2 - epsilon`.
    pub ok: bool,
    /// `quotient <= lambda2` within slack.
    pub quotient_below_lambda2: bool,
}

/// The test vector: `1 - 2/n` on the split pair, `-2/n` elsewhere.
pub fn rayleigh_vector(g: &WeightedMultigraph, pair: [VertexName; 2]) -> Vec<f64> {
    let n = g.vertex_count() as f64;
    g.vertices()
        .map(|v| if pair.contains(v) { 1.0 - 2.0 / n } else { -2.0 / n })
        .collect()
}

/// Builds the graph one split past `G*_i` and compares `lambda2` with `d/2`.
pub fn rayleigh_lower_bound_check(d: u32, i: u8, epsilon: f64, seed: u64) -> Result<RayleighCheck, AnalysisError> {
    let base_size = d as usize / 2 + 1;
    let n = (base_size << i) + 1;
    let state = state_at(d, n, seed)?;
    let g = state.current();
    let pair: Vec<VertexName> = state.split_set().iter().copied().collect();
    let pair: [VertexName; 2] = pair.try_into().map_err(|_| AnalysisError::DegenerateSet)?;
    let lambda2 = spectral_report(g)?.lambda2;
    let quotient = rayleigh_quotient(g, &rayleigh_vector(g, pair));
    let threshold = d as f64 / 2.0 - epsilon;
    Ok(RayleighCheck {
        d,
        i,
        n,
        lambda2,
        quotient,
        threshold,
        ok: lambda2 >= threshold,
        quotient_below_lambda2: quotient <= lambda2 + LAMBDA_SLACK,
    })
}
