//! 2-lifts and the search for signings whose lift has a small nontrivial spectrum.
//!
//! The spectrum of a 2-lift is the spectrum of the base adjacency matrix together
//! with that of the signed adjacency matrix (entry `-1` where the signing bit is
//! 1). Candidates are therefore scored on the base-sized signed matrix, and the
//! chosen lift is verified with a direct eigensolve afterwards.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::LiftError;
use crate::graph::{edge_key, Degree, SimpleGraph, WeightedMultigraph};
use crate::name::VertexName;
use crate::spectral::{simple_spectral_report, symmetric_eigenvalues};

/// Largest edge count searched exhaustively.
pub const EXHAUSTIVE_EDGE_LIMIT: usize = 20;

/// Two lambdas closer than this are treated as equal when ranking signings.
const LAMBDA_TIE: f64 = 1e-9;

/// One bit per base edge: `false` keeps copies parallel, `true` crosses them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signing {
    bits: BTreeMap<(VertexName, VertexName), bool>,
}

impl Signing {
    /// The all-zero signing of `base`.
    pub fn zeros(base: &SimpleGraph) -> Self {
        Signing {
            bits: base.edges().iter().map(|e| (*e, false)).collect(),
        }
    }

    /// Bits in canonical edge order.
    pub fn from_bits(base: &SimpleGraph, bits: &[bool]) -> Self {
        assert_eq!(bits.len(), base.edges().len());
        Signing {
            bits: base.edges().iter().copied().zip(bits.iter().copied()).collect(),
        }
    }

    pub fn set(&mut self, a: VertexName, b: VertexName, bit: bool) {
        self.bits.insert(edge_key(a, b), bit);
    }

    pub fn get(&self, a: &VertexName, b: &VertexName) -> Option<bool> {
        self.bits.get(&edge_key(*a, *b)).copied()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((VertexName, VertexName), bool)> + '_ {
        self.bits.iter().map(|(e, b)| (*e, *b))
    }

    /// Bits in canonical edge order.
    pub fn bits(&self) -> Vec<bool> {
        self.bits.values().copied().collect()
    }

    fn check_covers(&self, base: &SimpleGraph) -> Result<(), LiftError> {
        if let Some((a, b)) = base.edges().iter().find(|e| !self.bits.contains_key(e)) {
            return Err(LiftError::IncompleteSigning(*a, *b));
        }
        if let Some((a, b)) = self.bits.keys().find(|e| !base.edges().contains(e)) {
            return Err(LiftError::ForeignEdge(*a, *b));
        }
        Ok(())
    }
}

fn check_base(base: &SimpleGraph) -> Result<usize, LiftError> {
    if base.vertex_count() == 0 {
        return Err(LiftError::BadBase("empty graph".into()));
    }
    base.regular_degree()
        .ok_or_else(|| LiftError::BadBase("vertex degrees differ".into()))
}

/// The 2-lift of `base` under `s`. The `0`-copy of each vertex keeps its name
/// with a `0` appended, the other copy gets a `1`.
pub fn two_lift(base: &SimpleGraph, s: &Signing) -> Result<SimpleGraph, LiftError> {
    check_base(base)?;
    s.check_covers(base)?;
    let mut lift = SimpleGraph::new();
    for v in base.vertices() {
        lift.add_vertex(v.child(false));
        lift.add_vertex(v.child(true));
    }
    for ((a, b), cross) in s.iter() {
        for bit in [false, true] {
            lift.add_edge(a.child(bit), b.child(bit ^ cross))?;
        }
    }
    Ok(lift)
}

/// Dense signed adjacency matrix in canonical vertex order.
fn signed_matrix(base: &SimpleGraph, edges: &[(usize, usize)], bits: &[bool]) -> Vec<f64> {
    let n = base.vertex_count();
    let mut m = vec![0.0; n * n];
    for (&(i, j), &bit) in edges.iter().zip(bits) {
        let v = if bit { -1.0 } else { 1.0 };
        m[i * n + j] = v;
        m[j * n + i] = v;
    }
    m
}

/// Parameters for [`find_good_signing`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftParams {
    pub lambda_budget: f64,
    pub search_budget: usize,
    pub seed: u64,
}

impl LiftParams {
    /// `2 sqrt(d/2 - 1) + 0.5`, just above the Ramanujan value for the simple lift.
    pub fn default_budget(d: Degree) -> f64 {
        2.0 * ((d.half() - 1) as f64).sqrt() + 0.5
    }

    pub fn for_degree(d: Degree, seed: u64) -> Self {
        LiftParams {
            lambda_budget: Self::default_budget(d),
            search_budget: 256,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        LiftParams { seed, ..self }
    }
}

/// Result of a signing search.
#[derive(Clone, Debug, PartialEq)]
pub struct SigningSearch {
    pub signing: Signing,
    /// `lambda` of the simple lift, from a direct eigensolve.
    pub lambda: f64,
    pub candidates: usize,
    pub exhaustive: bool,
}

/// Greedy spanning forest of the canonical edge order, as a mask over edges.
fn spanning_forest(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    edges
        .iter()
        .map(|&(i, j)| {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                true
            } else {
                false
            }
        })
        .collect()
}

/// Finds a signing whose lift has `lambda <= lambda_budget`.
///
/// With at most [`EXHAUSTIVE_EDGE_LIMIT`] edges the result is the minimiser of
/// `lambda` over all `2^|E|` signings, ties going to the lexicographically
/// smallest bit vector. Switching at a vertex set does not change the signed
/// spectrum, and every switching class has exactly one member that is zero on
/// the greedy spanning forest, which is also the lexicographically smallest
/// member; so only those members are scored. Larger bases get `search_budget`
/// seeded random candidates and keep the best.
pub fn find_good_signing(
    base: &SimpleGraph,
    lambda_budget: f64,
    search_budget: usize,
    seed: u64,
) -> Result<SigningSearch, LiftError> {
    check_base(base)?;
    let n = base.vertex_count();
    let index: BTreeMap<VertexName, usize> =
        base.vertices().iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let edges: Vec<(usize, usize)> = base
        .edges()
        .iter()
        .map(|(a, b)| (index[a], index[b]))
        .collect();
    let base_lambda = simple_spectral_report(base)?.lambda;

    let score = |bits: &[bool]| -> Result<f64, LiftError> {
        let eig = symmetric_eigenvalues(n, &signed_matrix(base, &edges, bits))?;
        let rho = eig.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        Ok(rho.max(base_lambda))
    };

    let exhaustive = edges.len() <= EXHAUSTIVE_EDGE_LIMIT;
    let mut best: Option<(f64, Vec<bool>)> = None;
    let mut candidates = 0usize;
    let mut consider = |bits: Vec<bool>, best: &mut Option<(f64, Vec<bool>)>| -> Result<(), LiftError> {
        let lambda = score(&bits)?;
        candidates += 1;
        if best.as_ref().is_none_or(|(b, _)| lambda < b - LAMBDA_TIE) {
            *best = Some((lambda, bits));
        }
        Ok(())
    };

    if exhaustive {
        let forest = spanning_forest(n, &edges);
        let free: Vec<usize> = (0..edges.len()).filter(|&e| !forest[e]).collect();
        for counter in 0u64..(1u64 << free.len()) {
            let mut bits = vec![false; edges.len()];
            for (k, &e) in free.iter().enumerate() {
                bits[e] = (counter >> (free.len() - 1 - k)) & 1 == 1;
            }
            consider(bits, &mut best)?;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..search_budget.max(1) {
            let bits: Vec<bool> = (0..edges.len()).map(|_| rng.random()).collect();
            consider(bits, &mut best)?;
        }
    }

    let (scored, bits) = best.expect("at least one candidate");
    if scored > lambda_budget {
        return Err(LiftError::BudgetExhausted {
            best_lambda: scored,
            budget: lambda_budget,
            candidates,
        });
    }
    let signing = Signing::from_bits(base, &bits);
    let lambda = simple_spectral_report(&two_lift(base, &signing)?)?.lambda;
    if lambda > lambda_budget {
        return Err(LiftError::BudgetExhausted {
            best_lambda: lambda,
            budget: lambda_budget,
            candidates,
        });
    }
    Ok(SigningSearch {
        signing,
        lambda,
        candidates,
        exhaustive,
    })
}

/// Halves a graph whose weights are all exactly 2.
pub fn halve(g_star: &WeightedMultigraph) -> Result<SimpleGraph, LiftError> {
    if let Some((a, b, weight)) = g_star.edges().find(|&(_, _, w)| w != 2) {
        return Err(LiftError::NotDoubled { a, b, weight });
    }
    let base = SimpleGraph::support_of(g_star);
    match base.regular_degree() {
        Some(k) if k as u32 == g_star.degree_target().half() => Ok(base),
        _ => Err(LiftError::BadBase(format!(
            "support is not {}-regular",
            g_star.degree_target().half()
        ))),
    }
}

/// The next doubled lift together with how it was found.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftOutcome {
    pub graph: WeightedMultigraph,
    pub search: SigningSearch,
}

/// Halve, lift with a verified signing, double.
pub fn next_bl_expander_with(
    g_star: &WeightedMultigraph,
    params: &LiftParams,
) -> Result<LiftOutcome, LiftError> {
    let base = halve(g_star)?;
    let search = find_good_signing(&base, params.lambda_budget, params.search_budget, params.seed)?;
    let lift = two_lift(&base, &search.signing)?;
    Ok(LiftOutcome {
        graph: lift.to_weighted(2, g_star.degree_target()),
        search,
    })
}

/// [`next_bl_expander_with`] using the default budgets.
pub fn next_bl_expander(g_star: &WeightedMultigraph, seed: u64) -> Result<WeightedMultigraph, LiftError> {
    let params = LiftParams::for_degree(g_star.degree_target(), seed);
    Ok(next_bl_expander_with(g_star, &params)?.graph)
}
