//! Vertex-by-vertex interpolation between consecutive doubled lifts.
//!
//! A cycle starts at a doubled lift `G*_i` (all weights 2) with every vertex
//! unsplit and the next doubled lift `H = G*_{i+1}` as target. Each split turns
//! one unsplit vertex `u` into its two lift copies `u0` (which keeps `u`'s
//! identity) and `u1`. Once every vertex is split the current graph equals `H`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GrowError;
use crate::graph::{edge_key, Degree, SimpleGraph, WeightedMultigraph};
use crate::lift::{next_bl_expander_with, LiftParams, SigningSearch};
use crate::name::VertexName;

/// One edge-weight transition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightChange {
    pub a: VertexName,
    pub b: VertexName,
    pub old: u32,
    pub new: u32,
}

/// Record of a single split. Edge names use the post-split names; `u` itself
/// continues as `u0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeLog {
    pub u: VertexName,
    pub u_prime: VertexName,
    pub changes: Vec<WeightChange>,
    pub cost: u64,
    #[serde(rename = "U_u")]
    pub unsplit_neighbors: usize,
    #[serde(rename = "S_u")]
    pub split_neighbors: usize,
}

impl ChangeLog {
    /// The name `u` carries after the split.
    pub fn u_zero(&self) -> VertexName {
        self.u.child(false)
    }
}

/// Accumulates weight changes per edge so the log has one entry per edge.
struct Recorder<'a> {
    g: &'a mut WeightedMultigraph,
    original: BTreeMap<(VertexName, VertexName), u32>,
}

impl Recorder<'_> {
    fn set(&mut self, a: VertexName, b: VertexName, w: u32) {
        let old = self.g.weight(&a, &b);
        self.original.entry(edge_key(a, b)).or_insert(old);
        self.g.set_weight(a, b, w).expect("split never creates self-loops");
    }

    fn finish(self) -> Vec<WeightChange> {
        self.original
            .into_iter()
            .filter_map(|((a, b), old)| {
                let new = self.g.weight(&a, &b);
                (new != old).then_some(WeightChange { a, b, old, new })
            })
            .collect()
    }
}

/// State of one interpolation cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthState {
    d: Degree,
    cycle: u8,
    base: WeightedMultigraph,
    current: WeightedMultigraph,
    target: WeightedMultigraph,
    split: BTreeSet<VertexName>,
    unsplit: BTreeSet<VertexName>,
    split_order: VecDeque<VertexName>,
    lift: SigningSearch,
}

/// Doubled complete graph on `d/2 + 1` vertices named `0:` .. `d/2:`.
pub fn initial_graph(d: u32) -> Result<WeightedMultigraph, GrowError> {
    let d = Degree::new(d)?;
    let mut k = SimpleGraph::new();
    let size = d.base_size() as u32;
    for a in 0..size {
        for b in (a + 1)..size {
            k.add_edge(VertexName::root(a), VertexName::root(b))?;
        }
    }
    Ok(k.to_weighted(2, d))
}

/// Seed used for the lift that closes cycle `i`.
pub fn cycle_seed(seed: u64, cycle: u8) -> u64 {
    seed ^ (cycle as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Starts a cycle at `g_star` with the default lift budgets.
pub fn begin_cycle(g_star: WeightedMultigraph, seed: u64) -> Result<GrowthState, GrowError> {
    let params = LiftParams::for_degree(g_star.degree_target(), seed);
    GrowthState::begin(g_star, &params)
}

impl GrowthState {
    pub fn begin(g_star: WeightedMultigraph, params: &LiftParams) -> Result<Self, GrowError> {
        let lengths: BTreeSet<u8> = g_star.vertices().map(|v| v.len()).collect();
        let cycle = match lengths.iter().collect::<Vec<_>>()[..] {
            [&len] => len,
            _ => {
                return Err(GrowError::Invariant {
                    lemma: "cycle start",
                    detail: "vertex names of a doubled lift must share one length".into(),
                })
            }
        };
        let outcome = next_bl_expander_with(&g_star, params)?;
        let unsplit: BTreeSet<VertexName> = g_star.vertices().copied().collect();
        Ok(GrowthState {
            d: g_star.degree_target(),
            cycle,
            split_order: unsplit.iter().copied().collect(),
            current: g_star.clone(),
            base: g_star,
            target: outcome.graph,
            split: BTreeSet::new(),
            unsplit,
            lift: outcome.search,
        })
    }

    pub fn degree(&self) -> Degree {
        self.d
    }

    /// `i`: the cycle runs from `G*_i` to `G*_{i+1}`.
    pub fn cycle(&self) -> u8 {
        self.cycle
    }

    /// `G*_i`.
    pub fn base(&self) -> &WeightedMultigraph {
        &self.base
    }

    /// The current graph `G_n`.
    pub fn current(&self) -> &WeightedMultigraph {
        &self.current
    }

    /// `H = G*_{i+1}`.
    pub fn target(&self) -> &WeightedMultigraph {
        &self.target
    }

    pub fn split_set(&self) -> &BTreeSet<VertexName> {
        &self.split
    }

    pub fn unsplit_set(&self) -> &BTreeSet<VertexName> {
        &self.unsplit
    }

    pub fn lift_search(&self) -> &SigningSearch {
        &self.lift
    }

    pub fn n(&self) -> usize {
        self.current.vertex_count()
    }

    pub fn is_complete(&self) -> bool {
        self.unsplit.is_empty()
    }

    /// The unsplit vertex that will be split next.
    pub fn next_to_split(&self) -> Option<VertexName> {
        self.split_order.front().copied()
    }

    /// True for the two copies of one split vertex.
    pub fn is_paired(&self, a: &VertexName, b: &VertexName) -> bool {
        self.split.contains(a) && self.split.contains(b) && a.sibling() == Some(*b)
    }

    /// Splits the next vertex in canonical order.
    pub fn split_next(&mut self) -> Result<ChangeLog, GrowError> {
        let u = self.split_order.pop_front().ok_or(GrowError::CycleComplete)?;
        let (u0, u1) = (u.child(false), u.child(true));
        let neighbours: Vec<(VertexName, u32)> =
            self.current.neighbors(&u).map(|(v, w)| (*v, w)).collect();
        let unsplit_nb: Vec<VertexName> = neighbours
            .iter()
            .filter(|(v, _)| self.unsplit.contains(v))
            .map(|(v, _)| *v)
            .collect();
        let mut pairs: BTreeMap<VertexName, Vec<VertexName>> = BTreeMap::new();
        for (v, _) in neighbours.iter().filter(|(v, _)| self.split.contains(v)) {
            pairs.entry(v.parent().expect("split names are nonempty")).or_default().push(*v);
        }
        let split_count: usize = pairs.values().map(Vec::len).sum();
        if let Some((p, _)) = pairs.iter().find(|(_, vs)| vs.len() != 2) {
            return Err(GrowError::Invariant {
                lemma: "split neighbours pair up",
                detail: format!("only one copy of {p} is adjacent to {u}"),
            });
        }

        self.current.rename(&u, u0)?;
        let mut rec = Recorder {
            g: &mut self.current,
            original: BTreeMap::new(),
        };
        for &v in &unsplit_nb {
            rec.set(u0, v, 1);
            rec.set(u1, v, 1);
        }
        for copies in pairs.values() {
            let (v, v_prime) = (copies[0], copies[1]);
            let w = rec.g.weight(&v, &v_prime);
            if w == 0 {
                return Err(GrowError::Invariant {
                    lemma: "paired-edge weight",
                    detail: format!("{v}-{v_prime} missing while {u} is unsplit"),
                });
            }
            rec.set(v, v_prime, w - 1);
            let (keep, moved) = if self.target.weight(&u0, &v) > 0 {
                (v, v_prime)
            } else {
                (v_prime, v)
            };
            rec.set(u0, keep, 2);
            rec.set(u0, moved, 0);
            rec.set(u1, moved, 2);
        }
        if !unsplit_nb.is_empty() {
            rec.set(u0, u1, unsplit_nb.len() as u32);
        }
        let changes = rec.finish();

        self.unsplit.remove(&u);
        self.split.insert(u0);
        self.split.insert(u1);

        let cost: u64 = changes
            .iter()
            .map(|c| (c.new as i64 - c.old as i64).unsigned_abs())
            .sum();
        let (uu, su) = (unsplit_nb.len(), split_count);
        if 2 * uu + su != self.d.get() as usize || su % 2 != 0 || cost != (3 * uu + 5 * su / 2) as u64 {
            return Err(GrowError::Invariant {
                lemma: "split cost",
                detail: format!("|U(u)| = {uu}, |S(u)| = {su}, cost = {cost}"),
            });
        }
        self.check_invariants()?;
        Ok(ChangeLog {
            u,
            u_prime: u1,
            changes,
            cost,
            unsplit_neighbors: uu,
            split_neighbors: su,
        })
    }

    /// Checks every structural invariant of the state.
    pub fn check_invariants(&self) -> Result<(), GrowError> {
        self.check_graph(&self.current)
    }

    /// Checks that `g` satisfies the structural invariants of this state's
    /// split partition.
    pub fn check_graph(&self, g: &WeightedMultigraph) -> Result<(), GrowError> {
        let fail = |lemma: &'static str, detail: String| Err(GrowError::Invariant { lemma, detail });
        let i = self.cycle;
        for v in g.vertices() {
            let (in_s, in_u) = (self.split.contains(v), self.unsplit.contains(v));
            if in_s == in_u {
                return fail("split partition", format!("{v} is in S: {in_s}, in U: {in_u}"));
            }
            let want = if in_s { i + 1 } else { i };
            if v.len() != want {
                return fail("split partition", format!("{v} should have {want} bits"));
            }
        }
        if self.split.len() + self.unsplit.len() != g.vertex_count() {
            return fail("split partition", "S and U do not cover the vertex set".into());
        }
        for v in g.vertices() {
            let deg = g.weighted_degree(v)?;
            if deg != self.d.get() {
                return fail("regular degree", format!("{v} has weighted degree {deg}"));
            }
        }
        for (a, b, w) in g.edges() {
            if self.is_paired(&a, &b) {
                continue;
            }
            let want = match (self.split.contains(&a), self.split.contains(&b)) {
                (true, true) | (false, false) => 2,
                _ => 1,
            };
            if w != want {
                return fail("weight classes", format!("{a}-{b} has weight {w}, expected {want}"));
            }
        }
        for v in self.split.iter().filter(|v| v.last_bit() == Some(false)) {
            let parent = v.parent().unwrap();
            let sibling = v.sibling().unwrap();
            let expect = self
                .base
                .neighbors(&parent)
                .filter(|(p, _)| self.unsplit.contains(p))
                .count() as u32;
            let w = g.weight(v, &sibling);
            if w != expect {
                return fail(
                    "paired-edge weight",
                    format!("{v}-{sibling} has weight {w}, parent has {expect} unsplit neighbours"),
                );
            }
        }
        Ok(())
    }

    /// Ends the cycle; the current graph must equal the target lift.
    pub fn finalize_cycle(self) -> Result<WeightedMultigraph, GrowError> {
        if !self.unsplit.is_empty() {
            return Err(GrowError::CycleIncomplete(self.unsplit.len()));
        }
        if self.current != self.target {
            let diff: Vec<String> = self
                .target
                .edges()
                .filter(|(a, b, w)| self.current.weight(a, b) != *w)
                .chain(self.current.edges().filter(|(a, b, _)| self.target.weight(a, b) == 0))
                .take(8)
                .map(|(a, b, _)| format!("{a}-{b}: {} vs {}", self.current.weight(&a, &b), self.target.weight(&a, &b)))
                .collect();
            return Err(GrowError::Invariant {
                lemma: "cycle closure",
                detail: format!("final graph differs from the target lift: {}", diff.join(", ")),
            });
        }
        Ok(self.target)
    }
}

/// The deterministic sequence `G_{d/2+1}, G_{d/2+2}, ...`.
///
/// Lifts are computed lazily: reaching `G*_{i+1}` closes the cycle but the next
/// target is only searched for when a further step or the state is requested.
#[derive(Clone, Debug)]
pub struct Sequence {
    params: LiftParams,
    seed: u64,
    state: Option<GrowthState>,
    closed: Option<WeightedMultigraph>,
}

impl Sequence {
    pub fn new(d: u32, seed: u64) -> Result<Self, GrowError> {
        let degree = Degree::new(d)?;
        Self::with_params(d, LiftParams::for_degree(degree, seed))
    }

    /// `params.seed` is the sequence seed; each cycle derives its own.
    pub fn with_params(d: u32, params: LiftParams) -> Result<Self, GrowError> {
        Ok(Sequence {
            seed: params.seed,
            params,
            state: None,
            closed: Some(initial_graph(d)?),
        })
    }

    pub fn graph(&self) -> &WeightedMultigraph {
        match (&self.closed, &self.state) {
            (Some(g), _) => g,
            (None, Some(s)) => s.current(),
            (None, None) => unreachable!("sequence always holds a graph"),
        }
    }

    pub fn n(&self) -> usize {
        self.graph().vertex_count()
    }

    pub fn degree(&self) -> Degree {
        self.graph().degree_target()
    }

    /// The growth state for the current `n`, starting a cycle if needed.
    pub fn state(&mut self) -> Result<&GrowthState, GrowError> {
        self.open_cycle()?;
        Ok(self.state.as_ref().unwrap())
    }

    fn open_cycle(&mut self) -> Result<(), GrowError> {
        if let Some(g_star) = self.closed.take() {
            let cycle = g_star.vertices().next().map_or(0, |v| v.len());
            let params = self.params.with_seed(cycle_seed(self.seed, cycle));
            match GrowthState::begin(g_star.clone(), &params) {
                Ok(state) => self.state = Some(state),
                Err(e) => {
                    self.closed = Some(g_star);
                    return Err(e);
                }
            }
        }
        Ok(())
    }

    /// Adds one vertex.
    pub fn advance(&mut self) -> Result<ChangeLog, GrowError> {
        self.open_cycle()?;
        let state = self.state.as_mut().unwrap();
        let log = state.split_next()?;
        if state.is_complete() {
            let done = self.state.take().unwrap();
            self.closed = Some(done.finalize_cycle()?);
        }
        Ok(log)
    }

    /// Advances until the graph has `n` vertices.
    pub fn grow_to(&mut self, n: usize) -> Result<(), GrowError> {
        if n < self.n() {
            return Err(GrowError::InvalidSize { n, min: self.n() });
        }
        while self.n() < n {
            self.advance()?;
        }
        Ok(())
    }
}

/// `G_n` of the sequence seeded with `seed`.
pub fn graph_at(d: u32, n: usize, seed: u64) -> Result<WeightedMultigraph, GrowError> {
    let mut seq = Sequence::new(d, seed)?;
    check_size(&seq, n)?;
    seq.grow_to(n)?;
    Ok(seq.graph().clone())
}

/// Growth state with `current = G_n`. At a doubling boundary this is the start
/// of the next cycle.
pub fn state_at(d: u32, n: usize, seed: u64) -> Result<GrowthState, GrowError> {
    let mut seq = Sequence::new(d, seed)?;
    check_size(&seq, n)?;
    seq.grow_to(n)?;
    Ok(seq.state()?.clone())
}

fn check_size(seq: &Sequence, n: usize) -> Result<(), GrowError> {
    let min = seq.degree().base_size();
    if n < min {
        return Err(GrowError::InvalidSize { n, min });
    }
    Ok(())
}

/// Every graph and change log of a sequence up to some size, built on demand.
#[derive(Clone, Debug)]
pub struct SequenceCache {
    seq: Sequence,
    graphs: Vec<WeightedMultigraph>,
    logs: Vec<ChangeLog>,
    doubled: Vec<WeightedMultigraph>,
}

impl SequenceCache {
    pub fn new(d: u32, seed: u64) -> Result<Self, GrowError> {
        let seq = Sequence::new(d, seed)?;
        Ok(SequenceCache {
            graphs: vec![seq.graph().clone()],
            doubled: vec![seq.graph().clone()],
            logs: Vec::new(),
            seq,
        })
    }

    pub fn min_n(&self) -> usize {
        self.graphs[0].vertex_count()
    }

    fn extend_to(&mut self, n: usize) -> Result<(), GrowError> {
        if n < self.min_n() {
            return Err(GrowError::InvalidSize { n, min: self.min_n() });
        }
        while self.seq.n() < n {
            let log = self.seq.advance()?;
            self.logs.push(log);
            self.graphs.push(self.seq.graph().clone());
            if self.seq.n() == self.min_n() << self.doubled.len() {
                self.doubled.push(self.seq.graph().clone());
            }
        }
        Ok(())
    }

    /// `G_n`.
    pub fn graph(&mut self, n: usize) -> Result<&WeightedMultigraph, GrowError> {
        self.extend_to(n)?;
        Ok(&self.graphs[n - self.min_n()])
    }

    /// The split that produced `G_n` from `G_{n-1}`.
    pub fn log(&mut self, n: usize) -> Result<&ChangeLog, GrowError> {
        if n <= self.min_n() {
            return Err(GrowError::InvalidSize { n, min: self.min_n() + 1 });
        }
        self.extend_to(n)?;
        Ok(&self.logs[n - self.min_n() - 1])
    }

    /// `G*_i`.
    pub fn doubled(&mut self, i: u8) -> Result<&WeightedMultigraph, GrowError> {
        self.extend_to(self.min_n() << i)?;
        Ok(&self.doubled[i as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{expansion_cost, graphs_equal};

    #[test]
    fn initial_graph_is_doubled_clique() {
        let g = initial_graph(6).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.edges().all(|(_, _, w)| w == 2));
        for v in g.vertices() {
            assert_eq!(g.weighted_degree(v).unwrap(), 6);
        }
        let g = initial_graph(10).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert!(g.vertices().all(|v| g.weighted_degree(v).unwrap() == 10));
        assert!(initial_graph(5).is_err());
    }

    #[test]
    fn first_split_at_d6() {
        let mut state = begin_cycle(initial_graph(6).unwrap(), 3).unwrap();
        assert_eq!(state.unsplit_set().len(), 4);
        assert_eq!(state.target().vertex_count(), 8);
        let before = state.current().clone();
        let log = state.split_next().unwrap();
        assert_eq!((log.unsplit_neighbors, log.split_neighbors, log.cost), (3, 0, 9));
        assert_eq!(expansion_cost(&before, state.current()), 9);
        assert_eq!(state.current().weight(&log.u_zero(), &log.u_prime), 3);
        for v in state.current().vertices() {
            assert_eq!(state.current().weighted_degree(v).unwrap(), 6);
        }
    }

    #[test]
    fn full_cycle_ends_at_target() {
        let mut state = begin_cycle(initial_graph(6).unwrap(), 3).unwrap();
        let mut costs = Vec::new();
        while !state.is_complete() {
            let before = state.current().clone();
            let log = state.split_next().unwrap();
            assert_eq!(expansion_cost(&before, state.current()), log.cost);
            costs.push(log.cost);
        }
        assert_eq!(costs.last(), Some(&15));
        assert!(costs.iter().all(|&c| c <= 15));
        let target = state.target().clone();
        let h = state.finalize_cycle().unwrap();
        assert!(graphs_equal(&h, &target));
        assert!(h.vertices().all(|v| v.len() == 1));
    }

    #[test]
    fn split_past_end_signals_completion() {
        let mut state = begin_cycle(initial_graph(6).unwrap(), 0).unwrap();
        for _ in 0..4 {
            state.split_next().unwrap();
        }
        assert_eq!(state.split_next(), Err(GrowError::CycleComplete));
    }

    #[test]
    fn finalize_early_is_rejected() {
        let mut state = begin_cycle(initial_graph(6).unwrap(), 0).unwrap();
        state.split_next().unwrap();
        assert_eq!(state.finalize_cycle(), Err(GrowError::CycleIncomplete(3)));
    }

    #[test]
    fn begin_cycle_is_deterministic() {
        let a = begin_cycle(initial_graph(8).unwrap(), 9).unwrap();
        let b = begin_cycle(initial_graph(8).unwrap(), 9).unwrap();
        assert!(graphs_equal(a.target(), b.target()));
    }

    #[test]
    fn graph_at_base_and_boundary() {
        assert!(graphs_equal(&graph_at(6, 4, 1).unwrap(), &initial_graph(6).unwrap()));
        let g8 = graph_at(6, 8, 1).unwrap();
        assert!(g8.edges().all(|(_, _, w)| w == 2));
        let g7 = graph_at(6, 7, 1).unwrap();
        assert!(expansion_cost(&g7, &g8) <= 15);
        assert!(matches!(graph_at(6, 3, 1), Err(GrowError::InvalidSize { .. })));
    }

    #[test]
    fn boundary_state_is_a_fresh_cycle() {
        let s = state_at(6, 8, 1).unwrap();
        assert!(s.split_set().is_empty());
        assert_eq!(s.cycle(), 1);
        assert_eq!(s.target().vertex_count(), 16);
    }

    #[test]
    fn cache_agrees_with_graph_at() {
        let mut cache = SequenceCache::new(6, 5).unwrap();
        for n in 4..=17 {
            assert!(graphs_equal(cache.graph(n).unwrap(), &graph_at(6, n, 5).unwrap()));
        }
        assert_eq!(cache.doubled(2).unwrap().vertex_count(), 16);
        assert_eq!(cache.log(5).unwrap().cost, 9);
    }

    #[test]
    fn change_log_json_field_names() {
        let mut state = begin_cycle(initial_graph(6).unwrap(), 0).unwrap();
        let log = state.split_next().unwrap();
        let json = serde_json::to_value(&log).unwrap();
        for key in ["u", "u_prime", "changes", "cost", "U_u", "S_u"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["u"], "0:");
        assert_eq!(json["u_prime"], "0:1");
    }
}
