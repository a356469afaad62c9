//! Integer-weighted multigraphs keyed by [`VertexName`].

use std::collections::{BTreeMap, BTreeSet};

use crate::error::GraphError;
use crate::name::VertexName;

/// Even degree target, at least 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(u32);

impl Degree {
    pub fn new(d: u32) -> Result<Self, GraphError> {
        if d < 6 || !d.is_multiple_of(2) {
            return Err(GraphError::InvalidDegree(d));
        }
        Ok(Degree(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `d/2`, the degree of the underlying simple graphs.
    pub fn half(self) -> u32 {
        self.0 / 2
    }

    /// Size of the base clique, `d/2 + 1`.
    pub fn base_size(self) -> usize {
        (self.0 / 2 + 1) as usize
    }
}

/// Canonical unordered vertex pair: `lo < hi`.
pub fn edge_key(a: VertexName, b: VertexName) -> (VertexName, VertexName) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Undirected multigraph without self-loops, stored as a weighted simple graph.
///
/// The degree target is a label carried with the graph (and written to graph
/// files); edge mutation does not enforce it. Weight-0 entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMultigraph {
    degree: Degree,
    adj: BTreeMap<VertexName, BTreeMap<VertexName, u32>>,
}

impl WeightedMultigraph {
    pub fn new(degree: Degree) -> Self {
        WeightedMultigraph {
            degree,
            adj: BTreeMap::new(),
        }
    }

    pub fn degree_target(&self) -> Degree {
        self.degree
    }

    pub fn d(&self) -> u32 {
        self.degree.get()
    }

    pub fn add_vertex(&mut self, v: VertexName) {
        self.adj.entry(v).or_default();
    }

    pub fn remove_vertex(&mut self, v: &VertexName) {
        if let Some(nbrs) = self.adj.remove(v) {
            for u in nbrs.keys() {
                if let Some(row) = self.adj.get_mut(u) {
                    row.remove(v);
                }
            }
        }
    }

    pub fn contains(&self, v: &VertexName) -> bool {
        self.adj.contains_key(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Vertices in canonical order.
    pub fn vertices(&self) -> impl Iterator<Item = &VertexName> + '_ {
        self.adj.keys()
    }

    pub fn weight(&self, a: &VertexName, b: &VertexName) -> u32 {
        self.adj
            .get(a)
            .and_then(|row| row.get(b))
            .copied()
            .unwrap_or(0)
    }

    /// Sets the weight of `{a, b}`, adding missing endpoints. Weight 0 removes the edge.
    pub fn set_weight(&mut self, a: VertexName, b: VertexName, w: u32) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if w == 0 {
            if let Some(row) = self.adj.get_mut(&a) {
                row.remove(&b);
            }
            if let Some(row) = self.adj.get_mut(&b) {
                row.remove(&a);
            }
            return Ok(());
        }
        self.adj.entry(a).or_default().insert(b, w);
        self.adj.entry(b).or_default().insert(a, w);
        Ok(())
    }

    /// Neighbours of `v` with their edge weights, in canonical order.
    pub fn neighbors(&self, v: &VertexName) -> impl Iterator<Item = (&VertexName, u32)> + '_ {
        self.adj
            .get(v)
            .into_iter()
            .flat_map(|row| row.iter().map(|(u, w)| (u, *w)))
    }

    pub fn weighted_degree(&self, v: &VertexName) -> Result<u32, GraphError> {
        self.adj
            .get(v)
            .map(|row| row.values().sum())
            .ok_or(GraphError::UnknownVertex(*v))
    }

    /// Number of distinct neighbours (degree of the unweighted projection).
    pub fn simple_degree(&self, v: &VertexName) -> usize {
        self.adj.get(v).map_or(0, |row| row.len())
    }

    /// Edges `(lo, hi, w)` in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexName, VertexName, u32)> + '_ {
        self.adj.iter().flat_map(|(a, row)| {
            row.range((std::ops::Bound::Excluded(*a), std::ops::Bound::Unbounded))
                .map(move |(b, w)| (*a, *b, *w))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges().map(|(_, _, w)| w as u64).sum()
    }

    /// Canonical position of every vertex.
    pub fn index(&self) -> BTreeMap<VertexName, usize> {
        self.adj.keys().enumerate().map(|(i, v)| (*v, i)).collect()
    }

    pub fn adjacency_matrix(&self) -> AdjacencyMatrix {
        let order: Vec<VertexName> = self.adj.keys().copied().collect();
        self.adjacency_matrix_in(&order)
            .expect("canonical order covers every vertex")
    }

    /// Adjacency matrix with rows in the given order.
    pub fn adjacency_matrix_in(&self, order: &[VertexName]) -> Result<AdjacencyMatrix, GraphError> {
        let pos: BTreeMap<VertexName, usize> =
            order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        if let Some(v) = self.adj.keys().find(|v| !pos.contains_key(v)) {
            return Err(GraphError::UnknownVertex(*v));
        }
        let n = order.len();
        let mut entries = vec![0u32; n * n];
        for (a, b, w) in self.edges() {
            let (i, j) = (pos[&a], pos[&b]);
            entries[i * n + j] = w;
            entries[j * n + i] = w;
        }
        Ok(AdjacencyMatrix {
            order: order.to_vec(),
            entries,
        })
    }

    /// Every nonzero weight set to 1.
    pub fn unweighted(&self) -> WeightedMultigraph {
        let mut out = self.clone();
        for row in out.adj.values_mut() {
            for w in row.values_mut() {
                *w = 1;
            }
        }
        out
    }

    /// Every weight multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> WeightedMultigraph {
        let mut out = self.clone();
        for row in out.adj.values_mut() {
            for w in row.values_mut() {
                *w *= factor;
            }
        }
        out
    }

    pub fn with_degree(mut self, degree: Degree) -> Self {
        self.degree = degree;
        self
    }

    /// Renames one vertex, keeping its edges.
    pub fn rename(&mut self, from: &VertexName, to: VertexName) -> Result<(), GraphError> {
        let row = self
            .adj
            .remove(from)
            .ok_or(GraphError::UnknownVertex(*from))?;
        for (u, w) in &row {
            let other = self.adj.get_mut(u).expect("symmetric adjacency");
            other.remove(from);
            other.insert(to, *w);
        }
        self.adj.insert(to, row);
        Ok(())
    }

    /// Total weight between two vertex sets (each pair counted once).
    pub fn weight_between(&self, a: &BTreeSet<VertexName>, b: &BTreeSet<VertexName>) -> u64 {
        a.iter()
            .flat_map(|x| self.neighbors(x).filter(|(y, _)| b.contains(y)))
            .map(|(_, w)| w as u64)
            .sum()
    }

    /// Total weight leaving `set`.
    pub fn cut_weight(&self, set: &BTreeSet<VertexName>) -> u64 {
        set.iter()
            .flat_map(|x| self.neighbors(x).filter(|(y, _)| !set.contains(y)))
            .map(|(_, w)| w as u64)
            .sum()
    }
}

/// Weighted degree of `v`.
pub fn weighted_degree(g: &WeightedMultigraph, v: &VertexName) -> Result<u32, GraphError> {
    g.weighted_degree(v)
}

/// Identical vertex sets and identical weight maps.
pub fn graphs_equal(g1: &WeightedMultigraph, g2: &WeightedMultigraph) -> bool {
    g1.adj == g2.adj
}

/// Total change in edge weight between two graphs, `sum |w1(e) - w2(e)|`.
///
/// Vertices are matched by split identity ([`VertexName::same_vertex`]): a vertex
/// that became its own `0`-copy is the same vertex in both graphs.
pub fn expansion_cost(g1: &WeightedMultigraph, g2: &WeightedMultigraph) -> u64 {
    let keyed = |g: &WeightedMultigraph| -> BTreeMap<((u32, u64), (u32, u64)), u32> {
        g.edges()
            .map(|(a, b, w)| {
                let (x, y) = (a.identity(), b.identity());
                (if x <= y { (x, y) } else { (y, x) }, w)
            })
            .collect()
    };
    let (w1, w2) = (keyed(g1), keyed(g2));
    let mut cost = 0u64;
    for (e, &a) in &w1 {
        cost += (a as i64 - *w2.get(e).unwrap_or(&0) as i64).unsigned_abs();
    }
    for (e, &b) in &w2 {
        if !w1.contains_key(e) {
            cost += b as u64;
        }
    }
    cost
}

/// Dense symmetric integer adjacency matrix with its row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    order: Vec<VertexName>,
    entries: Vec<u32>,
}

impl AdjacencyMatrix {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[VertexName] {
        &self.order
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n() + j]
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        let n = self.n();
        self.entries[i * n..(i + 1) * n].iter().map(|&w| w as u64).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Row-major entries as `f64`.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&w| w as f64).collect()
    }
}

/// Simple undirected graph; the base of a 2-lift.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimpleGraph {
    vertices: BTreeSet<VertexName>,
    edges: BTreeSet<(VertexName, VertexName)>,
}

impl SimpleGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: VertexName) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, a: VertexName, b: VertexName) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        self.vertices.insert(a);
        self.vertices.insert(b);
        self.edges.insert(edge_key(a, b));
        Ok(())
    }

    pub fn vertices(&self) -> &BTreeSet<VertexName> {
        &self.vertices
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &BTreeSet<(VertexName, VertexName)> {
        &self.edges
    }

    pub fn has_edge(&self, a: &VertexName, b: &VertexName) -> bool {
        self.edges.contains(&edge_key(*a, *b))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn degrees(&self) -> BTreeMap<VertexName, usize> {
        let mut deg: BTreeMap<VertexName, usize> =
            self.vertices.iter().map(|v| (*v, 0)).collect();
        for (a, b) in &self.edges {
            *deg.get_mut(a).unwrap() += 1;
            *deg.get_mut(b).unwrap() += 1;
        }
        deg
    }

    /// Common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let first = *deg.values().next()?;
        deg.values().all(|&k| k == first).then_some(first)
    }

    /// Every edge with the same weight, labelled with `degree`.
    pub fn to_weighted(&self, weight: u32, degree: Degree) -> WeightedMultigraph {
        let mut g = WeightedMultigraph::new(degree);
        for v in &self.vertices {
            g.add_vertex(*v);
        }
        for (a, b) in &self.edges {
            g.set_weight(*a, *b, weight).expect("no self-loops");
        }
        g
    }

    /// Support of a weighted graph.
    pub fn support_of(g: &WeightedMultigraph) -> SimpleGraph {
        let mut s = SimpleGraph::new();
        for v in g.vertices() {
            s.add_vertex(*v);
        }
        for (a, b, _) in g.edges() {
            s.edges.insert((a, b));
        }
        s
    }

    pub fn adjacency_matrix(&self) -> AdjacencyMatrix {
        let order: Vec<VertexName> = self.vertices.iter().copied().collect();
        let pos: BTreeMap<VertexName, usize> =
            order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let n = order.len();
        let mut entries = vec![0u32; n * n];
        for (a, b) in &self.edges {
            let (i, j) = (pos[a], pos[b]);
            entries[i * n + j] = 1;
            entries[j * n + i] = 1;
        }
        AdjacencyMatrix { order, entries }
    }
}
