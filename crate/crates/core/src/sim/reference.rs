//! Deterministic knowledge every node can compute locally.
//!
//! Given `d` and the lift seed, any node can reconstruct `G_n` for every `n`,
//! the split between consecutive graphs and the recovery plans. The cache is
//! shared by all simulated nodes only to avoid recomputing it per node.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::rc::Rc;

use crate::error::SimError;
use crate::graph::{SimpleGraph, WeightedMultigraph};
use crate::grower::{ChangeLog, SequenceCache};
use crate::name::VertexName;

use super::plan::{DeletionPlan, InsertionPlan};

/// The simple graph `G*_L` used as a routing map.
#[derive(Clone, Debug)]
pub struct View {
    pub names: Vec<VertexName>,
    pub index: BTreeMap<VertexName, usize>,
    pub adj: Vec<Vec<usize>>,
}

impl View {
    fn new(g: &WeightedMultigraph) -> Self {
        let simple = SimpleGraph::support_of(g);
        let names: Vec<VertexName> = simple.vertices().iter().copied().collect();
        let index: BTreeMap<VertexName, usize> = names.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut adj = vec![Vec::new(); names.len()];
        for (a, b) in simple.edges() {
            adj[index[a]].push(index[b]);
            adj[index[b]].push(index[a]);
        }
        View { names, index, adj }
    }

    /// View vertices that descend from `v` (or `v`'s ancestor at this level).
    pub fn reps(&self, v: &VertexName) -> Vec<usize> {
        let level = self.names[0].len();
        if v.len() >= level {
            return self.index.get(&v.truncate(level)).into_iter().copied().collect();
        }
        let lo = v.zero_extend(level);
        self.index.range(lo..).take_while(|(w, _)| v.is_prefix_of(w)).map(|(_, i)| *i).collect()
    }
}

type DistKey = (u8, VertexName, Option<VertexName>);

pub struct Reference {
    d: u32,
    cache: SequenceCache,
    views: HashMap<u8, Rc<View>>,
    dists: HashMap<DistKey, Rc<Vec<u32>>>,
    unweighted: HashMap<usize, Rc<WeightedMultigraph>>,
    insertions: HashMap<usize, Rc<InsertionPlan>>,
    deletions: HashMap<(usize, VertexName), Rc<DeletionPlan>>,
}

impl Reference {
    pub fn new(d: u32, seed: u64) -> Result<Self, SimError> {
        Ok(Reference {
            d,
            cache: SequenceCache::new(d, seed)?,
            views: HashMap::new(),
            dists: HashMap::new(),
            unweighted: HashMap::new(),
            insertions: HashMap::new(),
            deletions: HashMap::new(),
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn min_n(&self) -> usize {
        self.cache.min_n()
    }

    /// Weighted `G_n`.
    pub fn graph(&mut self, n: usize) -> Result<&WeightedMultigraph, SimError> {
        Ok(self.cache.graph(n)?)
    }

    /// Unweighted projection of `G_n`.
    pub fn simple(&mut self, n: usize) -> Result<Rc<WeightedMultigraph>, SimError> {
        if let Some(g) = self.unweighted.get(&n) {
            return Ok(g.clone());
        }
        let g = Rc::new(self.cache.graph(n)?.unweighted());
        self.unweighted.insert(n, g.clone());
        Ok(g)
    }

    pub fn log(&mut self, n: usize) -> Result<ChangeLog, SimError> {
        Ok(self.cache.log(n)?.clone())
    }

    pub fn insertion_plan(&mut self, n: usize) -> Result<Rc<InsertionPlan>, SimError> {
        if let Some(p) = self.insertions.get(&n) {
            return Ok(p.clone());
        }
        let (before, after, log) = (self.simple(n - 1)?, self.simple(n)?, self.log(n)?);
        let plan = Rc::new(InsertionPlan::compute(&before, &after, &log).map_err(SimError::Protocol)?);
        self.insertions.insert(n, plan.clone());
        Ok(plan)
    }

    /// Plan for deleting `victim` from `G_n`.
    pub fn deletion_plan(&mut self, n: usize, victim: VertexName) -> Result<Rc<DeletionPlan>, SimError> {
        if let Some(p) = self.deletions.get(&(n, victim)) {
            return Ok(p.clone());
        }
        let (before, after, log) = (self.simple(n)?, self.simple(n - 1)?, self.log(n)?);
        let plan = Rc::new(DeletionPlan::compute(&before, &after, &log, victim).map_err(SimError::Protocol)?);
        self.deletions.insert((n, victim), plan.clone());
        Ok(plan)
    }

    pub fn view(&mut self, level: u8) -> Result<Rc<View>, SimError> {
        if let Some(v) = self.views.get(&level) {
            return Ok(v.clone());
        }
        let v = Rc::new(View::new(self.cache.doubled(level)?));
        self.views.insert(level, v.clone());
        Ok(v)
    }

    /// BFS distance in the level-`level` view from every vertex to the image
    /// of `target`, with the image of `avoid` removed. Unreachable is `u32::MAX`.
    pub fn distances(&mut self, level: u8, target: VertexName, avoid: Option<VertexName>) -> Result<Rc<Vec<u32>>, SimError> {
        let key = (level, target, avoid);
        if let Some(d) = self.dists.get(&key) {
            return Ok(d.clone());
        }
        let view = self.view(level)?;
        let mut dist = vec![u32::MAX; view.names.len()];
        let mut blocked = vec![false; view.names.len()];
        if let Some(a) = avoid {
            for i in view.reps(&a) {
                blocked[i] = true;
            }
        }
        let mut queue = VecDeque::new();
        let start = if target.len() >= level {
            target.truncate(level)
        } else {
            target.zero_extend(level)
        };
        if let Some(&s) = view.index.get(&start) {
            if !blocked[s] {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &view.adj[v] {
                if !blocked[w] && dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let dist = Rc::new(dist);
        self.dists.insert(key, dist.clone());
        Ok(dist)
    }
}
