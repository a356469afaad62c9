//! Edge changes each participant performs during a recovery.
//!
//! Plans are pure functions of the reference graphs and the names involved, so
//! every participant computes the same plan locally and executes its own part.
//! Targets are identified by their name before the recovery; a plan also
//! records which names each executor can resolve to an ext id, and
//! construction fails if an executor would need an ext id it cannot know.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{edge_key, WeightedMultigraph};
use crate::grower::ChangeLog;
use crate::name::VertexName;

type Edge = (VertexName, VertexName);

fn edge_set(g: &WeightedMultigraph) -> BTreeSet<Edge> {
    g.edges().map(|(a, b, _)| (a, b)).collect()
}

fn neighbours(g: &WeightedMultigraph, v: &VertexName) -> BTreeSet<VertexName> {
    g.neighbors(v).map(|(u, _)| *u).collect()
}

/// What the two ends of an insertion do, in `G_n` names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionPlan {
    /// The vertex being split, by its old name.
    pub p: VertexName,
    pub p_zero: VertexName,
    pub new_name: VertexName,
    /// Edges the new vertex creates.
    pub new_edges: Vec<VertexName>,
    /// Old neighbours of `p` that stay adjacent and learn its new name.
    pub refresh: Vec<VertexName>,
    /// Old neighbours of `p` it disconnects from.
    pub drops: Vec<VertexName>,
    /// `(keeper, peer)`: `p` tells `keeper` to drop its edge to `peer`.
    pub pair_drops: Vec<(VertexName, VertexName)>,
}

impl InsertionPlan {
    /// `before` is `G_{n-1}`, `after` is `G_n`, `log` the split between them.
    pub fn compute(before: &WeightedMultigraph, after: &WeightedMultigraph, log: &ChangeLog) -> Result<Self, String> {
        let p = log.u;
        let (p0, x) = (log.u_zero(), log.u_prime);
        let old = neighbours(before, &p);
        let new_p = neighbours(after, &p0);
        let new_edges: Vec<VertexName> = neighbours(after, &x).into_iter().collect();
        for y in &new_edges {
            if *y != p0 && !old.contains(y) {
                return Err(format!("new vertex {x} needs {y}, which {p} does not know"));
            }
        }
        let refresh: Vec<VertexName> = old.iter().filter(|y| new_p.contains(y)).copied().collect();
        let drops: Vec<VertexName> = old.iter().filter(|y| !new_p.contains(y)).copied().collect();
        let renamed = |v: &VertexName| if *v == p { p0 } else { *v };
        let after_edges = edge_set(after);
        let mut pair_drops = Vec::new();
        for (a, b) in edge_set(before) {
            if a == p || b == p || after_edges.contains(&edge_key(renamed(&a), renamed(&b))) {
                continue;
            }
            let pair = if refresh.contains(&a) && old.contains(&b) {
                (a, b)
            } else if refresh.contains(&b) && old.contains(&a) {
                (b, a)
            } else {
                return Err(format!("edge {a}-{b} disappears but {p} cannot reach it"));
            };
            pair_drops.push(pair);
        }
        Ok(InsertionPlan {
            p,
            p_zero: p0,
            new_name: x,
            new_edges,
            refresh,
            drops,
            pair_drops,
        })
    }
}

/// One edge operation of a deletion recovery.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DeletionOp {
    /// Create an edge by messaging the peer's ext id directly.
    Make { peer: VertexName },
    /// Remove an existing edge.
    Drop { peer: VertexName },
    /// Tell an existing neighbour the executor's new name; optionally ask it
    /// to create an edge to `connect`.
    Refresh { peer: VertexName, connect: Option<VertexName> },
}

/// Deletion recovery: the newest vertex `x` takes the deleted vertex's place
/// and the split that created `x` is undone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionPlan {
    pub deleted: VertexName,
    /// Newest vertex of `G_n`.
    pub x: VertexName,
    /// Its split partner.
    pub sibling: VertexName,
    /// Name every surviving vertex has afterwards.
    pub final_names: BTreeMap<VertexName, VertexName>,
    /// Operations per executor, in send order.
    pub ops: BTreeMap<VertexName, Vec<DeletionOp>>,
    /// Vertices whose ext id each executor must resolve.
    pub knowledge: BTreeMap<VertexName, BTreeSet<VertexName>>,
    /// Split neighbours of `x` (the edges it took over from the sibling),
    /// whose ext ids it forwards to the sibling.
    pub forwarded: Vec<VertexName>,
}

impl DeletionPlan {
    /// The sibling undoes the split when it survives, otherwise `x` does.
    pub fn undo_actor(&self) -> VertexName {
        if self.deleted == self.sibling {
            self.x
        } else {
            self.sibling
        }
    }

    pub fn x_alive(&self) -> bool {
        self.deleted != self.x
    }

    /// `before` is `G_n`, `after` is `G_{n-1}`, `log` the split that produced `G_n`.
    pub fn compute(
        before: &WeightedMultigraph,
        after: &WeightedMultigraph,
        log: &ChangeLog,
        deleted: VertexName,
    ) -> Result<Self, String> {
        if !before.contains(&deleted) {
            return Err(format!("{deleted} is not a vertex of G_n"));
        }
        let (p, x, s) = (log.u, log.u_prime, log.u_zero());
        let u = deleted;
        let u_old_name = if u == s { p } else { u };
        let final_of = |y: &VertexName| -> VertexName {
            if *y == s {
                p
            } else if *y == x {
                u_old_name
            } else {
                *y
            }
        };
        let alive: Vec<VertexName> = before.vertices().filter(|v| **v != u).copied().collect();
        let final_names: BTreeMap<VertexName, VertexName> = alive.iter().map(|y| (*y, final_of(y))).collect();
        let by_final: BTreeMap<VertexName, VertexName> = final_names.iter().map(|(a, b)| (*b, *a)).collect();
        let target: BTreeSet<VertexName> = after.vertices().copied().collect();
        if by_final.len() != alive.len() || by_final.keys().copied().collect::<BTreeSet<_>>() != target {
            return Err("survivor renaming does not match G_{n-1}".into());
        }

        let current: BTreeSet<Edge> = edge_set(before)
            .into_iter()
            .filter(|(a, b)| *a != u && *b != u)
            .map(|(a, b)| edge_key(final_of(&a), final_of(&b)))
            .collect();
        let wanted = edge_set(after);

        let nb = |v: &VertexName| -> BTreeSet<VertexName> { neighbours(before, v) };
        let x_alive = u != x;
        let s_alive = u != s;
        let mut knowledge: BTreeMap<VertexName, BTreeSet<VertexName>> = BTreeMap::new();
        let forwarded: Vec<VertexName> = before
            .neighbors(&x)
            .map(|(y, _)| *y)
            .filter(|y| *y != s && *y != u && y.len() == x.len())
            .collect();
        if x_alive {
            let mut k: BTreeSet<VertexName> = nb(&x).union(&nb(&u)).copied().collect();
            if s_alive {
                k.insert(s);
            }
            k.remove(&u);
            k.remove(&x);
            knowledge.insert(x, k);
        }
        if s_alive {
            let mut k = nb(&s);
            if x_alive {
                k.insert(x);
                k.extend(forwarded.iter().copied());
            } else {
                k.extend(nb(&u));
            }
            k.remove(&u);
            k.remove(&s);
            knowledge.insert(s, k);
        }
        let undo = if s_alive { s } else { x };
        let knows = |who: &VertexName, y: &VertexName| knowledge.get(who).is_some_and(|k| k.contains(y));
        let renamed: Vec<VertexName> = [x, s].into_iter().filter(|v| *v != u).collect();

        let mut ops: BTreeMap<VertexName, Vec<DeletionOp>> = BTreeMap::new();
        let mut refresh: BTreeMap<(VertexName, VertexName), Option<VertexName>> = BTreeMap::new();
        for (a, b) in current.intersection(&wanted) {
            let (ga, gb) = (by_final[a], by_final[b]);
            for (me, other) in [(ga, gb), (gb, ga)] {
                if renamed.contains(&me) {
                    refresh.insert((me, other), None);
                }
            }
        }
        let mut makes: Vec<(VertexName, VertexName)> = Vec::new();
        for (a, b) in wanted.difference(&current) {
            let (ga, gb) = (by_final[a], by_final[b]);
            let direct = [x, s]
                .into_iter()
                .filter(|e| *e != u)
                .find_map(|e| {
                    if ga == e && knows(&e, &gb) {
                        Some((e, gb))
                    } else if gb == e && knows(&e, &ga) {
                        Some((e, ga))
                    } else {
                        None
                    }
                });
            if let Some(m) = direct {
                makes.push(m);
                continue;
            }
            let via = [(ga, gb), (gb, ga)]
                .into_iter()
                .find(|(near, far)| refresh.contains_key(&(undo, *near)) && knows(&undo, far));
            match via {
                Some((near, far)) => {
                    let slot = refresh.get_mut(&(undo, near)).unwrap();
                    if slot.is_some() {
                        return Err(format!("{undo} already asks {near} for one edge"));
                    }
                    *slot = Some(far);
                }
                None => return Err(format!("nobody can create {a}-{b}")),
            }
        }
        for ((me, peer), connect) in refresh {
            ops.entry(me).or_default().push(DeletionOp::Refresh { peer, connect });
        }
        for (me, peer) in makes {
            ops.entry(me).or_default().push(DeletionOp::Make { peer });
        }
        for (a, b) in current.difference(&wanted) {
            let (ga, gb) = (by_final[a], by_final[b]);
            let (me, peer) = if x_alive && (ga == x || gb == x) {
                if ga == x { (ga, gb) } else { (gb, ga) }
            } else if s_alive && (ga == s || gb == s) {
                if ga == s { (ga, gb) } else { (gb, ga) }
            } else {
                return Err(format!("nobody can drop {a}-{b}"));
            };
            ops.entry(me).or_default().push(DeletionOp::Drop { peer });
        }
        Ok(DeletionPlan {
            deleted: u,
            x,
            sibling: s,
            final_names,
            ops,
            knowledge,
            forwarded,
        })
    }

    /// Applies the plan to `G_n` minus the deleted vertex, in final names.
    pub fn apply(&self, before: &WeightedMultigraph) -> BTreeSet<Edge> {
        let f = |y: &VertexName| self.final_names[y];
        let mut edges: BTreeSet<Edge> = edge_set(before)
            .into_iter()
            .filter(|(a, b)| *a != self.deleted && *b != self.deleted)
            .map(|(a, b)| edge_key(f(&a), f(&b)))
            .collect();
        for (me, list) in &self.ops {
            for op in list {
                match op {
                    DeletionOp::Make { peer } => {
                        edges.insert(edge_key(f(me), f(peer)));
                    }
                    DeletionOp::Drop { peer } => {
                        edges.remove(&edge_key(f(me), f(peer)));
                    }
                    DeletionOp::Refresh { peer, connect } => {
                        if let Some(c) = connect {
                            edges.insert(edge_key(f(peer), f(c)));
                        }
                    }
                }
            }
        }
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grower::SequenceCache;

    #[test]
    fn insertion_plans_reproduce_every_step() {
        for d in [6, 8, 10] {
            let mut cache = SequenceCache::new(d, 3).unwrap();
            let min = cache.min_n();
            for n in (min + 1)..=(4 * min + 1) {
                let before = cache.graph(n - 1).unwrap().unweighted();
                let after = cache.graph(n).unwrap().unweighted();
                let log = cache.log(n).unwrap().clone();
                let plan = InsertionPlan::compute(&before, &after, &log).unwrap();
                let mut g = before.clone();
                g.rename(&plan.p, plan.p_zero).unwrap();
                for y in &plan.drops {
                    g.set_weight(plan.p_zero, *y, 0).unwrap();
                }
                for (a, b) in &plan.pair_drops {
                    g.set_weight(*a, *b, 0).unwrap();
                }
                for y in &plan.new_edges {
                    g.set_weight(plan.new_name, *y, 1).unwrap();
                }
                assert_eq!(g, after, "d={d} n={n}");
            }
        }
    }

    #[test]
    fn deletion_plans_reproduce_every_step_and_victim() {
        for d in [6, 8, 10] {
            let mut cache = SequenceCache::new(d, 3).unwrap();
            let min = cache.min_n();
            for n in (min + 1)..=(4 * min + 1) {
                let before = cache.graph(n).unwrap().unweighted();
                let after = cache.graph(n - 1).unwrap().unweighted();
                let log = cache.log(n).unwrap().clone();
                for victim in before.vertices() {
                    let plan = DeletionPlan::compute(&before, &after, &log, *victim)
                        .unwrap_or_else(|e| panic!("d={d} n={n} victim={victim}: {e}"));
                    let expect: BTreeSet<Edge> = edge_set(&after);
                    assert_eq!(plan.apply(&before), expect, "d={d} n={n} victim={victim}");
                }
            }
        }
    }
}
