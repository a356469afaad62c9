//! Greedy name-based routing.
//!
//! A node routes in the doubled graph `G*_L`, where `L` is the longest name
//! among itself, its neighbours, the message's level hint and the avoided
//! vertex. An unsplit vertex is represented there by all its descendants and
//! the destination by its zero-extension, so the real graph is the view with
//! unsplit descendants contracted. Each hop moves to the neighbour whose
//! representatives are closest to the destination; the distance strictly
//! drops at every hop, which rules out loops.

use crate::error::SimError;
use crate::name::VertexName;

use super::node::NodeState;
use super::reference::Reference;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hop {
    /// The node itself is the destination.
    Deliver,
    /// Forward to this neighbour; `level` is the new level hint.
    Forward { next: VertexName, level: u8 },
}

/// What a node knows when routing.
#[derive(Clone, Copy, Debug)]
pub struct RouteQuery<'a> {
    pub me: VertexName,
    pub neighbors: &'a [VertexName],
    pub dst: VertexName,
    pub level: u8,
    pub avoid: Option<VertexName>,
}

/// Next hop from `q.me` toward `q.dst`.
pub fn next_hop(reference: &mut Reference, q: RouteQuery<'_>) -> Result<Hop, SimError> {
    if q.me.same_vertex(&q.dst) {
        return Ok(Hop::Deliver);
    }
    let level = q
        .neighbors
        .iter()
        .map(|v| v.len())
        .chain([q.me.len(), q.level, q.avoid.map_or(0, |a| a.len())])
        .max()
        .unwrap_or(0);
    let view = reference.view(level)?;
    let dist = reference.distances(level, q.dst, q.avoid)?;
    let score = |v: &VertexName| view.reps(v).into_iter().map(|i| dist[i]).min().unwrap_or(u32::MAX);
    let mine = score(&q.me);
    let best = q
        .neighbors
        .iter()
        .filter(|v| Some(**v) != q.avoid)
        .map(|v| (score(v), *v))
        .min();
    match best {
        Some((s, next)) if s < mine => Ok(Hop::Forward { next, level }),
        _ => Err(SimError::NoRoute { from: q.me, to: q.dst }),
    }
}

/// [`next_hop`] for a node's own state, with no level hint.
pub fn route_next_hop(reference: &mut Reference, node: &NodeState, dst: VertexName) -> Result<Hop, SimError> {
    let me = node
        .name
        .ok_or_else(|| SimError::Protocol(format!("unnamed node {} routes", node.ext)))?;
    let neighbors: Vec<VertexName> = node.neighbor_table().into_keys().collect();
    next_hop(
        reference,
        RouteQuery {
            me,
            neighbors: &neighbors,
            dst,
            level: 0,
            avoid: None,
        },
    )
}
