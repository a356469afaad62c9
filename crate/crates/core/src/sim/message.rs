//! Protocol messages and their size in bits.
//!
//! Sizes follow a fixed field accounting: ext ids count as 32-bit node
//! identifiers, counters as 16 bits, and a name as its base symbol, a 6-bit
//! length and one bit per split.

use serde::Serialize;

use crate::name::VertexName;

pub const KIND_BITS: u64 = 4;
pub const EXT_BITS: u64 = 32;
pub const INT_BITS: u64 = 16;
pub const LEVEL_BITS: u64 = 6;
pub const TAG_BITS: u64 = 1;
/// Each message may carry `BUDGET_FACTOR * ceil(log2 n)` bits.
pub const BUDGET_FACTOR: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Kind {
    AddNotify,
    NReply,
    SplitReq,
    NeighborList,
    EdgeMake,
    EdgeDrop,
    ReplicaSync,
    DelNotify,
    Takeover,
    UndoStep,
    StateXfer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    /// From the new node to an attach neighbour (`relay` unset), then on to
    /// the coordinator carrying the relay's name.
    AddNotify { new_ext: String, relay: Option<VertexName> },
    /// The new size, returned to the relay and forwarded to the new node.
    NReply { n: u64, new_ext: String, relay: VertexName },
    /// Sent by the new node through its relay to the vertex it splits.
    SplitReq { n: u64, new_ext: String, target: VertexName },
    /// One neighbour of the split vertex.
    NeighborList { index: u16, total: u16, name: VertexName, ext: String },
    /// Creates or refreshes the edge to the sender, who is called `name`.
    /// `connect` asks the receiver to create an edge of its own; `drop_peer`
    /// asks it to drop one.
    EdgeMake {
        name: VertexName,
        connect: Option<(VertexName, String)>,
        drop_peer: Option<String>,
    },
    EdgeDrop,
    ReplicaSync { n: u64 },
    DelNotify { deleted: VertexName, relay_ext: String },
    /// Tells the newest vertex to replace `deleted`; the graph shrinks to `n`.
    Takeover { n: u64, deleted: VertexName, relay_ext: String, coordinator: bool },
    UndoStep(Undo),
    StateXfer(Xfer),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Undo {
    /// Hands the undo of the newest split to the sibling. `x_ext` is set when
    /// the newest vertex survives; `relay_ext` when the sibling has to fetch
    /// the deleted vertex's neighbour table itself.
    Start {
        n: u64,
        deleted: VertexName,
        x_ext: Option<String>,
        relay_ext: Option<String>,
        entries: u16,
    },
    /// One edge the newest vertex took over at its split.
    Entry { index: u16, name: VertexName, ext: String },
    Ack,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Xfer {
    Request,
    /// One entry of the deleted vertex's neighbour table.
    Entry { index: u16, total: u16, name: VertexName, ext: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dest {
    /// A node whose ext id the sender knows.
    Ext(String),
    /// Routed hop by hop to the vertex with this name.
    Name(VertexName),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub body: Body,
    pub dst: Dest,
    /// Largest routing level seen so far.
    pub level: u8,
    /// Vertex the route must not use.
    pub avoid: Option<VertexName>,
}

impl Message {
    pub fn direct(ext: &str, body: Body) -> Self {
        Message {
            body,
            dst: Dest::Ext(ext.to_string()),
            level: 0,
            avoid: None,
        }
    }

    pub fn routed(to: VertexName, body: Body, avoid: Option<VertexName>) -> Self {
        Message {
            body,
            dst: Dest::Name(to),
            level: 0,
            avoid,
        }
    }

    pub fn kind(&self) -> Kind {
        match &self.body {
            Body::AddNotify { .. } => Kind::AddNotify,
            Body::NReply { .. } => Kind::NReply,
            Body::SplitReq { .. } => Kind::SplitReq,
            Body::NeighborList { .. } => Kind::NeighborList,
            Body::EdgeMake { .. } => Kind::EdgeMake,
            Body::EdgeDrop => Kind::EdgeDrop,
            Body::ReplicaSync { .. } => Kind::ReplicaSync,
            Body::DelNotify { .. } => Kind::DelNotify,
            Body::Takeover { .. } => Kind::Takeover,
            Body::UndoStep(_) => Kind::UndoStep,
            Body::StateXfer(_) => Kind::StateXfer,
        }
    }

    /// Encoded size for degree `d`.
    pub fn bits(&self, d: u32) -> u64 {
        let name = |v: &VertexName| name_bits(d, v);
        let opt_name = |v: &Option<VertexName>| TAG_BITS + v.as_ref().map_or(0, name);
        let opt_ext = |e: &Option<String>| TAG_BITS + e.as_ref().map_or(0, |_| EXT_BITS);
        let header = KIND_BITS
            + TAG_BITS
            + match &self.dst {
                Dest::Ext(_) => EXT_BITS,
                Dest::Name(v) => name(v),
            }
            + LEVEL_BITS
            + opt_name(&self.avoid);
        let body = match &self.body {
            Body::AddNotify { relay, .. } => EXT_BITS + opt_name(relay),
            Body::NReply { relay, .. } => INT_BITS + EXT_BITS + name(relay),
            Body::SplitReq { target, .. } => INT_BITS + EXT_BITS + name(target),
            Body::NeighborList { name: v, .. } => 2 * INT_BITS + name(v) + EXT_BITS,
            Body::EdgeMake {
                name: v,
                connect,
                drop_peer,
            } => {
                name(v)
                    + TAG_BITS
                    + connect.as_ref().map_or(0, |(c, _)| name(c) + EXT_BITS)
                    + opt_ext(drop_peer)
            }
            Body::EdgeDrop => 0,
            Body::ReplicaSync { .. } => INT_BITS,
            Body::DelNotify { deleted, .. } => name(deleted) + EXT_BITS,
            Body::Takeover { deleted, .. } => INT_BITS + name(deleted) + EXT_BITS + TAG_BITS,
            Body::UndoStep(Undo::Start {
                deleted,
                x_ext,
                relay_ext,
                ..
            }) => 2 + 2 * INT_BITS + name(deleted) + opt_ext(x_ext) + opt_ext(relay_ext),
            Body::UndoStep(Undo::Entry { name: v, .. }) => 2 + INT_BITS + name(v) + EXT_BITS,
            Body::UndoStep(Undo::Ack) => 2,
            Body::StateXfer(Xfer::Request) => TAG_BITS,
            Body::StateXfer(Xfer::Entry { name: v, .. }) => TAG_BITS + 2 * INT_BITS + name(v) + EXT_BITS,
        };
        header + body
    }
}

/// Bits needed for a name under degree `d`.
pub fn name_bits(d: u32, v: &VertexName) -> u64 {
    ceil_log2(d as u64 / 2 + 1) + LEVEL_BITS + v.len() as u64
}

/// `ceil(log2 n)`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as u64
    }
}

/// Per-message bit budget in a network of `n` nodes.
pub fn bit_budget(n: u64) -> u64 {
    BUDGET_FACTOR * ceil_log2(n).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        let expect = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (1024, 10), (1025, 11)];
        for (n, l) in expect {
            assert_eq!(ceil_log2(n), l, "n={n}");
        }
    }

    #[test]
    fn largest_message_fits_smallest_budget() {
        // the smallest network that runs a protocol has d/2 + 2 nodes
        let long = VertexName::from_path(3, 0, 2);
        let m = Message {
            body: Body::UndoStep(Undo::Start {
                n: 5,
                deleted: long,
                x_ext: Some("a".into()),
                relay_ext: Some("b".into()),
                entries: 3,
            }),
            dst: Dest::Name(long),
            level: 2,
            avoid: Some(long),
        };
        assert!(m.bits(6) <= bit_budget(5), "{} bits", m.bits(6));
        let name = VertexName::from_path(0, 0b101, 3);
        assert_eq!(name_bits(6, &name), 2 + 6 + 3);
    }
}
