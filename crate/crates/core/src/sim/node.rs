//! Per-node state.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::name::VertexName;

/// State a node keeps between events.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeState {
    pub ext: String,
    /// `None` only for a freshly inserted node that has not been named yet.
    pub name: Option<VertexName>,
    /// Ext id to the neighbour's name (`None` while unknown).
    pub links: BTreeMap<String, Option<VertexName>>,
    /// The graph size as replicated from the coordinator.
    pub replica: Option<u64>,
    /// Set only on the coordinator.
    pub coordinator_n: Option<u64>,
    #[serde(skip)]
    pub(crate) work: Work,
}

impl NodeState {
    pub(crate) fn new(ext: &str, name: Option<VertexName>) -> Self {
        NodeState {
            ext: ext.to_string(),
            name,
            links: BTreeMap::new(),
            replica: None,
            coordinator_n: None,
            work: Work::default(),
        }
    }

    /// Named neighbours: name to ext id.
    pub fn neighbor_table(&self) -> BTreeMap<VertexName, String> {
        self.links.iter().filter_map(|(e, n)| n.map(|n| (n, e.clone()))).collect()
    }

    pub fn is_coordinator(&self) -> bool {
        self.coordinator_n.is_some()
    }

    pub fn degree(&self) -> usize {
        self.links.len()
    }
}

/// Scratch state for the event in progress.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Work {
    pub joining: Option<Joining>,
    /// Learned when a neighbour is deleted.
    pub lost: Option<Lost>,
    pub recovery: Option<Recovery>,
}

/// A new node collecting its split vertex's neighbour list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Joining {
    pub n: u64,
    pub expected: Option<u16>,
    pub entries: BTreeMap<VertexName, String>,
}

/// What a neighbour of a deleted node knows about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Lost {
    pub name: VertexName,
    pub table: BTreeMap<VertexName, String>,
    pub replica: Option<u64>,
}

/// The newest vertex or its sibling carrying out a deletion recovery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Recovery {
    /// Size after the deletion.
    pub n: u64,
    pub deleted: VertexName,
    pub coordinator: bool,
    /// Ext ids this node can resolve, by pre-recovery name.
    pub known: BTreeMap<VertexName, String>,
    /// Entries of the deleted node's table still expected (`None`: not needed,
    /// `Some(None)`: requested, count unknown).
    pub table: Option<Option<u16>>,
    pub table_got: u16,
    /// Forwarded entries still expected from the newest vertex.
    pub entries: Option<u16>,
    pub entries_got: u16,
    /// Ext id of the newest vertex, to acknowledge to.
    pub ack_to: Option<String>,
    pub awaiting_ack: bool,
}

impl Recovery {
    pub fn ready(&self) -> bool {
        let table_done = match self.table {
            None => true,
            Some(None) => false,
            Some(Some(k)) => self.table_got >= k,
        };
        let entries_done = self.entries.is_none_or(|k| self.entries_got >= k);
        table_done && entries_done && !self.awaiting_ack
    }
}
