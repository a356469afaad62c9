//! Synchronous round engine and the recovery protocol.
//!
//! Every directed link delivers at most one message per round, first in first
//! out. A message addressed by ext id takes one hop; a message addressed by
//! name is routed hop by hop. Handlers run at the receiving node and only read
//! that node's state, the message and the shared [`Reference`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::SimError;
use crate::graph::{edge_key, graphs_equal, WeightedMultigraph};
use crate::name::VertexName;

use super::message::{bit_budget, Body, Dest, Kind, Message, Undo, Xfer};
use super::node::{Joining, Lost, NodeState, Recovery};
use super::plan::DeletionOp;
use super::reference::Reference;
use super::routing::{next_hop, route_next_hop, Hop, RouteQuery};

/// Rounds after which an event is declared stuck.
const MAX_ROUNDS: u64 = 100_000;

/// Cost of one adversarial event.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EventCost {
    pub n_before: usize,
    pub n_after: usize,
    pub rounds: u64,
    pub messages: u64,
    pub bits: u64,
    pub max_message_bits: u64,
    pub bit_budget: u64,
    /// Unweighted edges added or removed by the recovery.
    pub topology_changes: u64,
    pub by_kind: BTreeMap<Kind, u64>,
}

pub struct Simulator {
    reference: Reference,
    nodes: BTreeMap<String, NodeState>,
    n: usize,
    queues: BTreeMap<(String, String), VecDeque<Message>>,
    cost: EventCost,
    events: usize,
}

fn proto(msg: impl Into<String>) -> SimError {
    SimError::Protocol(msg.into())
}

impl Simulator {
    /// The doubled clique on `d/2 + 1` nodes with ext ids `init-<base>`.
    pub fn new(d: u32, seed: u64) -> Result<Self, SimError> {
        let mut reference = Reference::new(d, seed)?;
        let n = reference.min_n();
        let g = reference.simple(n)?;
        let ext_of = |v: &VertexName| format!("init-{}", v.base());
        let mut nodes = BTreeMap::new();
        for v in g.vertices() {
            let mut node = NodeState::new(&ext_of(v), Some(*v));
            for (w, _) in g.neighbors(v) {
                node.links.insert(ext_of(w), Some(*w));
            }
            if v.is_all_zeros() {
                node.coordinator_n = Some(n as u64);
            } else {
                node.replica = Some(n as u64);
            }
            nodes.insert(node.ext.clone(), node);
        }
        Ok(Simulator {
            reference,
            nodes,
            n,
            queues: BTreeMap::new(),
            cost: EventCost::default(),
            events: 0,
        })
    }

    pub fn d(&self) -> u32 {
        self.reference.d()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeState> {
        self.nodes.values()
    }

    pub fn node(&self, ext: &str) -> Option<&NodeState> {
        self.nodes.get(ext)
    }

    pub fn reference(&mut self) -> &mut Reference {
        &mut self.reference
    }

    /// The current topology, by node name.
    pub fn snapshot(&self) -> Result<WeightedMultigraph, SimError> {
        let degree = crate::graph::Degree::new(self.d())?;
        let mut g = WeightedMultigraph::new(degree);
        for node in self.nodes.values() {
            let me = node.name.ok_or_else(|| proto(format!("{} has no name", node.ext)))?;
            g.add_vertex(me);
            for other in node.links.keys() {
                let peer = self.nodes[other].name.ok_or_else(|| proto(format!("{other} has no name")))?;
                g.set_weight(me, peer, 1)?;
            }
        }
        Ok(g)
    }

    /// Undirected edges by ext id.
    fn ext_edges(&self) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for node in self.nodes.values() {
            for other in node.links.keys() {
                let (a, b) = (node.ext.clone(), other.clone());
                out.insert(if a < b { (a, b) } else { (b, a) });
            }
        }
        out
    }

    /// Inserts node `id` attached to `attach` and runs the recovery.
    pub fn insert(&mut self, id: &str, attach: &[String]) -> Result<EventCost, SimError> {
        if self.nodes.contains_key(id) {
            return Err(SimError::DuplicateId(id.to_string()));
        }
        let attach: BTreeSet<&String> = attach.iter().collect();
        let Some(first) = attach.first() else {
            return Err(SimError::NoAttach);
        };
        if let Some(missing) = attach.iter().find(|a| !self.nodes.contains_key(a.as_str())) {
            return Err(SimError::UnknownId(missing.to_string()));
        }
        let first = first.to_string();
        let mut node = NodeState::new(id, None);
        for a in &attach {
            node.links.insert(a.to_string(), None);
            self.nodes.get_mut(a.as_str()).unwrap().links.insert(id.to_string(), None);
        }
        self.nodes.insert(id.to_string(), node);
        self.begin(self.n + 1);
        let before = self.ext_edges();
        self.send(
            id,
            Message::direct(
                &first,
                Body::AddNotify {
                    new_ext: id.to_string(),
                    relay: None,
                },
            ),
        )?;
        self.finish(self.n + 1, before)
    }

    /// Deletes node `id` and runs the recovery.
    pub fn delete(&mut self, id: &str) -> Result<EventCost, SimError> {
        if !self.nodes.contains_key(id) {
            return Err(SimError::UnknownId(id.to_string()));
        }
        if self.n <= self.reference.min_n() {
            return Err(SimError::AtBaseSize(self.reference.min_n()));
        }
        self.begin(self.n);
        let gone = self.nodes.remove(id).unwrap();
        let name = gone.name.ok_or_else(|| proto("deleted node has no name"))?;
        let table = gone.neighbor_table();
        for ext in gone.links.keys() {
            let y = self.nodes.get_mut(ext).unwrap();
            y.links.remove(id);
            y.work.lost = Some(Lost {
                name,
                table: table.clone(),
                replica: y.replica,
            });
            if gone.is_coordinator() {
                y.replica = None;
            }
        }
        let before = self.ext_edges();
        if let Some(n) = gone.coordinator_n {
            // the neighbour on the way to the newest vertex stands in for the coordinator
            let x = self.reference.log(n as usize)?.u_prime;
            let Hop::Forward { next, .. } = route_next_hop(&mut self.reference, &gone, x)? else {
                return Err(proto("coordinator cannot be the newest vertex"));
            };
            let w = table[&next].clone();
            if self.nodes[&w].work.lost.as_ref().and_then(|l| l.replica) != Some(n) {
                return Err(proto("stand-in coordinator has no current replica"));
            }
            let body = Body::Takeover {
                n: n - 1,
                deleted: name,
                relay_ext: w.clone(),
                coordinator: true,
            };
            self.send(&w, Message::routed(x, body, Some(name)))?;
        } else {
            let zeros = VertexName::zeros(name.len());
            let Hop::Forward { next, .. } = route_next_hop(&mut self.reference, &gone, zeros)? else {
                return Err(proto("non-coordinator has the coordinator's name"));
            };
            let v = table[&next].clone();
            let body = Body::DelNotify {
                deleted: name,
                relay_ext: v.clone(),
            };
            self.send(&v, Message::routed(zeros, body, Some(name)))?;
        }
        self.finish(self.n - 1, before)
    }

    fn begin(&mut self, n_event: usize) {
        self.cost = EventCost {
            n_before: self.n,
            bit_budget: bit_budget(n_event as u64),
            ..EventCost::default()
        };
    }

    fn finish(&mut self, n_after: usize, before: BTreeSet<(String, String)>) -> Result<EventCost, SimError> {
        self.run()?;
        self.n = n_after;
        for node in self.nodes.values_mut() {
            node.work = Default::default();
        }
        let after = self.ext_edges();
        self.cost.n_after = n_after;
        self.cost.topology_changes = before.symmetric_difference(&after).count() as u64;
        let event = self.events;
        self.events += 1;
        self.check().map_err(|detail| SimError::Desync { event, detail })?;
        Ok(std::mem::take(&mut self.cost))
    }

    /// Delivers messages until every queue is empty.
    fn run(&mut self) -> Result<(), SimError> {
        while self.queues.values().any(|q| !q.is_empty()) {
            self.cost.rounds += 1;
            if self.cost.rounds > MAX_ROUNDS {
                return Err(proto("recovery does not terminate"));
            }
            let mut arrivals = Vec::new();
            for ((from, to), q) in self.queues.iter_mut() {
                if let Some(m) = q.pop_front() {
                    arrivals.push((from.clone(), to.clone(), m));
                }
            }
            self.queues.retain(|_, q| !q.is_empty());
            for (from, to, msg) in arrivals {
                self.cost.messages += 1;
                *self.cost.by_kind.entry(msg.kind()).or_default() += 1;
                self.arrive(&from, &to, msg)?;
            }
        }
        Ok(())
    }

    fn enqueue(&mut self, from: &str, to: &str, msg: Message) -> Result<(), SimError> {
        if !self.nodes.contains_key(to) {
            return Err(proto(format!("{from} sends {:?} to missing node {to}", msg.kind())));
        }
        let bits = msg.bits(self.d());
        self.cost.bits += bits;
        self.cost.max_message_bits = self.cost.max_message_bits.max(bits);
        self.queues.entry((from.to_string(), to.to_string())).or_default().push_back(msg);
        Ok(())
    }

    /// Originates a message at `from`.
    fn send(&mut self, from: &str, msg: Message) -> Result<(), SimError> {
        let bits = msg.bits(self.d());
        if bits > self.cost.bit_budget {
            return Err(SimError::MessageTooLarge {
                bits,
                budget: self.cost.bit_budget,
            });
        }
        self.forward(from, msg)
    }

    /// Moves a message that sits at `at` one step on.
    fn forward(&mut self, at: &str, mut msg: Message) -> Result<(), SimError> {
        match msg.dst.clone() {
            Dest::Ext(e) if e == at => self.handle(at, at, msg),
            Dest::Ext(e) => self.enqueue(at, &e, msg),
            Dest::Name(target) => {
                let node = &self.nodes[at];
                let me = node.name.ok_or_else(|| proto(format!("unnamed node {at} routes")))?;
                let table = node.neighbor_table();
                let neighbors: Vec<VertexName> = table.keys().copied().collect();
                let q = RouteQuery {
                    me,
                    neighbors: &neighbors,
                    dst: target,
                    level: msg.level,
                    avoid: msg.avoid,
                };
                match next_hop(&mut self.reference, q)? {
                    Hop::Deliver => self.handle(at, at, msg),
                    Hop::Forward { next, level } => {
                        msg.level = level;
                        let ext = table[&next].clone();
                        self.enqueue(at, &ext, msg)
                    }
                }
            }
        }
    }

    fn arrive(&mut self, from: &str, to: &str, msg: Message) -> Result<(), SimError> {
        match &msg.dst {
            Dest::Ext(e) if e == to => self.handle(to, from, msg),
            Dest::Ext(e) => Err(proto(format!("message for {e} arrived at {to}"))),
            Dest::Name(_) => self.forward(to, msg),
        }
    }

    fn name_of(&self, at: &str) -> Result<VertexName, SimError> {
        self.nodes[at].name.ok_or_else(|| proto(format!("{at} has no name")))
    }

    fn node_mut(&mut self, at: &str) -> &mut NodeState {
        self.nodes.get_mut(at).unwrap()
    }

    /// Sends the coordinator's size to every named neighbour.
    fn sync_all(&mut self, at: &str) -> Result<(), SimError> {
        let node = &self.nodes[at];
        let n = node.coordinator_n.ok_or_else(|| proto("only the coordinator syncs"))?;
        let exts: Vec<String> = node.neighbor_table().into_values().collect();
        for e in exts {
            self.send(at, Message::direct(&e, Body::ReplicaSync { n }))?;
        }
        Ok(())
    }

    /// Records a link; the coordinator syncs every new neighbour.
    fn link(&mut self, at: &str, ext: &str, name: VertexName) -> Result<(), SimError> {
        let node = self.node_mut(at);
        let fresh = !matches!(node.links.insert(ext.to_string(), Some(name)), Some(Some(_)));
        if let (true, Some(n)) = (fresh, node.coordinator_n) {
            self.send(at, Message::direct(ext, Body::ReplicaSync { n }))?;
        }
        Ok(())
    }

    /// Forgets a link; losing the coordinator drops the replica.
    fn unlink(&mut self, at: &str, ext: &str) -> Result<(), SimError> {
        let node = self.node_mut(at);
        match node.links.remove(ext) {
            None => Err(proto(format!("{at} has no link to {ext}"))),
            Some(peer) => {
                if peer.is_some_and(|p| p.is_all_zeros()) {
                    node.replica = None;
                }
                Ok(())
            }
        }
    }

    fn handle(&mut self, at: &str, from: &str, msg: Message) -> Result<(), SimError> {
        match msg.body {
            Body::AddNotify { new_ext, relay: None } => {
                let me = self.name_of(at)?;
                let body = Body::AddNotify {
                    new_ext,
                    relay: Some(me),
                };
                self.send(at, Message::routed(VertexName::zeros(me.len()), body, None))
            }
            Body::AddNotify {
                new_ext,
                relay: Some(relay),
            } => {
                let node = self.node_mut(at);
                let n = node.coordinator_n.ok_or_else(|| proto("insertion notice reached a non-coordinator"))? + 1;
                node.coordinator_n = Some(n);
                self.sync_all(at)?;
                self.send(at, Message::routed(relay, Body::NReply { n, new_ext, relay }, None))
            }
            Body::NReply { n, new_ext, relay } if new_ext != at => {
                let to = new_ext.clone();
                self.send(at, Message::direct(&to, Body::NReply { n, new_ext, relay }))
            }
            Body::NReply { n, new_ext, .. } => {
                let plan = self.reference.insertion_plan(n as usize)?;
                let node = self.node_mut(at);
                node.name = Some(plan.new_name);
                node.work.joining = Some(Joining {
                    n,
                    expected: None,
                    entries: BTreeMap::new(),
                });
                let target = plan.p;
                self.send(at, Message::direct(from, Body::SplitReq { n, new_ext, target }))
            }
            Body::SplitReq { n, new_ext, target } => {
                if !self.name_of(at)?.same_vertex(&target) {
                    return self.send(at, Message::routed(target, Body::SplitReq { n, new_ext, target }, None));
                }
                self.split(at, n, &new_ext)
            }
            Body::NeighborList { total, name, ext, .. } => {
                let done = {
                    let join = self
                        .node_mut(at)
                        .work
                        .joining
                        .as_mut()
                        .ok_or_else(|| proto("neighbour list without a pending join"))?;
                    join.entries.insert(name, ext);
                    join.expected = Some(total);
                    join.entries.len() == total as usize
                };
                if done {
                    self.join(at, from)?;
                }
                Ok(())
            }
            Body::EdgeMake {
                name,
                connect,
                drop_peer,
            } => {
                self.link(at, from, name)?;
                if let Some((cname, cext)) = connect {
                    let me = self.name_of(at)?;
                    let body = Body::EdgeMake {
                        name: me,
                        connect: None,
                        drop_peer: None,
                    };
                    self.send(at, Message::direct(&cext, body))?;
                    self.link(at, &cext, cname)?;
                }
                if let Some(peer) = drop_peer {
                    self.unlink(at, &peer)?;
                    self.send(at, Message::direct(&peer, Body::EdgeDrop))?;
                }
                Ok(())
            }
            Body::EdgeDrop => self.unlink(at, from),
            Body::ReplicaSync { n } => {
                self.node_mut(at).replica = Some(n);
                Ok(())
            }
            Body::DelNotify { deleted, relay_ext } => {
                let node = self.node_mut(at);
                let n = node.coordinator_n.ok_or_else(|| proto("deletion notice reached a non-coordinator"))?;
                node.coordinator_n = Some(n - 1);
                self.sync_all(at)?;
                let plan = self.reference.deletion_plan(n as usize, deleted)?;
                let msg = if plan.x_alive() {
                    let body = Body::Takeover {
                        n: n - 1,
                        deleted,
                        relay_ext,
                        coordinator: false,
                    };
                    Message::routed(plan.x, body, Some(deleted))
                } else {
                    let body = Body::UndoStep(Undo::Start {
                        n: n - 1,
                        deleted,
                        x_ext: None,
                        relay_ext: Some(relay_ext),
                        entries: 0,
                    });
                    Message::routed(plan.sibling, body, Some(deleted))
                };
                self.send(at, msg)
            }
            Body::Takeover {
                n,
                deleted,
                relay_ext,
                coordinator,
            } => self.take_over(at, n, deleted, &relay_ext, coordinator),
            Body::UndoStep(Undo::Start {
                n,
                deleted,
                x_ext,
                relay_ext,
                entries,
            }) => self.start_undo(at, n, deleted, x_ext, relay_ext, entries),
            Body::UndoStep(Undo::Entry { name, ext, .. }) => {
                let rec = self.recovery(at)?;
                rec.known.insert(name, ext);
                rec.entries_got += 1;
                self.try_execute(at)
            }
            Body::UndoStep(Undo::Ack) => {
                let me = self.name_of(at)?;
                let (n, deleted) = {
                    let rec = self.recovery(at)?;
                    (rec.n, rec.deleted)
                };
                let plan = self.reference.deletion_plan(n as usize + 1, deleted)?;
                if plan.x != me {
                    return Err(proto("acknowledgement reached a vertex other than the newest"));
                }
                let rec = self.recovery(at)?;
                rec.known.insert(plan.sibling, from.to_string());
                rec.awaiting_ack = false;
                self.try_execute(at)
            }
            Body::StateXfer(Xfer::Request) => {
                let lost = self.nodes[at]
                    .work
                    .lost
                    .clone()
                    .ok_or_else(|| proto("state request at a node that lost no neighbour"))?;
                let total = lost.table.len() as u16;
                for (index, (name, ext)) in lost.table.into_iter().enumerate() {
                    let body = Body::StateXfer(Xfer::Entry {
                        index: index as u16,
                        total,
                        name,
                        ext,
                    });
                    self.send(at, Message::direct(from, body))?;
                }
                Ok(())
            }
            Body::StateXfer(Xfer::Entry { total, name, ext, .. }) => {
                let rec = self.recovery(at)?;
                rec.known.insert(name, ext);
                rec.table = Some(Some(total));
                rec.table_got += 1;
                self.try_execute(at)
            }
        }
    }

    fn recovery(&mut self, at: &str) -> Result<&mut Recovery, SimError> {
        self.node_mut(at)
            .work
            .recovery
            .as_mut()
            .ok_or_else(|| proto(format!("{at} has no recovery in progress")))
    }

    /// The split vertex hands its neighbour list to the new node and rewires.
    fn split(&mut self, at: &str, n: u64, new_ext: &str) -> Result<(), SimError> {
        let plan = self.reference.insertion_plan(n as usize)?;
        if self.name_of(at)? != plan.p {
            return Err(proto(format!("split request for {} reached {at}", plan.p)));
        }
        let table = self.nodes[at].neighbor_table();
        let total = table.len() as u16;
        for (index, (name, ext)) in table.iter().enumerate() {
            let body = Body::NeighborList {
                index: index as u16,
                total,
                name: *name,
                ext: ext.clone(),
            };
            self.send(at, Message::direct(new_ext, body))?;
        }
        for y in &plan.refresh {
            let drop_peer = plan.pair_drops.iter().find(|(k, _)| k == y).map(|(_, peer)| table[peer].clone());
            let body = Body::EdgeMake {
                name: plan.p_zero,
                connect: None,
                drop_peer,
            };
            self.send(at, Message::direct(&table[y], body))?;
        }
        for y in &plan.drops {
            let ext = table[y].clone();
            self.unlink(at, &ext)?;
            self.send(at, Message::direct(&ext, Body::EdgeDrop))?;
        }
        self.node_mut(at).name = Some(plan.p_zero);
        Ok(())
    }

    /// The new node connects to its neighbours in `G_n` and drops the rest.
    fn join(&mut self, at: &str, p_ext: &str) -> Result<(), SimError> {
        let join = self.node_mut(at).work.joining.take().unwrap();
        let plan = self.reference.insertion_plan(join.n as usize)?;
        for y in &plan.new_edges {
            let ext = if *y == plan.p_zero {
                p_ext.to_string()
            } else {
                join.entries.get(y).cloned().ok_or_else(|| proto(format!("no ext id for {y}")))?
            };
            let body = Body::EdgeMake {
                name: plan.new_name,
                connect: None,
                drop_peer: None,
            };
            self.send(at, Message::direct(&ext, body))?;
            self.link(at, &ext, *y)?;
        }
        let leftovers: Vec<String> = self.nodes[at]
            .links
            .iter()
            .filter(|(_, n)| n.is_none())
            .map(|(e, _)| e.clone())
            .collect();
        for e in leftovers {
            self.unlink(at, &e)?;
            self.send(at, Message::direct(&e, Body::EdgeDrop))?;
        }
        Ok(())
    }

    /// Ext ids of the node's neighbours and of the deleted node's neighbours
    /// when the node heard about the deletion directly.
    fn local_lost_table(&self, at: &str, deleted: VertexName) -> Option<BTreeMap<VertexName, String>> {
        self.nodes[at].work.lost.as_ref().filter(|l| l.name == deleted).map(|l| l.table.clone())
    }

    fn take_over(&mut self, at: &str, n: u64, deleted: VertexName, relay: &str, coordinator: bool) -> Result<(), SimError> {
        let plan = self.reference.deletion_plan(n as usize + 1, deleted)?;
        if self.name_of(at)? != plan.x {
            return Err(proto(format!("takeover for {} reached {at}", plan.x)));
        }
        let mut known = self.nodes[at].neighbor_table();
        let mut table = None;
        if relay == at {
            known.extend(self.local_lost_table(at, deleted).ok_or_else(|| proto("relay lost its table"))?);
        } else {
            table = Some(None);
            self.send(at, Message::direct(relay, Body::StateXfer(Xfer::Request)))?;
        }
        let sibling_alive = plan.deleted != plan.sibling;
        if sibling_alive {
            let start = Body::UndoStep(Undo::Start {
                n,
                deleted,
                x_ext: Some(at.to_string()),
                relay_ext: None,
                entries: plan.forwarded.len() as u16,
            });
            self.send(at, Message::routed(plan.sibling, start, Some(deleted)))?;
            for (index, y) in plan.forwarded.iter().enumerate() {
                let ext = known.get(y).cloned().ok_or_else(|| proto(format!("newest vertex lacks {y}")))?;
                let body = Body::UndoStep(Undo::Entry {
                    index: index as u16,
                    name: *y,
                    ext,
                });
                self.send(at, Message::routed(plan.sibling, body, Some(deleted)))?;
            }
        }
        self.node_mut(at).work.recovery = Some(Recovery {
            n,
            deleted,
            coordinator,
            known,
            table,
            table_got: 0,
            entries: None,
            entries_got: 0,
            ack_to: None,
            awaiting_ack: sibling_alive,
        });
        self.try_execute(at)
    }

    fn start_undo(
        &mut self,
        at: &str,
        n: u64,
        deleted: VertexName,
        x_ext: Option<String>,
        relay: Option<String>,
        entries: u16,
    ) -> Result<(), SimError> {
        let plan = self.reference.deletion_plan(n as usize + 1, deleted)?;
        if self.name_of(at)? != plan.sibling {
            return Err(proto(format!("undo for {} reached {at}", plan.sibling)));
        }
        let mut known = self.nodes[at].neighbor_table();
        if let Some(x) = &x_ext {
            known.insert(plan.x, x.clone());
        }
        let mut table = None;
        if let Some(r) = relay {
            if r == at {
                known.extend(self.local_lost_table(at, deleted).ok_or_else(|| proto("relay lost its table"))?);
            } else {
                table = Some(None);
                self.send(at, Message::direct(&r, Body::StateXfer(Xfer::Request)))?;
            }
        }
        self.node_mut(at).work.recovery = Some(Recovery {
            n,
            deleted,
            coordinator: false,
            known,
            table,
            table_got: 0,
            entries: Some(entries),
            entries_got: 0,
            ack_to: x_ext,
            awaiting_ack: false,
        });
        self.try_execute(at)
    }

    /// Runs this node's part of the deletion plan once it knows enough.
    fn try_execute(&mut self, at: &str) -> Result<(), SimError> {
        let node = self.node_mut(at);
        if !node.work.recovery.as_ref().is_some_and(|r| r.ready()) {
            return Ok(());
        }
        let rec = node.work.recovery.take().unwrap();
        let me = self.name_of(at)?;
        let plan = self.reference.deletion_plan(rec.n as usize + 1, rec.deleted)?;
        if let Some(x) = &rec.ack_to {
            self.send(at, Message::direct(x, Body::UndoStep(Undo::Ack)))?;
        }
        let f = |v: &VertexName| plan.final_names.get(v).copied().unwrap_or(*v);
        let mine = f(&me);
        let ext = |v: &VertexName| rec.known.get(v).cloned().ok_or_else(|| proto(format!("{me} lacks the ext id of {v}")));

        let node = self.node_mut(at);
        for name in node.links.values_mut().flatten() {
            *name = f(name);
        }
        node.name = Some(mine);
        let promote = mine.is_all_zeros() && node.coordinator_n.is_none();
        if promote && !rec.coordinator {
            return Err(proto("a vertex took the coordinator's name without its state"));
        }

        for op in plan.ops.get(&me).into_iter().flatten() {
            match op {
                DeletionOp::Refresh { peer, connect } => {
                    let connect = match connect {
                        Some(c) => Some((f(c), ext(c)?)),
                        None => None,
                    };
                    let body = Body::EdgeMake {
                        name: mine,
                        connect,
                        drop_peer: None,
                    };
                    self.send(at, Message::direct(&ext(peer)?, body))?;
                }
                DeletionOp::Make { peer } => {
                    let e = ext(peer)?;
                    let body = Body::EdgeMake {
                        name: mine,
                        connect: None,
                        drop_peer: None,
                    };
                    self.send(at, Message::direct(&e, body))?;
                    self.link(at, &e, f(peer))?;
                }
                DeletionOp::Drop { peer } => {
                    let e = ext(peer)?;
                    self.unlink(at, &e)?;
                    self.send(at, Message::direct(&e, Body::EdgeDrop))?;
                }
            }
        }
        if promote {
            let node = self.node_mut(at);
            node.coordinator_n = Some(rec.n);
            node.replica = None;
            self.sync_all(at)?;
        }
        Ok(())
    }

    /// Compares the network with `G_n` and checks the coordinator replicas.
    pub fn check(&mut self) -> Result<(), String> {
        let g = self.snapshot().map_err(|e| e.to_string())?;
        let reference = self.reference.simple(self.n).map_err(|e| e.to_string())?;
        if !graphs_equal(&g, &reference) {
            let ours: BTreeSet<_> = g.edges().map(|(a, b, _)| edge_key(a, b)).collect();
            let theirs: BTreeSet<_> = reference.edges().map(|(a, b, _)| edge_key(a, b)).collect();
            let extra: Vec<_> = ours.difference(&theirs).collect();
            let missing: Vec<_> = theirs.difference(&ours).collect();
            return Err(format!("extra edges {extra:?}, missing edges {missing:?}"));
        }
        if g.vertex_count() != self.nodes.len() {
            return Err("two nodes share a name".into());
        }
        let d = self.d() as usize;
        let coordinators: Vec<&NodeState> = self.nodes.values().filter(|n| n.is_coordinator()).collect();
        let [coordinator] = coordinators.as_slice() else {
            return Err(format!("{} coordinators", coordinators.len()));
        };
        if !coordinator.name.is_some_and(|n| n.is_all_zeros()) || coordinator.coordinator_n != Some(self.n as u64) {
            return Err("coordinator has the wrong name or size".into());
        }
        for node in self.nodes.values() {
            for (ext, name) in &node.links {
                let peer = &self.nodes[ext];
                if *name != peer.name || !peer.links.contains_key(&node.ext) {
                    return Err(format!("{} has a stale entry for {ext}", node.ext));
                }
            }
            if node.degree() < d / 2 || node.degree() > d {
                return Err(format!("{} has degree {}", node.ext, node.degree()));
            }
            let near = node.links.contains_key(&coordinator.ext);
            let expect = near.then_some(self.n as u64);
            if !node.is_coordinator() && node.replica != expect {
                return Err(format!("{} holds replica {:?}, expected {expect:?}", node.ext, node.replica));
            }
        }
        if self.cost.topology_changes > 3 * d as u64 {
            return Err(format!("{} topology changes", self.cost.topology_changes));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::message::ceil_log2;
    use crate::sim::script::AdversaryScript;

    fn grow(sim: &mut Simulator, prefix: &str, count: usize) {
        for k in 0..count {
            let ext = format!("{prefix}{k}");
            let attach = vec![sim.nodes().nth(k % sim.n()).unwrap().ext.clone()];
            sim.insert(&ext, &attach).unwrap();
        }
    }

    #[test]
    fn base_network_matches_reference() {
        let mut sim = Simulator::new(6, 1).unwrap();
        sim.check().unwrap();
        assert_eq!(sim.n(), 4);
        assert!(sim.node("init-0").unwrap().is_coordinator());
    }

    #[test]
    fn insertions_follow_the_sequence() {
        for d in [6, 8, 10] {
            let mut sim = Simulator::new(d, 5).unwrap();
            let base = sim.n();
            grow(&mut sim, "g", 4 * base);
            assert_eq!(sim.n(), 5 * base);
        }
    }

    #[test]
    fn every_victim_at_every_size_recovers() {
        let d = 6;
        for size in 5..=17 {
            let mut probe = Simulator::new(d, 2).unwrap();
            grow(&mut probe, "g", size - 4);
            let exts: Vec<String> = probe.nodes().map(|n| n.ext.clone()).collect();
            for victim in exts {
                let mut sim = Simulator::new(d, 2).unwrap();
                grow(&mut sim, "g", size - 4);
                sim.delete(&victim).unwrap_or_else(|e| panic!("n={size} victim={victim}: {e}"));
                assert_eq!(sim.n(), size - 1);
                // the network keeps working afterwards
                grow(&mut sim, "h", 2);
            }
        }
    }

    #[test]
    fn random_scripts_stay_in_sync() {
        for (d, seed) in [(6, 1), (8, 2), (10, 3)] {
            let script = AdversaryScript::random(d, 120, 0.6, seed);
            let mut sim = Simulator::new(d, seed).unwrap();
            for e in &script.0 {
                match e {
                    crate::sim::script::Event::Insert { id, attach } => sim.insert(id, attach).unwrap(),
                    crate::sim::script::Event::Delete { id } => sim.delete(id).unwrap(),
                };
            }
        }
    }

    #[test]
    fn bad_events_are_rejected() {
        let mut sim = Simulator::new(6, 1).unwrap();
        assert!(matches!(sim.delete("init-0"), Err(SimError::AtBaseSize(4))));
        assert!(matches!(sim.insert("init-1", &["init-0".into()]), Err(SimError::DuplicateId(_))));
        assert!(matches!(sim.insert("a", &[]), Err(SimError::NoAttach)));
        assert!(matches!(sim.insert("a", &["zz".into()]), Err(SimError::UnknownId(_))));
        assert!(matches!(sim.delete("zz"), Err(SimError::UnknownId(_))));
    }

    #[test]
    fn coordinator_deletion_moves_the_role() {
        let mut sim = Simulator::new(6, 1).unwrap();
        grow(&mut sim, "g", 4);
        assert_eq!(sim.n(), 8);
        sim.delete("init-0").unwrap();
        let c: Vec<&NodeState> = sim.nodes().filter(|n| n.is_coordinator()).collect();
        assert_eq!(c.len(), 1);
        assert_ne!(c[0].ext, "init-0");
        assert_eq!(c[0].coordinator_n, Some(7));
        let holder = c[0].ext.clone();
        for node in sim.nodes().filter(|n| n.links.contains_key(&holder)) {
            assert_eq!(node.replica, Some(7), "{}", node.ext);
        }
    }

    #[test]
    fn insert_then_delete_restores_the_network() {
        let mut sim = Simulator::new(6, 3).unwrap();
        grow(&mut sim, "g", 7);
        let before: Vec<NodeState> = sim.nodes().cloned().collect();
        sim.insert("temp", &["g2".into(), "init-1".into()]).unwrap();
        sim.delete("temp").unwrap();
        let after: Vec<NodeState> = sim.nodes().cloned().collect();
        assert_eq!(before, after);
    }

    fn diameter(g: &WeightedMultigraph) -> u64 {
        let mut worst = 0;
        for s in g.vertices() {
            let mut dist = BTreeMap::from([(*s, 0u64)]);
            let mut queue = VecDeque::from([*s]);
            while let Some(v) = queue.pop_front() {
                for (w, _) in g.neighbors(&v) {
                    if !dist.contains_key(w) {
                        dist.insert(*w, dist[&v] + 1);
                        queue.push_back(*w);
                    }
                }
            }
            assert_eq!(dist.len(), g.vertex_count(), "disconnected");
            worst = worst.max(*dist.values().max().unwrap());
        }
        worst
    }

    #[test]
    fn insertion_rounds_track_the_diameter() {
        let script = AdversaryScript::random(6, 100, 0.7, 11);
        let mut sim = Simulator::new(6, 11).unwrap();
        for e in &script.0 {
            match e {
                crate::sim::script::Event::Insert { id, attach } => {
                    let diam = diameter(&sim.snapshot().unwrap());
                    let cost = sim.insert(id, attach).unwrap();
                    assert!(cost.rounds <= 4 * diam + 12, "{} rounds, diameter {diam}", cost.rounds);
                }
                crate::sim::script::Event::Delete { id } => {
                    sim.delete(id).unwrap();
                }
            }
        }
    }

    #[test]
    fn messages_fit_the_size_budget() {
        let mut sim = Simulator::new(6, 1).unwrap();
        for k in 0..124 {
            let attach = vec![sim.nodes().nth(k * 7 % sim.n()).unwrap().ext.clone()];
            let c = sim.insert(&format!("n{k}"), &attach).unwrap();
            assert!(c.max_message_bits <= c.bit_budget);
            assert!(c.messages <= 40 * ceil_log2(c.n_after as u64));
        }
    }
}
