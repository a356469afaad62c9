//! Running scripts and summarizing their cost.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::SimError;
use crate::format::write_graph;

use super::message::ceil_log2;
use super::network::{EventCost, Simulator};
use super::script::{AdversaryScript, Event};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventReport {
    pub index: usize,
    pub op: &'static str,
    pub id: String,
    #[serde(flatten)]
    pub cost: EventCost,
}

/// Largest observed cost per `ceil(log2 n)`, the constant a logarithmic bound
/// would need.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Fitted {
    pub rounds_per_log_n: f64,
    pub messages_per_log_n: f64,
    pub bits_per_log_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub d: u32,
    pub seed: u64,
    pub events: Vec<EventReport>,
    pub fitted: Fitted,
    pub final_n: usize,
    /// Final topology in the graph file format, all weights 1.
    pub final_graph: String,
    /// SHA-256 over the event costs and the final graph.
    pub digest: String,
}

impl SimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Runs `script` from the base graph, checking the network against the
/// reference after every event. `on_event` sees the simulator after each one.
pub fn run_script_with(
    d: u32,
    seed: u64,
    script: &AdversaryScript,
    mut on_event: impl FnMut(usize, &Simulator) -> Result<(), SimError>,
) -> Result<SimReport, SimError> {
    let mut sim = Simulator::new(d, seed)?;
    let mut events = Vec::with_capacity(script.len());
    let mut fitted = Fitted::default();
    for (index, event) in script.0.iter().enumerate() {
        let (op, id, cost) = match event {
            Event::Insert { id, attach } => ("insert", id, sim.insert(id, attach)?),
            Event::Delete { id } => ("delete", id, sim.delete(id)?),
        };
        let log_n = ceil_log2(cost.n_before.max(cost.n_after) as u64) as f64;
        fitted.rounds_per_log_n = fitted.rounds_per_log_n.max(cost.rounds as f64 / log_n);
        fitted.messages_per_log_n = fitted.messages_per_log_n.max(cost.messages as f64 / log_n);
        fitted.bits_per_log_n = fitted.bits_per_log_n.max(cost.max_message_bits as f64 / log_n);
        events.push(EventReport {
            index,
            op,
            id: id.clone(),
            cost,
        });
        on_event(index, &sim)?;
    }
    let final_graph = write_graph(&sim.snapshot()?)?;
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(&(d, seed, &events)).expect("events serialize"));
    hasher.update(final_graph.as_bytes());
    Ok(SimReport {
        d,
        seed,
        events,
        fitted,
        final_n: sim.n(),
        final_graph,
        digest: hex::encode(hasher.finalize()),
    })
}

pub fn run_script(d: u32, seed: u64, script: &AdversaryScript) -> Result<SimReport, SimError> {
    run_script_with(d, seed, script, |_, _| Ok(()))
}
