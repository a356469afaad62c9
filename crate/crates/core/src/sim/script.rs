//! Adversarial event scripts.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SimError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Event {
    Insert { id: String, attach: Vec<String> },
    Delete { id: String },
}

/// A sequence of insertions and deletions, as JSON:
/// `[{"op":"insert","id":"a","attach":["init-0"]},{"op":"delete","id":"a"}]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AdversaryScript(pub Vec<Event>);

impl AdversaryScript {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        serde_json::from_str(text).map_err(|e| SimError::Script(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scripts always serialize")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// A reproducible random script starting from the base graph for degree
    /// `d`. Each event is an insertion with probability `insert_prob` (always
    /// when the graph is at its base size); new nodes attach to one to three
    /// random live nodes.
    pub fn random(d: u32, events: usize, insert_prob: f64, seed: u64) -> Self {
        let base = d as usize / 2 + 1;
        let mut live: BTreeSet<String> = (0..base).map(|b| format!("init-{b}")).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(events);
        for k in 0..events {
            let ids: Vec<String> = live.iter().cloned().collect();
            if live.len() <= base || rng.random_bool(insert_prob) {
                let count = rng.random_range(1..=3.min(ids.len()));
                let attach = sample(&mut rng, ids.len(), count).into_iter().map(|i| ids[i].clone()).collect();
                let id = format!("node-{k}");
                live.insert(id.clone());
                out.push(Event::Insert { id, attach });
            } else {
                let id = ids[rng.random_range(0..ids.len())].clone();
                live.remove(&id);
                out.push(Event::Delete { id });
            }
        }
        AdversaryScript(out)
    }
}
