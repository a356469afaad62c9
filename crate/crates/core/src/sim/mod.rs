//! Self-healing network simulator.
//!
//! Nodes hold only their name, their neighbour table and, next to the
//! coordinator, a replica of the graph size. After every adversarial insertion
//! or deletion they exchange messages in synchronous rounds until the network
//! again equals the reference graph of the new size, with the sequence names
//! serving as routing addresses.

pub mod message;
pub mod network;
pub mod node;
pub mod plan;
pub mod reference;
pub mod report;
pub mod routing;
pub mod script;

pub use message::{bit_budget, ceil_log2, Kind, Message};
pub use network::{EventCost, Simulator};
pub use node::NodeState;
pub use plan::{DeletionOp, DeletionPlan, InsertionPlan};
pub use reference::Reference;
pub use report::{run_script, run_script_with, EventReport, Fitted, SimReport};
pub use routing::{next_hop, route_next_hop, Hop, RouteQuery};
pub use script::{AdversaryScript, Event};
