//! Incrementally grown d-regular expander multigraphs.
//!
//! The sequence starts at the doubled clique on `d/2 + 1` vertices and adds one
//! vertex at a time. Between consecutive doubled 2-lifts it splits vertices one
//! by one, so consecutive graphs differ by a total edge-weight change of at most
//! `5d/2`.

pub mod analyzer;
pub mod commands;
pub mod error;
pub mod format;
pub mod graph;
pub mod grower;
pub mod lift;
pub mod name;
pub mod sim;
pub mod spectral;

pub use error::{AnalysisError, GraphError, LiftError, ParseError, SimError, SpectralError};
pub use graph::{expansion_cost, graphs_equal, weighted_degree, Degree, SimpleGraph, WeightedMultigraph};
pub use lift::{find_good_signing, next_bl_expander, two_lift, LiftParams, Signing};
pub use name::VertexName;
pub use spectral::{spectral_report, SpectralReport};
pub use error::GrowError;
pub use grower::{begin_cycle, graph_at, initial_graph, state_at, ChangeLog, GrowthState, Sequence};
