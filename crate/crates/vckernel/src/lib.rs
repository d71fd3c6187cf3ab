//! Vertex cover kernelization with forward and backward data reduction
//! rules.
//!
//! The crate implements a reduction engine that applies rules in both
//! directions: forward rules shrink an instance, backward rules undo
//! reductions to make further shrinking possible. On top of the engine sit
//! the search methods (Find, Find-and-Reduce, Inflate-Deflate and its local
//! variant), a pairwise confluence tester over enumerated small graphs,
//! exact solvers used as ground truth, and solution lifting from kernels
//! back to original instances.

pub mod confluence;
pub mod engine;
pub mod graph;
pub mod io;
pub mod iso;
pub mod lift;
pub mod oracle;
pub mod record;
pub mod rules;
pub mod search;

pub use engine::{expand_roi, replay, Engine};
pub use graph::{Graph, GraphError, Instance, Mode, VertexId};
pub use record::{
    AnyRuleId, BackwardRuleId, Direction, ForwardRuleId, ModificationRecord, RecordChoice,
};
pub use rules::{AnySite, BackwardSite, ForwardSite, RuleError};
