//! Qualitative temporal graphs: Allen algebra, closure, endpoint reduction
//! and the evaluation measures built on it.

pub mod algebra;
pub mod closure;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod native;
pub mod pointgraph;
pub mod synthgen;
pub mod timeml;

pub use algebra::{BaseRelation, EndpointQuadruple, PointRelation, RelationSet};
pub use closure::IntervalGraph;
pub use error::{Error, Result, Side};
