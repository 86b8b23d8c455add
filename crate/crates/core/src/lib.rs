pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod forbidden;
pub mod graph;
pub mod graph6;
pub mod oracle;
pub mod matching;
pub mod small;
pub mod surd;

pub use graph::{Graph, GraphError, VertexSet};
