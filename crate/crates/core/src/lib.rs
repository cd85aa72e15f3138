//! Clique-factor laboratory: dense graphs, exact K_r-factor search, subset
//! robustness counting, good partitions and the extremal-case factor
//! pipeline.

pub mod constructions;
pub mod factor;
pub mod graph;
pub mod io;
pub mod partition;
pub mod pipeline;
pub mod report;
pub mod robustness;

pub use factor::{has_kr_factor, FactorError, FactorResult, SearchBudget, Verdict};
pub use graph::{Clique, Graph, GraphBuilder, GraphError, IndexVector, LabeledPartition, Tiling, VertexSet};
