//! Graphs of groups with trivial edge groups, edge paths and loop conjugacy.

mod conjugacy;
mod graph;
mod path;

pub use conjugacy::{
    cyclic_tighten, cyclic_word, decompose_loop, loops_conjugate, simultaneous_conjugator, Core, CyclicWord,
    LoopDecomposition,
};
pub use graph::{Edge, EdgeId, Graph, GraphError, GraphInvariants, OEdge, Subgraph, Vertex, VertexId};
pub use path::{EdgePath, PathBuilder, PathDisplay, PathError};
