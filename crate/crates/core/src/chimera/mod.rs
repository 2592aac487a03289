//! Chimera hardware graphs, constructive minor embeddings and a verifier.

mod embed;
mod graph;
mod verify;

pub use embed::{embed_chain_or, embed_complete_bipartite, embed_instance, to_dot, Construction, Embedding};
pub use graph::{interaction_graph, ChimeraGraph, LogicalGraph, Qubit};
pub use verify::{verify_minor_embedding, Violation, VerifyReport};
