//! Polynomial functions on Young diagrams and their continuous limits,
//! computed from embedding counts of bipartite graphs.

pub mod calculus;
pub mod characters;
pub mod conjecture;
pub mod decomposition;
pub mod embedding;
pub mod error;
pub mod functionals;
pub mod graph;
pub mod linalg;
pub mod maps;
pub mod partition;
pub mod poly;
pub mod profile;
pub mod rational;

pub use error::{Error, Result};
pub use partition::Partition;
pub use profile::Profile;
pub use rational::Q;
