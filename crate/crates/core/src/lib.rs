//! Unentangled orthonormal bases of `n` qubits through admissible edge
//! colorings of the hypercube `Q_n`.
//!
//! Each vertex of `Q_n` indexes one basis state; each color names a qubit
//! ray, and the state at a vertex places that ray (or its orthogonal
//! complement, when the vertex bit is set) in every tensor position. A
//! coloring yields orthonormal bases exactly when it is *admissible*.

pub mod census;
pub mod coloring;
pub mod constructors;
pub mod cube;
pub mod dot;
pub mod error;
pub mod forest;
pub mod io;
pub mod locc;
pub mod refine;
pub mod uob;

pub use coloring::{ColorId, EdgeColoring, VertexTuple};
pub use cube::{CubeAutomorphism, Edge, Hypercube, Subcube, TwoFace, Vertex};
pub use error::{Error, Result};
