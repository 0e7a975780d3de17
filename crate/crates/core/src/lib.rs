//! Order and successor augmentations of sparse graphs that keep generalised
//! colouring numbers under control, together with exact oracles for checking
//! the accompanying inequalities on small instances.
//!
//! The main entry points:
//!
//! * [`spantree::low_degree_spanning_tree`] adds a set `F` of edges forming a
//!   spanning tree of maximum degree 3 while bounding `adm_r(G + F, L)`.
//! * [`successor::build_successor`] turns that tree into a successor relation
//!   through a Hamiltonian path in its cube.
//! * [`walk`] and [`fo`] encode a 3-walk into unary and binary relations and
//!   recover the successor relation with first-order formulas.
//! * [`clique`], [`poset`] and [`encodings`] cover clique-expressions,
//!   chain covers of posets, and the two ordered-structure encodings.

pub mod clique;
pub mod colnum;
pub mod density;
pub mod encodings;
pub mod error;
pub mod fo;
pub mod graph;
pub mod io;
pub mod poset;
pub mod random;
pub mod scalar;
pub mod spantree;
pub mod successor;
pub mod unionfind;
pub mod verify;
pub mod walk;

use num_rational::Ratio;

pub use error::{Error, Result};
pub use graph::{add_edges, lex_product_clique, EdgePairSet, Graph, SuccessorRelation, Vertex, VertexOrdering};
pub use scalar::Scalar;

/// Exact edge density.
pub type Density = Ratio<i64>;
