//! Combinatorics of graph algebras.
//!
//! * [`graph`], [`path`]: directed graphs with omega multiplicities and the
//!   reduced-word path groupoid.
//! * [`tree`]: the Boolean ring generated by the sets `V(v; F)` of a
//!   directed tree, with exact set operations and pushforwards.
//! * [`cover`], [`point`]: fibers of the universal cover, boundary points,
//!   standard forms and the length cocycle.
//! * [`invariants`]: the invariants `(N, F)` that parametrize invariant
//!   open sets, and their quotient data.
//! * [`structure`]: cycle taxonomy and the structural verdicts.
//! * [`fock`]: exact path-space matrix representations.
//! * [`setexpr`]: a small expression language over tree rings.
//! * [`limits`]: coherence checks along increasing chains of subgraphs.

pub mod cover;
pub mod error;
pub mod fock;
pub mod graph;
pub mod invariants;
pub mod limits;
pub mod path;
pub mod point;
pub mod setexpr;
pub mod structure;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{parse_graph, Graph, VertexId};
pub use path::Path;
pub use point::{Lasso, Point};
