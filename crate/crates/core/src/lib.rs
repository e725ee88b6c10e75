//! Deaconu-Renault systems over boundary-path spaces of finite directed graphs.
//!
//! Points are represented exactly (finite paths and eventually periodic
//! lassos), functions are locally constant on cylinder partitions, and
//! candidate homeomorphisms are finite transducers. Conjugacy is checked by
//! several independent routes that must agree:
//!
//! * domain preservation and commutation with the shift, decided on product
//!   machines ([`homcheck`]);
//! * preimage set equalities on points and cylinders ([`homcheck`]);
//! * the pullback identities for `sigma^*` and `sigma_*` ([`funcspace`]);
//! * cocycle intertwining on the Deaconu-Renault groupoid ([`groupoid`]);
//! * weighted gauge actions on the finite convolution algebra of an acyclic
//!   graph ([`cstar`]).

pub mod cli;
pub mod corpus;
pub mod cstar;
pub mod error;
pub mod funcspace;
pub mod graph;
pub mod groupoid;
pub mod homcheck;
pub mod machine;
pub mod point;
pub mod report;
pub mod system;
pub mod transducer;

pub use error::{Error, Result};
pub use graph::{parse_graph, Cylinder, DirectedGraph, EdgeId, GraphBuilder, Path, VertexId};
pub use point::BoundaryPoint;
pub use system::{DRSystem, PeriodicityReport};
