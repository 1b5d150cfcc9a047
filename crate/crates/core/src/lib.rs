//! Zigzag persistent cohomology of simplicial complexes.
//!
//! [`engine::compute_diagram`] turns a [`filtration::ZigzagFiltration`] into
//! a [`diagram::PersistenceDiagram`]. The [`oracle`] module recomputes the
//! same diagrams by brute-force linear algebra for testing.

pub mod cli;
pub mod diagram;
pub mod engine;
pub mod field;
pub mod filtration;
pub mod oracle;
pub mod simplicial;

pub use diagram::{Death, Interval, PersistenceDiagram};
pub use engine::{compute_diagram, ZigzagEngine};
pub use field::Field;
pub use filtration::ZigzagFiltration;
pub use simplicial::{Simplex, SimplicialComplex};
