//! Computations on compact symplectic toric orbifolds given by labeled
//! polytopes: twisted sectors, basic (orbi-)discs, leading-order bulk
//! potentials, leading term equations and regions of non-displaceable
//! torus fibers.

pub mod disc;
pub mod error;
pub mod lattice;
pub mod ltsolver;
pub mod polyhedron;
pub mod potential;
pub mod region;
pub mod report;
pub mod series;
pub mod stacky;

pub use error::{Error, Result};
pub use lattice::{IntMatrix, LatticeVector, RationalVector};
pub use ltsolver::{SolvabilityVerdict, SolveStatus};
pub use polyhedron::{Constraint, Polyhedron, Relation};
pub use potential::BulkParam;
pub use region::{FiberRegion, RegionOptions, Scenario};
pub use series::{Coeff, LaurentPoly, NovikovScalar};
pub use stacky::{BoxElement, StackyModel};
