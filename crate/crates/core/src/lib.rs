//! Bounded-cohomology volume and Borel cocycles for representations into
//! PSL(2,R), PSL(2,C) and PSL(n,C), certified dense and Schottky
//! representations, and the chain-transfer pipeline producing certified
//! seminorm lower bounds.

pub mod approx;
pub mod borel;
pub mod chains;
pub mod checks;
pub mod cli;
pub mod error;
pub mod isometry;
pub mod pipeline;
pub mod representations;
pub mod sampling;
pub mod scalar;
pub mod volume;

pub use error::{Error, Result};
pub use scalar::Real;

/// Version tag of every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;

/// Double-precision isometry.
pub type Isometry = isometry::ProjectiveIsometry<f64>;
pub type BoundaryPoint = isometry::BoundaryPoint<f64>;
pub type H3Point = isometry::H3Point<f64>;
pub type H2Point = isometry::H2Point<f64>;
pub type IsometryClass = isometry::IsometryClass<f64>;
pub type Representation = chains::FreeRepresentation<f64>;
pub use chains::{RationalChain, RealChain};
