//! Directed Θ₆ graphs over exact planar point sets.
//!
//! Coordinates live in ℚ(√3) ([`Scalar`]), so every cone predicate and every
//! hex/thex length is exact; only Euclidean lengths are enclosed.

pub mod adversarial;
pub mod approx;
pub mod enclosure;
pub mod hexgeom;
pub mod lemmas;
pub mod lp;
pub mod metrics;
pub mod pointset;
pub mod routing;
pub mod sampling;
pub mod scalar;
pub mod theta6;

pub use approx::{Approx, Bounds};
pub use hexgeom::{ConeIndex, GeometryError, Point, Triangle};
pub use pointset::{PointSet, PointSetError};
pub use scalar::Scalar;
pub use theta6::Theta6Graph;
