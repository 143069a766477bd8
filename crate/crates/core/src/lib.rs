//! Combinatorial models of the multicover bifiltration of a finite point set.

pub mod bifiltration;
pub mod geom;
pub mod homology;
pub mod io;
pub mod oracle;
pub mod scalar;
pub mod tiling;

pub use geom::{GeomError, PointCloud, Side, Sphere};
pub use scalar::{Filtered, Rational, Scalar};

/// Sphere with exact rational center and squared radius.
pub type ExactSphere = Sphere<Rational>;
/// Sphere in double precision, for visualization and estimates.
pub type Sphere64 = Sphere<f64>;
/// Sphere in single precision.
pub type Sphere32 = Sphere<f32>;
