//! Exact low-dimensional geometry: point clouds, sphere predicates,
//! circumspheres and constrained minimum spheres.

pub(crate) mod kernel;
pub(crate) mod linalg;
mod point;
mod position;
mod solver;
mod sphere;

pub use point::PointCloud;
pub use position::{
    check_general_position, check_general_position_within, GeneralPosition, Violation,
    ViolationKind,
};
pub use solver::{miniball, min_sphere_constrained, min_sphere_constrained_points};
pub use sphere::{circumsphere, side_of_sphere, CircumFrame, Side, Sphere, SpherePartition};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (must be 1, 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("empty input")]
    Empty,
    #[error("sign could not be certified in this scalar type")]
    Undecided,
    #[error("site index {index} out of range for {n} sites")]
    SiteOutOfRange { index: usize, n: usize },
    #[error("site sets are not disjoint (site {0} repeats)")]
    Overlap(usize),
    #[error("general position violated: {0}")]
    GeneralPosition(Violation),
    #[error("need at least {needed} sites in dimension {dim}, got {n}")]
    TooFewSites { n: usize, dim: usize, needed: usize },
}
