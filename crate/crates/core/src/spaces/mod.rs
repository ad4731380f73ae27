//! Exact rational geometry: polytopes, affine maps, measures, linear
//! programming, and vertex enumeration.

pub mod linalg;
pub mod lp;
pub mod measure;
pub mod polytope;
pub mod vertex_enum;

pub use lp::{LpOutcome, LpProblem, Rel};
pub use measure::Measure;
pub use polytope::{point_set_hausdorff_linf, AffineMap, HRep, LinearForm, Polytope};
pub use vertex_enum::enumerate_vertices;
