//! Exact functor calculus on finite diagrams of desk-scale compacta.
//!
//! Objects are finite sets and rational polytopes; diagrams over finite
//! categories get exact limits; the hyperspace functors (`exp`, inclusion
//! hyperspace, superextension), the probability-measure functor, and their
//! convex variants act on those limits. On top sits a certification harness
//! that checks surjectivity of characteristic maps exactly and probes their
//! openness with sampled linear moduli. All arithmetic is arbitrary-precision
//! rational; reports are deterministic functions of (input, seed).

pub mod error;
pub mod rat;
pub mod sampling;
pub mod spaces;

pub mod category;
pub mod certify;
pub mod convex;
pub mod io;
pub mod hyperspace;
pub mod prob;

pub use error::{Error, Result};
