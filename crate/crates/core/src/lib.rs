//! Discrepancy measures used as global sensitivity indices.
//!
//! The crate turns classic L2-type uniformity criteria (star, unanchored,
//! modified, centered, symmetric, wrap-around) and a grid-occupancy
//! "S-ersatz" into per-input importance scores computed on `(x_k, y)`
//! scatterplot projections, and benchmarks their rankings against the
//! Jansen total-order estimator over randomized test models.
//!
//! Module map:
//!
//! * [`sampling`]: random and Sobol' designs, the Jansen `A`/`A_B` stack.
//! * [`distributions`]: inverse-CDF maps from the unit cube to the input laws.
//! * [`metafunction`]: seeded random test models.
//! * [`discrepancy`]: the seven measures.
//! * [`sensitivity`]: Jansen indices, discrepancy importance, savage scores, agreement.
//! * [`benchmark`]: the randomized benchmark, its analysis and the timing study.

pub mod benchmark;
pub mod discrepancy;
pub mod distributions;
mod error;
pub mod matrix;
pub mod metafunction;
pub mod sampling;
pub mod sensitivity;
mod special;

pub use error::{Error, Result};
pub use matrix::{Matrix, SampleMatrix};
