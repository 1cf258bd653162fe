//! Likert survey analysis producing a maximum spanning tree preference
//! model.
//!
//! The pipeline imputes missing answers with column means, averages simple
//! attributes into composites, ranks attribute groups by linear
//! classification-function coefficients, correlates the composites within
//! each group, keeps the positively correlated pairs and joins them with a
//! maximum spanning forest per group.

pub mod cli;
pub mod discriminant;
pub mod error;
pub mod graph;
pub mod pipeline;
pub mod stats;
pub mod survey;

pub use error::{Error, ErrorKind, Result};
