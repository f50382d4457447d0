//! Sharp variational constants of the uncentered-radius maximal operator on
//! finite connected graphs.
//!
//! The p = 1 constant is computed exactly by splitting function space into
//! cones on which the maximal operator is linear, enumerating the extreme
//! rays of each cone and evaluating the variation ratio on them with exact
//! rational arithmetic. Other exponents get seeded numerical lower bounds.

pub mod acceptance;
pub mod construction;
pub mod error;
pub mod graph;
pub mod inequality;
pub mod lp;
pub mod maximal;
pub mod number;
pub mod sharp;

pub use error::{Error, Result};
pub use graph::Graph;
pub use maximal::{MaximalOperator, VertexFunction};
pub use number::{Number, Rational};
