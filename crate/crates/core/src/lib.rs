//! Finite classical Lie incidence geometries over small fields, the opposition
//! relation of their buildings, and an exhaustive census of vertex sets that
//! admit no common opposite.

pub mod bits;
pub mod catalog;
pub mod census;
pub mod error;
pub mod fields;
pub mod forms;
pub mod grassmann;
pub mod linalg;
pub mod spaces;

pub use error::{Error, Result};
