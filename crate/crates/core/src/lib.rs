//! Two-point flux approximation finite volumes for Poisson problems with
//! `H^{-1}` data and for the heat equation, together with the error
//! functionals used to measure and bound their discretization error.

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod mesh;
pub mod quadrature;
pub mod singular;
pub mod space;
pub mod sparse;
pub mod study;
pub mod transient;

pub use error::{Result, TpfaError};

/// Points and vectors; in 2D the third component is zero.
pub type Point = nalgebra::Vector3<f64>;
