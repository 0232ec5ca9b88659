//! Exact computations in the generalized loop Heisenberg-Virasoro algebra.
pub mod algebra;
pub mod autos;
pub mod bider;
pub mod config;
pub mod derivations;
pub mod gamma;
pub mod io;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod syntax;
pub mod twolocal;
