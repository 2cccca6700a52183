//! Exact algebra for linear q-difference equations: valuations over Q(q), skew
//! operators, Newton–Ramis polygons, q-Borel/Fourier transforms, local solutions,
//! Gevrey orders and Hermite–Padé remainders.

pub mod approx;
pub mod arith;
pub mod borel;
pub mod catalog;
pub mod error;
pub mod gevrey;
pub mod newton_basis;
pub mod newton_ramis;
pub mod places;
pub mod skew;
pub mod systems;

pub use error::{Error, Result};
