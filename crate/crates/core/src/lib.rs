//! Exact computations for stable tuples in central simple algebras with
//! involution over multiquadratic function fields.

pub mod field;
pub mod algebra;
pub mod construct;
pub mod pfister;
pub mod stability;
pub mod moduli;
