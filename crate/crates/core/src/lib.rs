//! Exact combinatorics of fanifolds: lattices, fans, glued toric charts,
//! skeleton stratifications and handle plans.

pub mod bmodel;
pub mod catalog;
pub mod fan;
pub mod lattice;
pub mod linalg;
pub mod mirror;
pub mod skeleton;
pub mod fanifold;
