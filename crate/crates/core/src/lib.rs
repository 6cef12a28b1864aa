//! Exact computations for reflection equation algebras built on Hecke
//! symmetries: projectors, representations, split Casimirs, Cayley–Hamilton
//! and Newton identities, spectral decompositions and Euler characteristics.

pub mod casimir;
pub mod euler;
pub mod hecke;
pub mod identities;
pub mod orbits;
pub mod projectors;
pub mod reps;
pub mod scalars;
pub mod tensor;
