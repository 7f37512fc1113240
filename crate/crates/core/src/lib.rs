//! Finite models of stratified spaces: posets and their Alexandroff spaces,
//! layered categories over posets, decollages, constructible sheaves of
//! finite sets, nerve homology, and builders for two-stratum and curve
//! examples.

pub mod order;
pub mod cat;
pub mod strat;
pub mod group;
pub mod decollage;
pub mod galois;
pub mod sheaf;
pub mod homology;
pub mod corpus;
