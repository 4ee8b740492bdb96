//! Symbolic and numeric verification of Lie symmetries, equivalence
//! transformations and the group classification of linear Schrödinger
//! equations `iψ_t + Δψ + Vψ = 0`, plus a toolkit for finite groupoids.

pub mod cli;
pub mod conditions;
pub mod equivalence;
pub mod expr;
pub mod fields;
pub mod groupoid;
pub mod linalg;
