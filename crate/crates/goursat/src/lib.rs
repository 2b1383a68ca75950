//! Exact invariants of Goursat structures.
//!
//! The crate builds Kumpera-Ruiz normal forms from words of prolongations,
//! computes derived and Lie flags, growth vectors and singularity types,
//! classifies abnormal and rigid directions, converts the n-trailer system
//! to and from Kumpera-Ruiz coordinates, and prolongs contact
//! transformations along Kumpera-Ruiz words.

pub mod abnormal;
pub mod cli;
pub mod contact;
pub mod flags;
pub mod krforms;
pub mod sigtype;
pub mod suite;
pub mod symcore;
pub mod trailer;
pub mod vfdsl;
