//! Classical ingredients: finite fields, MOLS, transversal designs, Steiner
//! triple systems, GDDs, searched splitting designs, and the artifact cache.

pub mod field;
pub mod mols;
pub mod search;
pub mod sts;
pub mod td;
pub mod cache;
pub mod gdd;
