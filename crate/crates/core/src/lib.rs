//! Exact and p-adic computations around exceptional zeros of p-adic L-functions.

pub mod arith;
pub mod characters;
pub mod compact_open;
pub mod cvalue;
pub mod cyclotomic;
pub mod detcheck;
pub mod error;
pub mod linalg;
pub mod local_dist;
pub mod measure;
pub mod mtt;
pub mod padic;
pub mod steinberg;
pub mod suite;
pub mod tree;
pub mod tree_rep;

pub use error::{Error, Result};
