//! Weisfeiler-Leman refinement for finite groups, with the graph, CFI and
//! class-2 group machinery needed to compare it against graph WL.

pub mod error;
pub mod fpalgebra;
pub mod cayley;
pub mod cfi;
pub mod cfigroups;
pub mod graphs;
pub mod mekler;
pub mod wlgroups;

pub use error::{Error, Result};
