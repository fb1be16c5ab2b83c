pub mod cohomology;
pub mod covers;
pub mod endoscopy;
pub mod error;
pub mod fixtures;
pub mod galois_module;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod localfield;
pub mod rootdata;
pub mod transfer;

pub use error::{Error, Result};
