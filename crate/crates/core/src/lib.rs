pub mod decomposition;
pub mod error;
pub mod instances;
pub mod numeric;
pub mod polytope;
pub mod proof;
pub mod verifier;

pub use error::{Error, Result};
