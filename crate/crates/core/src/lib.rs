//! Invariant spin^r structures on homogeneous spaces, decided from
//! fundamental-group and Lie-algebra data with exact arithmetic.

pub mod abelian;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod liecat;
pub mod lifting;
pub mod repcat;
pub mod spaces;
pub mod template;

pub use catalog::Catalog;
pub use error::{Error, Result};
