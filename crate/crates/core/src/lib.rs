pub mod cohomology;
pub mod error;
pub mod fusion;
pub mod labels;
pub mod linalg;
pub mod operators;
pub mod oracle;
pub mod spectra;
pub mod twist;
pub mod verify;

pub use error::{QkError, Result};
