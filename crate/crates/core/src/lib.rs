pub mod catalog;
pub mod cli;
pub mod error;
pub mod groups;
pub mod imprimitivity;
pub mod io;
pub mod linalg;
pub mod mackey;
pub mod repr;
pub mod sampling;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};
