pub mod colorful;
pub mod complexes;
pub mod error;
pub mod flips;
pub mod gale;
pub mod io;
pub mod kernel;
pub mod minkowski;
pub mod ptransform;

pub use error::{Error, Result};
