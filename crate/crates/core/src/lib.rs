pub mod algsets;
pub mod cli;
pub mod error;
pub mod groups;
pub mod scenario;
pub mod seminorm;
pub mod sets;
pub mod stagewise;
pub mod supernormal;
pub mod words;

pub use error::{Error, ParseError, Result};
