pub mod cartan;
pub mod cli;
pub mod error;
pub mod groupsym;
pub mod laurent;
pub mod oracle;
pub mod potential;
pub mod tropical;
pub mod words;

pub use error::{Error, Result};
