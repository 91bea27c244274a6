//! Library side of the `optia` binary, exposed so integration tests can read
//! the flag registry.

pub mod cli;
pub mod commands;
