//! IO, parallel drivers and the command line for `boxcar-core`.

pub mod cli;
pub mod config;
pub mod figures;
pub mod par;
pub mod table;
