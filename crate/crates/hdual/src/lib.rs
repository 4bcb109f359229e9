//! File formats, reports and the command-line front end for `hdual-core`.

pub mod cli;
pub mod format;
pub mod report;

pub use cli::run;
