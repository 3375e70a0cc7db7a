//! IO, file formats, the Monte Carlo harness and the command-line front end
//! for [`branchcover_core`].

pub mod cli;
pub mod experiment;
pub mod format;
pub mod oracle;

