//! Fixture and report formats, the end-to-end pipeline and the command-line
//! front end for [`levi_disc_core`].

pub mod commands;
pub mod discfile;
pub mod fixture;
pub mod pipeline;
pub mod report;
