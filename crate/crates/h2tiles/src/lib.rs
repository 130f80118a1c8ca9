//! File formats, the verification suite and the command-line front end for
//! `h2tiles-core`.

pub mod cli;
pub mod format;
pub mod verify;
