//! Std companion to `sympent-core`: matrix files, JSON reports, the
//! verification suites and the `sympent` command-line tool.

pub mod cli;
pub mod io;
pub mod report;
pub mod suites;
