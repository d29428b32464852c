//! Library side of the `atlsat` command: requirements files, run reports,
//! the scaling sweep, and command dispatch.

pub mod app;
pub mod report;
pub mod reqfile;
pub mod sweep;
