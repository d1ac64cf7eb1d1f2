//! IO, file formats and the command-line pipeline around `editweight-core`.

pub mod checkpoint;
pub mod cli;
pub mod formats;
pub mod manifest;
pub mod pipeline;
pub mod plaba;
pub mod report;
