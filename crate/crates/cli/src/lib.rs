//! Shared machinery behind the `hbf` binary: option resolution, the run
//! manifest, and the one-shot reproduction driver for the acceptance
//! criteria (also exercised by the `acceptance` test target).

pub mod acceptance;
pub mod config;
pub mod manifest;
