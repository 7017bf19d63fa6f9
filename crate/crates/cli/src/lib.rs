//! File formats, experiment configuration, worker pool, and command
//! implementations behind the `shallow-landscape` binary.

pub mod commands;
pub mod config;
pub mod formats;
pub mod manifest;
pub mod pool;
