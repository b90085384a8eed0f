//! Command implementations behind the `pysmell` binary.

pub mod adapter;
pub mod commands;
pub mod github;
pub mod scan;
