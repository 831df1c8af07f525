//! Implementation of the `thzchan` binary: argument grammar, command
//! runners, file formats, and the run manifest. Split out as a library so
//! integration tests can exercise the I/O layer directly.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;
