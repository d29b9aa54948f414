//! Command-line pipeline for irony author profiling: configuration, the
//! synthetic corpus generator and one function per command.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod synth;
