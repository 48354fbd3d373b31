//! File formats, expression parsing, reference checks and the command line
//! for the `pseudoquant-core` engine.

pub mod catalog;
pub mod cli;
pub mod output;
pub mod parse;
pub mod problem;
pub mod random;
pub mod verify;

pub use pseudoquant_core as core;
