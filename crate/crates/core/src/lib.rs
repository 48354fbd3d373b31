//! Exact symbolic and numeric engine for pseudo-prequantisation on local
//! cotangent charts.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the expression
//! parser and the command line live in the `pseudoquant` crate.

#![no_std]

extern crate alloc;

pub mod bks;
pub mod bohrsommerfeld;
pub mod dynamics;
pub mod error;
pub mod polarisation;
pub mod prequant;
pub mod symcore;

pub use error::Error;
