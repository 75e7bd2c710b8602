//! Exact continued-fraction machinery and minimax risk evaluation for
//! periodic boxcar deconvolution.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; IO, CLI and parallel drivers live in the
//! companion `boxcar` crate.

#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod boxcar;
pub mod diophantine;
pub mod equidist;
mod error;
mod fixed;
pub mod risk;
pub mod sim;

pub use crate::boxcar::{BoxcarKernel, DirectData, Homogeneous, Spectrum, Tabulated};
pub use crate::diophantine::{Convergent, Distance, IrrationalNumber};
pub use crate::equidist::BlockGrid;
pub use crate::error::{Error, Result};
pub use crate::risk::{ClassKind, RiskResult, SmoothnessClass};
