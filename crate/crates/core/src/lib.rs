//! Exact computations for log adjunction on combinatorial models: curve
//! covers, SNC surface models with b-divisors, unramified covers and the
//! blowup algorithm that stabilizes the divisorial part.
#![no_std]

extern crate alloc;

pub mod cover;
pub mod curves;
pub mod exactnum;
pub mod scenarios;
pub mod surface;

pub use exactnum::{Context, ExtReal, Generator, NumError};
