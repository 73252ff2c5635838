//! Exact engine for two-ray games on rank-2 toric blow-ups of weighted
//! complete intersections.
#![no_std]

extern crate alloc;

pub mod blowup;
pub mod cones;
pub mod cox;
pub mod error;
pub mod game;
pub mod intersect;
pub mod poly;
pub mod unproj;

pub use error::{Error, Result};
