//! Distributions of subgame-perfect values of random extensive-form games
//! over complete k-ary trees, their analytic (CDF and grid-measure)
//! engines, and the bargaining solution the concentration limits define.

pub mod cdf;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod rng;
pub mod solution;
pub mod stats;
pub mod tree;

pub use error::{Error, Result};
