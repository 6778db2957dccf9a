//! Representation theory and non-Abelian Fourier analysis for small finite
//! groups, driving a Label Cover to 3-LIN reduction over group templates.
//! Approximation solvers and a Fourier decoder sit on top of the reduction.

pub mod catalog;
pub mod decoder;
pub mod error;
pub mod fourier;
pub mod group;
pub mod io;
pub mod rational;
pub mod reduction;
pub mod selftest;
pub mod solvers;
pub mod rep;

pub use error::{Error, Result};
pub use group::{FiniteGroup, Homomorphism, PowerGroup, Subgroup, Template};
pub use rational::Rational;

/// Environment variable overriding every enumeration cap.
pub const CAP_ENV: &str = "GROUPLIN_CAP";

/// `default`, unless `GROUPLIN_CAP` holds a positive integer.
pub fn cap(default: u128) -> u128 {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(default)
}
