//! Exact enumeration and bound constants for permutations of `[n] = {1..n}`
//! under arithmetic compatibility constraints.
//!
//! A permutation `π` of `[n]` is *lcm-compatible* if `lcm[j, π(j)] ≤ n` for
//! every `j`, *divisor-compatible* if `j | π(j)` or `π(j) | j` for every `j`,
//! and *anti-coprime* if `gcd(j, π(j)) > 1` for every `j ≥ 2`. Counting such
//! permutations is a 0-1 matrix permanent; this crate provides the exact
//! engines ([`permanent`]), the compatibility matrices ([`compat`]), the
//! number-theory kernel behind them ([`numtheory`]), the growth-rate
//! constants attached to these counts ([`bounds`]), and the explicit
//! block-permutation families witnessing the lower bounds
//! ([`constructions`]).
//!
//! All counts are exact arbitrary-precision integers; all rational
//! quantities (`α(b) = b/σ(b)`, `φ(b)/b`) are exact rationals. Floating
//! point appears only where a constant is itself a real number.

pub mod bounds;
pub mod compat;
pub mod constructions;
mod error;
pub mod fixtures;
pub mod numtheory;
pub mod permanent;
pub mod verify;

pub use error::{Error, Result};

/// Exact nonnegative count; permutation counts overflow 64 bits quickly
/// (e.g. 24! at τ(480) = 24).
pub type BigCount = num_bigint::BigUint;
