//! Exact degree-of-parity arithmetic and rationality certificates.
//!
//! Every positive integer splits uniquely as `n = 2^h · u` with `u` odd. The
//! exponent `h` (the *degree of parity*) is additive over products, so a
//! square always has an even degree and a cube a degree divisible by three.
//! That single observation decides the irrationality of `√n` whenever `h` is
//! odd and reduces every other square-root question to an odd kernel.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised as:
//!
//! - [`natural`]: arbitrary-precision non-negative integers.
//! - [`valuation`]: the pair/impair decomposition and its laws.
//! - [`kernel`]: a tiny statement grammar and a checker for proof traces.
//! - [`engine`]: layered `√n` / `∛n` deciders that emit checkable traces.
//! - [`ancient`]: binary decomposition, Egyptian multiplication, the
//!   Nicomachus table and Euclid's perfect numbers.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod ancient;
pub mod engine;
mod error;
pub mod kernel;
pub mod natural;
pub mod valuation;

pub use error::{Error, Result};
pub use natural::Natural;
