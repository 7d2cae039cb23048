//! Exact computations for matrix differential-operator algebras and their
//! geometry: the (lambda-parametric) Weyl algebra, the mixed algebra of
//! polynomial matrices and derivations, Higgs pairs with their spectral
//! covers, and Cech-level twisted bundles on finite nerves.
//!
//! Everything works over the rationals and polynomial rings over them; no
//! floating point is used anywhere. The crate is `no_std` and needs only
//! `alloc`.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod diffop;
mod error;
pub mod parse;
pub mod spectral;
pub mod twisted;
pub mod weyl;

pub use algebra::{MultiPoly, PolyMatrix, RatFunc, Rational, UniPoly};
pub use error::{Error, Result};
pub use weyl::{LambdaMode, WeylElement};

