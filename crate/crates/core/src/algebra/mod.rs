//! Exact arithmetic substrate: rationals, multivariate polynomials, the
//! rational function field in one variable, polynomial matrices and exact
//! linear algebra over any field.

mod fraction;
mod linalg;
mod matrix;
mod poly;
mod ratfunc;
mod unipoly;

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub use fraction::{
    base_variable, divides_over_fraction_field, is_squarefree_over_fraction_field,
    kernel_saturated, min_poly, poly_over_fraction_field, primitive_vector,
};
pub use linalg::{inverse, linear_solve_exact, nullspace, rank, rref, Echelon, LinearSolution};
pub use matrix::{poly_rank, PolyMatrix};
pub use poly::{var_order, Monomial, MultiPoly};
pub use ratfunc::RatFunc;
pub use unipoly::UniPoly;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Name of the spectral variable used by characteristic and minimal
/// polynomials.
pub const SPECTRAL_VAR: &str = "v";

/// Exact field arithmetic on owned values.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `k * 1`.
    fn from_count(k: usize) -> Self {
        let mut acc = Self::zero();
        for _ in 0..k {
            acc = acc + Self::one();
        }
        acc
    }
}

impl Field for Rational {
    fn from_count(k: usize) -> Self {
        Rational::from_integer(k.into())
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
