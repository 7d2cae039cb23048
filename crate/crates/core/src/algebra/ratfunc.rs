use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::unipoly::UniPoly;
use super::{Field, Rational};

/// Element of the rational function field Q(t) in a single variable.
///
/// Always reduced: numerator and denominator are coprime and the
/// denominator is monic. The variable name is carried by the caller.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly<Rational>,
    den: UniPoly<Rational>,
}

impl RatFunc {
    pub fn new(num: UniPoly<Rational>, den: UniPoly<Rational>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_poly(UniPoly::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let l = den.lead().unwrap().clone();
        let inv = Rational::one() / l;
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: UniPoly<Rational>) -> Self {
        RatFunc {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    /// Reads a polynomial in `var` only.
    pub fn from_multi(p: &MultiPoly, var: &str) -> Option<Self> {
        UniPoly::from_multi(p, var).map(Self::from_poly)
    }

    pub fn numer(&self) -> &UniPoly<Rational> {
        &self.num
    }

    pub fn denom(&self) -> &UniPoly<Rational> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self::from_poly(UniPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_poly(UniPoly::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den);
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by zero in Q(t)");
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Field for RatFunc {}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num.to_multi("t"), self.den.to_multi("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn poly(cs: &[i64]) -> UniPoly<Rational> {
        UniPoly::from_coeffs(cs.iter().map(|c| rat(*c)).collect())
    }

    #[test]
    fn reduces_to_lowest_terms() {
        // (z^2 - 1) / (2z - 2) = (z + 1) / 2
        let f = RatFunc::new(poly(&[-1, 0, 1]), poly(&[-2, 2]));
        assert_eq!(f, RatFunc::new(poly(&[1, 1]), poly(&[2])));
        assert!(f.is_polynomial());
    }

    #[test]
    fn field_axioms_on_a_sample() {
        let a = RatFunc::new(poly(&[1, 1]), poly(&[0, 1]));
        let b = RatFunc::new(poly(&[3]), poly(&[1, 0, 1]));
        let c = RatFunc::from_poly(poly(&[0, 2]));
        assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c);
        assert_eq!((a.clone() / b.clone()) * b, a.clone());
        assert_eq!(a.clone() - a, RatFunc::zero());
    }
}
