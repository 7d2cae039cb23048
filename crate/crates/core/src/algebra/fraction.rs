//! Linear algebra over the rational function field Q(t), where `t` is the
//! single base variable of a polynomial matrix.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::linalg::{nullspace, solve, LinearSolution};
use super::matrix::PolyMatrix;
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::unipoly::UniPoly;
use super::{Rational, SPECTRAL_VAR};
use crate::{Error, Result};

const DEFAULT_BASE: &str = "z";

/// The single variable shared by a set of polynomials, ignoring `exclude`.
/// Constant input reports `z`.
pub fn base_variable<'a>(
    polys: impl IntoIterator<Item = &'a MultiPoly>,
    exclude: &[&str],
) -> Result<String> {
    let mut found: Option<String> = None;
    for p in polys {
        for v in p.vars() {
            if exclude.contains(&v.as_str()) {
                continue;
            }
            match &found {
                None => found = Some(v.clone()),
                Some(f) if f == v => {}
                Some(f) => {
                    return Err(Error::InvalidInput(format!(
                        "expected a univariate base ring, found both '{}' and '{}'",
                        f, v
                    )))
                }
            }
        }
    }
    Ok(found.unwrap_or_else(|| DEFAULT_BASE.to_string()))
}

fn to_ratfunc(p: &MultiPoly, var: &str) -> Result<RatFunc> {
    RatFunc::from_multi(p, var)
        .ok_or_else(|| Error::InvalidInput(format!("'{}' is not a polynomial in {} alone", p, var)))
}

fn ratfunc_rows(m: &PolyMatrix, var: &str) -> Result<Vec<Vec<RatFunc>>> {
    m.row_vecs()
        .iter()
        .map(|row| row.iter().map(|e| to_ratfunc(e, var)).collect())
        .collect()
}

fn mat_mul(a: &[Vec<RatFunc>], b: &[Vec<RatFunc>]) -> Vec<Vec<RatFunc>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(RatFunc::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

/// Clears denominators of a vector over Q(t) and divides by the content,
/// giving a primitive vector over Z[t] (integer coefficients, coprime, and
/// no common polynomial factor).
pub fn primitive_vector(v: &[RatFunc], var: &str) -> Vec<MultiPoly> {
    let lcm = v
        .iter()
        .fold(UniPoly::<Rational>::one(), |acc, x| {
            let g = acc.gcd(x.denom());
            acc.mul(x.denom()).div_rem(&g).0
        });
    let cleared: Vec<UniPoly<Rational>> = v
        .iter()
        .map(|x| x.numer().mul(&lcm.div_rem(x.denom()).0))
        .collect();
    let content = cleared
        .iter()
        .fold(UniPoly::<Rational>::zero(), |acc, p| acc.gcd(p));
    if content.is_zero() {
        return cleared.iter().map(|p| p.to_multi(var)).collect();
    }
    let polys: Vec<MultiPoly> = cleared
        .iter()
        .map(|p| p.div_rem(&content).0.to_multi(var))
        .collect();
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for p in &polys {
        let c = p.rational_content();
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return polys;
    }
    let scale = Rational::new(den, num);
    polys.iter().map(|p| p.scale(&scale)).collect()
}

/// Minimal polynomial of a square matrix over Q(t), returned in the
/// spectral variable `v` with denominators cleared (so the coefficients
/// lie in Q[t] and share no common factor).
pub fn min_poly(m: &PolyMatrix) -> Result<MultiPoly> {
    if !m.is_square() {
        return Err(Error::Shape("minimal polynomial of a non-square matrix".into()));
    }
    let var = base_variable(m.entries(), &[])?;
    if var == SPECTRAL_VAR {
        return Err(Error::InvalidInput("matrix entries already use 'v'".into()));
    }
    let n = m.rows();
    let a = ratfunc_rows(m, &var)?;
    let flat = |x: &Vec<Vec<RatFunc>>| -> Vec<RatFunc> { x.iter().flatten().cloned().collect() };
    let identity: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect())
        .collect();
    let mut powers = vec![flat(&identity)];
    let mut current = identity;
    for k in 1..=n {
        current = mat_mul(&current, &a);
        let target = flat(&current);
        // columns are the flattened lower powers
        let system: Vec<Vec<RatFunc>> = (0..n * n)
            .map(|row| powers.iter().map(|p| p[row].clone()).collect())
            .collect();
        if let LinearSolution::Consistent { particular, .. } = solve(&system, k, &target) {
            let mut coeffs: Vec<RatFunc> = particular.into_iter().map(|c| -c).collect();
            coeffs.push(RatFunc::one());
            let prim = primitive_vector(&coeffs, &var);
            let lead_sign = prim[k].leading_coeff().cloned().unwrap_or_else(Rational::one);
            let norm = Rational::one() / lead_sign;
            let poly = MultiPoly::from_coefficients_in(SPECTRAL_VAR, &prim);
            return Ok(poly.scale(&norm));
        }
        powers.push(target);
    }
    unreachable!("Cayley-Hamilton bounds the degree of the minimal polynomial")
}

/// Kernel of a polynomial matrix over Q(t), with each basis vector cleared
/// of denominators and content: generators of the saturated Q[t]-submodule.
pub fn kernel_saturated(m: &PolyMatrix) -> Result<Vec<Vec<MultiPoly>>> {
    let var = base_variable(m.entries(), &[])?;
    let rows = ratfunc_rows(m, &var)?;
    Ok(nullspace(&rows, m.cols())
        .iter()
        .map(|v| primitive_vector(v, &var))
        .collect())
}

/// Reads `p` as a univariate polynomial in `main` with coefficients in
/// Q(`base`).
pub fn poly_over_fraction_field(p: &MultiPoly, main: &str, base: &str) -> Result<UniPoly<RatFunc>> {
    let coeffs = p
        .coefficients_in(main)
        .iter()
        .map(|c| to_ratfunc(c, base))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::from_coeffs(coeffs))
}

/// Whether `divisor` divides `p` in Q(t)[main].
pub fn divides_over_fraction_field(divisor: &MultiPoly, p: &MultiPoly, main: &str) -> Result<bool> {
    if divisor.is_zero() {
        return Ok(p.is_zero());
    }
    let base = base_variable([divisor, p], &[main])?;
    let d = poly_over_fraction_field(divisor, main, &base)?;
    let q = poly_over_fraction_field(p, main, &base)?;
    Ok(q.div_rem(&d).1.is_zero())
}

/// Squarefreeness in Q(t)[main]: `gcd(p, dp/dmain)` is a unit.
pub fn is_squarefree_over_fraction_field(p: &MultiPoly, main: &str) -> Result<bool> {
    let base = base_variable([p], &[main])?;
    let q = poly_over_fraction_field(p, main, &base)?;
    if q.is_zero() {
        return Ok(false);
    }
    Ok(q.gcd(&q.derivative()).degree() == Some(0))
}
