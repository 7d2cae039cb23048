use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Rational;

fn var_key(name: &str) -> (u8, u32, &str) {
    let indexed = |prefix: char| -> Option<u32> {
        let rest = name.strip_prefix(prefix)?;
        if rest.is_empty() {
            Some(0)
        } else if rest.bytes().all(|b| b.is_ascii_digit()) {
            rest.parse().ok()
        } else {
            None
        }
    };
    if let Some(i) = indexed('x') {
        return (0, i, name);
    }
    if let Some(i) = indexed('w') {
        return (1, i, name);
    }
    match name {
        "z" => (2, 0, name),
        "v" => (3, 0, name),
        "lambda" => (4, 0, name),
        "m" => (5, 0, name),
        _ => (6, 0, name),
    }
}

/// Fixed variable order: position variables `x*`, then `w*`, then `z`, `v`,
/// `lambda`, `m`, then anything else alphabetically.
pub fn var_order(a: &str, b: &str) -> Ordering {
    var_key(a).cmp(&var_key(b))
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with rational coefficients.
///
/// The stored form is canonical: variables are exactly those that occur,
/// sorted by [`var_order`], and no zero coefficient is kept. Structural
/// equality is therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
    out.sort_by(|x, y| var_order(x, y));
    out.dedup();
    out
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Self {
        Self::term(Rational::one(), &[(name, 1)])
    }

    /// `coeff * prod(var^exp)`.
    pub fn term(coeff: Rational, powers: &[(&str, u32)]) -> Self {
        let mut vars: Vec<String> = powers.iter().map(|(v, _)| v.to_string()).collect();
        vars.sort_by(|x, y| var_order(x, y));
        vars.dedup();
        let mut exps = vec![0u32; vars.len()];
        for (v, e) in powers {
            let pos = vars.iter().position(|w| w == v).unwrap();
            exps[pos] += e;
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), coeff);
        Self::from_parts(vars, terms)
    }

    /// Builds a polynomial from raw parts, restoring the canonical form.
    pub fn from_parts(vars: Vec<String>, terms: BTreeMap<Monomial, Rational>) -> Self {
        let mut p = MultiPoly { vars, terms };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        let sorted = self.vars.windows(2).all(|w| var_order(&w[0], &w[1]) == Ordering::Less);
        if used.iter().all(|u| *u) && sorted {
            return;
        }
        let mut keep: Vec<(usize, String)> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| used[*i])
            .map(|(i, v)| (i, v.clone()))
            .collect();
        keep.sort_by(|a, b| var_order(&a.1, &b.1));
        let terms = core::mem::take(&mut self.terms);
        for (m, c) in terms {
            let exps = keep.iter().map(|(i, _)| m.0[*i]).collect();
            *self.terms.entry(Monomial(exps)).or_insert_with(Rational::zero) += c;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self.vars = keep.into_iter().map(|(_, v)| v).collect();
    }

    fn embed(&self, vars: &[String]) -> BTreeMap<Monomial, Rational> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("variable missing from context"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; vars.len()];
                for (i, e) in m.0.iter().enumerate() {
                    exps[map[i]] = *e;
                }
                (Monomial(exps), c.clone())
            })
            .collect()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn uses(&self, var: &str) -> bool {
        self.vars.iter().any(|v| v == var)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a polynomial with no variables.
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.vars.is_empty() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (descending graded-lex) order, each as a list of
    /// `(variable, exponent)` with zero exponents omitted.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<(&str, u32)>, &Rational)> + '_ {
        self.terms.iter().rev().map(move |(m, c)| {
            let powers = self
                .vars
                .iter()
                .zip(m.0.iter())
                .filter(|(_, e)| **e > 0)
                .map(|(v, e)| (v.as_str(), *e))
                .collect();
            (powers, c)
        })
    }

    /// Coefficient of the monomial given by `(variable, exponent)` pairs.
    pub fn coeff_of(&self, powers: &[(&str, u32)]) -> Rational {
        let mut exps = vec![0u32; self.vars.len()];
        for (v, e) in powers {
            if *e == 0 {
                continue;
            }
            match self.vars.iter().position(|w| w == v) {
                Some(i) => exps[i] = *e,
                None => return Rational::zero(),
            }
        }
        self.terms.get(&Monomial(exps)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        Some(match self.vars.iter().position(|v| v == var) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        })
    }

    /// Writes `self = sum_k c_k * var^k` and returns `[c_0, c_1, ...]`.
    pub fn coefficients_in(&self, var: &str) -> Vec<MultiPoly> {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return if self.is_zero() { Vec::new() } else { vec![self.clone()] };
        };
        let deg = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0) as usize;
        let mut parts: Vec<BTreeMap<Monomial, Rational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let k = exps[i] as usize;
            exps[i] = 0;
            parts[k].insert(Monomial(exps), c.clone());
        }
        parts
            .into_iter()
            .map(|t| MultiPoly::from_parts(self.vars.clone(), t))
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(var: &str, coeffs: &[MultiPoly]) -> MultiPoly {
        let x = MultiPoly::var(var);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: &str) -> MultiPoly {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return MultiPoly::zero();
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            terms.insert(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        MultiPoly::from_parts(self.vars.clone(), terms)
    }

    /// Replaces `var` by `value` everywhere.
    pub fn substitute(&self, var: &str, value: &MultiPoly) -> MultiPoly {
        if !self.uses(var) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(var);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn eval(&self, var: &str, value: &Rational) -> MultiPoly {
        self.substitute(var, &MultiPoly::constant(value.clone()))
    }

    /// Renames a variable; the target must not already occur.
    pub fn rename(&self, from: &str, to: &str) -> MultiPoly {
        self.substitute(from, &MultiPoly::var(to))
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let vars = union_vars(&self.vars, &divisor.vars);
        let d = MultiPoly {
            terms: divisor.embed(&vars),
            vars: vars.clone(),
        };
        let mut rem = MultiPoly {
            terms: self.embed(&vars),
            vars: vars.clone(),
        };
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading() {
            if rm.0.iter().zip(dm.0.iter()).any(|(a, b)| a < b) {
                return None;
            }
            let qm = Monomial(rm.0.iter().zip(dm.0.iter()).map(|(a, b)| a - b).collect());
            let qc = rc / &dc;
            let step = MultiPoly {
                vars: vars.clone(),
                terms: core::iter::once((qm.clone(), qc.clone())).collect(),
            };
            let sub = mul_same(&step, &d);
            for (m, c) in sub.terms {
                let e = rem.terms.entry(m).or_insert_with(Rational::zero);
                *e -= c;
            }
            rem.terms.retain(|_, c| !c.is_zero());
            quot.insert(qm, qc);
        }
        Some(MultiPoly::from_parts(vars, quot))
    }

    /// Integer content scale: the positive rational `c` such that
    /// `self / c` has coprime integer coefficients.
    pub fn rational_content(&self) -> Rational {
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        Rational::new(num, den)
    }

    /// Leading coefficient in canonical order.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.leading().map(|(_, c)| c)
    }
}

fn mul_same(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let m = Monomial(ma.0.iter().zip(mb.0.iter()).map(|(x, y)| x + y).collect());
            *terms.entry(m).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    MultiPoly {
        vars: a.vars.clone(),
        terms,
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let vars = union_vars(&self.vars, &rhs.vars);
        let mut terms = self.embed(&vars);
        for (m, c) in rhs.embed(&vars) {
            *terms.entry(m).or_insert_with(Rational::zero) += c;
        }
        MultiPoly::from_parts(vars, terms)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let vars = union_vars(&self.vars, &rhs.vars);
        let a = MultiPoly {
            terms: self.embed(&vars),
            vars: vars.clone(),
        };
        let b = MultiPoly {
            terms: rhs.embed(&vars),
            vars,
        };
        let mut p = mul_same(&a, &b);
        p.normalize();
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical text: terms in descending graded-lex order, coefficients
    /// as `p/q`, e.g. `3/2*z^2*v - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (powers, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut first = true;
            if powers.is_empty() || !abs.is_one() {
                write!(f, "{}", abs)?;
                first = false;
            }
            for (v, e) in powers {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if e == 1 {
                    f.write_str(v)?;
                } else {
                    write!(f, "{}^{}", v, e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn z() -> MultiPoly {
        MultiPoly::var("z")
    }
    fn v() -> MultiPoly {
        MultiPoly::var("v")
    }

    #[test]
    fn difference_of_squares() {
        let p = (z() + MultiPoly::one()) * (z() - MultiPoly::one());
        assert_eq!(p.to_string(), "z^2 - 1");
    }

    #[test]
    fn additive_identity_and_trimmed_vars() {
        let p = z() * v() + MultiPoly::int(3);
        assert_eq!(&p + &MultiPoly::zero(), p);
        let q = &p - &(z() * v());
        assert_eq!(q, MultiPoly::int(3));
        assert!(q.vars().is_empty());
    }

    #[test]
    fn expansion_in_canonical_order() {
        // (z^2 + z)(v + 1) expanded by hand: z^2 v + z^2 + z v + z
        let p = (z().pow(2) + z()) * (v() + MultiPoly::one());
        let expected = MultiPoly::term(rat(1), &[("z", 2), ("v", 1)])
            + MultiPoly::term(rat(1), &[("z", 2)])
            + MultiPoly::term(rat(1), &[("z", 1), ("v", 1)])
            + z();
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "z^2*v + z^2 + z*v + z");
    }

    #[test]
    fn derivatives() {
        assert_eq!(z().pow(3).derivative("z"), MultiPoly::int(3) * z().pow(2));
        assert!(v().pow(2).derivative("z").is_zero());
        let p = z().pow(2) * v() + z();
        assert_eq!(p.derivative("z").to_string(), "2*z*v + 1");
    }

    #[test]
    fn printing_rationals() {
        let p = MultiPoly::term(Rational::new(3.into(), 2.into()), &[("z", 2), ("v", 1)])
            - MultiPoly::one();
        assert_eq!(p.to_string(), "3/2*z^2*v - 1");
        assert_eq!((-z()).to_string(), "-z");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn variable_order_is_fixed() {
        let p = MultiPoly::var("lambda") + MultiPoly::var("x1") + v() + z() + MultiPoly::var("w2");
        assert_eq!(p.to_string(), "x1 + w2 + z + v + lambda");
    }

    #[test]
    fn exact_division() {
        let a = z() + v();
        let b = z() - v() + MultiPoly::int(2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a));
        assert_eq!((&prod + &MultiPoly::one()).div_exact(&b), None);
    }

    #[test]
    fn coefficients_round_trip() {
        let p = z().pow(2) * v() + z() * MultiPoly::int(5) - v().pow(3);
        let cs = p.coefficients_in("v");
        assert_eq!(cs.len(), 4);
        assert_eq!(MultiPoly::from_coefficients_in("v", &cs), p);
    }
}
