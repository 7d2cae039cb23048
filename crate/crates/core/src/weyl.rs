//! The Weyl algebra A_n and its lambda-parametric family, in which
//! `[d_i, x_j] = lambda * delta_ij`. At `lambda = 0` the algebra is the
//! commutative polynomial ring, at `lambda = 1` it is A_n.
//!
//! Elements are stored normal-ordered: every monomial is `x^a d^b` with
//! all positions left of all derivations. Products are normal-ordered with
//! the closed form, per variable,
//!
//! ```text
//! d^m x^n = sum_k C(m,k) C(n,k) k! lambda^k x^(n-k) d^(m-k)
//! ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{MultiPoly, Rational};
use crate::parse::{canonical_name, evaluate, parse_expr, ExprTarget};
use crate::{Error, Result};

/// Name of the deformation parameter inside coefficients.
pub const LAMBDA: &str = "lambda";

/// Whether lambda is a polynomial variable or a fixed rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LambdaMode {
    Formal,
    Fixed(Rational),
}

impl LambdaMode {
    pub fn classical() -> Self {
        LambdaMode::Fixed(Rational::one())
    }

    /// `lambda^k` as a coefficient.
    pub fn power(&self, k: u32) -> MultiPoly {
        match self {
            LambdaMode::Formal => MultiPoly::var(LAMBDA).pow(k),
            LambdaMode::Fixed(c) => MultiPoly::constant(num_traits::pow(c.clone(), k as usize)),
        }
    }

    /// `lambda` itself.
    pub fn value(&self) -> MultiPoly {
        self.power(1)
    }
}

impl fmt::Display for LambdaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaMode::Formal => f.write_str("formal"),
            LambdaMode::Fixed(c) => write!(f, "{}", c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct WeylMonomial {
    x: Vec<u32>,
    d: Vec<u32>,
}

impl WeylMonomial {
    fn unit(n: usize) -> Self {
        WeylMonomial {
            x: vec![0; n],
            d: vec![0; n],
        }
    }

    fn degree(&self) -> u32 {
        self.x.iter().chain(self.d.iter()).sum()
    }
}

impl Ord for WeylMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.d.cmp(&other.d))
    }
}

impl PartialOrd for WeylMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Normal-ordered element of the (lambda-parametric) Weyl algebra in `n`
/// position variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    n: usize,
    mode: LambdaMode,
    terms: BTreeMap<WeylMonomial, MultiPoly>,
}

/// Generator of the Weyl algebra, by zero-based variable index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    X(usize),
    D(usize),
}

/// Which slot of the commutator bracket the generator occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `[g, .]`
    Left,
    /// `[., g]`
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CommutatorStep {
    pub generator: Generator,
    pub side: Side,
}

/// Witness that the two-sided ideal generated by an element contains a
/// nonzero scalar: replaying the commutators turns the element into
/// `final_scalar`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityCertificate {
    pub steps: Vec<CommutatorStep>,
    pub final_scalar: MultiPoly,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Coefficients of `d^m x^n = sum_k c_k x^(n-k) d^(m-k)` without the
/// lambda power: `c_k = C(m,k) C(n,k) k!`.
pub fn reorder_coefficients(m: u32, n: u32) -> Vec<BigInt> {
    (0..=m.min(n))
        .map(|k| binomial(m, k) * binomial(n, k) * factorial(k))
        .collect()
}

fn position_name(n: usize, i: usize) -> String {
    if n == 1 {
        String::from("x")
    } else {
        format!("x{}", i + 1)
    }
}

fn derivation_name(n: usize, i: usize) -> String {
    if n == 1 {
        String::from("d")
    } else {
        format!("d{}", i + 1)
    }
}

impl WeylElement {
    pub fn zero(n: usize, mode: LambdaMode) -> Self {
        WeylElement {
            n,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, mode: LambdaMode) -> Self {
        Self::scalar(n, mode, MultiPoly::one())
    }

    /// Scalar element; in fixed mode any `lambda` in `c` is evaluated.
    pub fn scalar(n: usize, mode: LambdaMode, c: MultiPoly) -> Self {
        Self::monomial(n, mode, &vec![0; n], &vec![0; n], c)
    }

    /// `c * x^a d^b`.
    pub fn monomial(n: usize, mode: LambdaMode, a: &[u32], b: &[u32], c: MultiPoly) -> Self {
        assert!(a.len() == n && b.len() == n, "exponent vectors must have length n");
        let c = match &mode {
            LambdaMode::Fixed(val) => c.eval(LAMBDA, val),
            LambdaMode::Formal => c,
        };
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(
                WeylMonomial {
                    x: a.to_vec(),
                    d: b.to_vec(),
                },
                c,
            );
        }
        WeylElement { n, mode, terms }
    }

    pub fn x(n: usize, mode: LambdaMode, i: usize) -> Self {
        let mut a = vec![0; n];
        a[i] = 1;
        Self::monomial(n, mode, &a, &vec![0; n], MultiPoly::one())
    }

    pub fn d(n: usize, mode: LambdaMode, i: usize) -> Self {
        let mut b = vec![0; n];
        b[i] = 1;
        Self::monomial(n, mode, &vec![0; n], &b, MultiPoly::one())
    }

    pub fn generator(n: usize, mode: LambdaMode, g: Generator) -> Self {
        match g {
            Generator::X(i) => Self::x(n, mode, i),
            Generator::D(i) => Self::d(n, mode, i),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> &LambdaMode {
        &self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded order as `(x exponents, d exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], &MultiPoly)> + '_ {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| (m.x.as_slice(), m.d.as_slice(), c))
    }

    /// Coefficient of `x^a d^b`.
    pub fn coeff(&self, a: &[u32], b: &[u32]) -> MultiPoly {
        self.terms
            .get(&WeylMonomial {
                x: a.to_vec(),
                d: b.to_vec(),
            })
            .cloned()
            .unwrap_or_else(MultiPoly::zero)
    }

    /// Total bidegree `|a| + |b|` of the highest term, `None` for zero.
    pub fn bidegree(&self) -> Option<u32> {
        self.terms.keys().map(WeylMonomial::degree).max()
    }

    pub fn x_degree(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.x[i]).max().unwrap_or(0)
    }

    pub fn d_degree(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.d[i]).max().unwrap_or(0)
    }

    /// The element as a scalar if it has bidegree zero.
    pub fn scalar_part(&self) -> Option<MultiPoly> {
        match self.terms.len() {
            0 => Some(MultiPoly::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.mode != other.mode {
            return Err(Error::ModeMismatch(format!(
                "(n = {}, lambda = {}) vs (n = {}, lambda = {})",
                self.n, self.mode, other.n, other.mode
            )));
        }
        Ok(())
    }

    fn insert(&mut self, m: WeylMonomial, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(MultiPoly::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Multiplies every coefficient by a polynomial in lambda.
    pub fn scale(&self, c: &MultiPoly) -> Self {
        let mut out = WeylElement::zero(self.n, self.mode.clone());
        let c = match &self.mode {
            LambdaMode::Fixed(val) => c.eval(LAMBDA, val),
            LambdaMode::Formal => c.clone(),
        };
        for (m, a) in &self.terms {
            out.insert(m.clone(), a * &c);
        }
        out
    }

    /// Normal-ordered product.
    pub fn weyl_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.n;
        let mut out = WeylElement::zero(n, self.mode.clone());
        // per-variable reordering tables, keyed by (d exponent of left, x exponent of right)
        let mut cache: BTreeMap<(u32, u32), Vec<BigInt>> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let base = ca * cb;
                let tables: Vec<Vec<BigInt>> = (0..n)
                    .map(|i| {
                        cache
                            .entry((ma.d[i], mb.x[i]))
                            .or_insert_with(|| reorder_coefficients(ma.d[i], mb.x[i]))
                            .clone()
                    })
                    .collect();
                // odometer over k in prod_i [0, len_i)
                let mut k = vec![0usize; n];
                loop {
                    let mut coeff = BigInt::one();
                    let mut total = 0u32;
                    let mut mono = WeylMonomial::unit(n);
                    for i in 0..n {
                        coeff *= &tables[i][k[i]];
                        total += k[i] as u32;
                        mono.x[i] = ma.x[i] + mb.x[i] - k[i] as u32;
                        mono.d[i] = ma.d[i] + mb.d[i] - k[i] as u32;
                    }
                    let c = (&base * &self.mode.power(total)).scale(&Rational::from_integer(coeff));
                    out.insert(mono, c);
                    if !advance(&mut k, &tables) {
                        break;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.weyl_mul(other)?.checked_sub(&other.weyl_mul(self)?)
    }

    /// Applies the element to a polynomial in the position variables:
    /// `x_i` multiplies and `d_i` acts as `lambda * d/dx_i`. Only defined
    /// for a fixed lambda.
    pub fn act_on_polynomial(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let LambdaMode::Fixed(lambda) = &self.mode else {
            return Err(Error::ModeMismatch(
                "the polynomial action needs a fixed lambda".into(),
            ));
        };
        let names: Vec<String> = (0..self.n).map(|i| position_name(self.n, i)).collect();
        if let Some(bad) = f.vars().iter().find(|v| !names.contains(v)) {
            return Err(Error::InvalidInput(format!(
                "'{}' is not a position variable of A_{}",
                bad, self.n
            )));
        }
        let mut acc = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut g = f.clone();
            for (i, name) in names.iter().enumerate() {
                for _ in 0..m.d[i] {
                    g = g.derivative(name).scale(lambda);
                }
            }
            let xs: Vec<(&str, u32)> = names.iter().map(String::as_str).zip(m.x.iter().copied()).collect();
            let mono = MultiPoly::term(Rational::one(), &xs);
            acc = &acc + &(&(&g * &mono) * c);
        }
        Ok(acc)
    }

    /// Image under `x_i -> d_i`, `d_i -> -x_i`, re-normal-ordered.
    pub fn fourier(&self) -> Self {
        let n = self.n;
        let zeros = vec![0; n];
        let mut out = WeylElement::zero(n, self.mode.clone());
        for (m, c) in &self.terms {
            let sign: u32 = m.d.iter().sum();
            let ds = WeylElement::monomial(n, self.mode.clone(), &zeros, &m.x, c.clone());
            let xs = WeylElement::monomial(n, self.mode.clone(), &m.d, &zeros, MultiPoly::one());
            let mut prod = ds.weyl_mul(&xs).expect("same mode");
            if sign % 2 == 1 {
                prod = -&prod;
            }
            out = out.checked_add(&prod).expect("same mode");
        }
        out
    }

    /// Substitutes `lambda = c`, turning a formal element into a fixed one.
    pub fn specialize_lambda(&self, c: &Rational) -> Result<Self> {
        if self.mode != LambdaMode::Formal {
            return Err(Error::ModeMismatch("element already has a fixed lambda".into()));
        }
        let mut out = WeylElement::zero(self.n, LambdaMode::Fixed(c.clone()));
        for (m, coeff) in &self.terms {
            out.insert(m.clone(), coeff.eval(LAMBDA, c));
        }
        Ok(out)
    }

    /// Constructive simplicity: bracket with `d_i` on the left until no
    /// position variable is left, then with `x_i` on the right until no
    /// derivation is left. The lowest-index variable is always taken first.
    pub fn reduce_to_scalar(&self) -> Result<SimplicityCertificate> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        if let LambdaMode::Fixed(c) = &self.mode {
            if c.is_zero() {
                return Err(Error::Degenerate);
            }
        }
        let n = self.n;
        let mut cur = self.clone();
        let mut steps = Vec::new();
        loop {
            let step = if let Some(i) = (0..n).find(|&i| cur.x_degree(i) > 0) {
                CommutatorStep {
                    generator: Generator::D(i),
                    side: Side::Left,
                }
            } else if let Some(i) = (0..n).find(|&i| cur.d_degree(i) > 0) {
                CommutatorStep {
                    generator: Generator::X(i),
                    side: Side::Right,
                }
            } else {
                break;
            };
            cur = cur.apply_step(step);
            steps.push(step);
        }
        let final_scalar = cur.scalar_part().expect("loop ends at bidegree zero");
        debug_assert!(!final_scalar.is_zero());
        Ok(SimplicityCertificate {
            steps,
            final_scalar,
        })
    }

    fn apply_step(&self, step: CommutatorStep) -> Self {
        let g = WeylElement::generator(self.n, self.mode.clone(), step.generator);
        match step.side {
            Side::Left => g.commutator(self),
            Side::Right => self.commutator(&g),
        }
        .expect("same mode")
    }

    /// Parses text such as `D*x + lambda` or `x1^2*d2`. Plain `x` and `d`
    /// (also `D`, `∂`) mean index 1. `n` defaults to the largest index used.
    pub fn parse(s: &str, mode: LambdaMode, n: Option<usize>) -> Result<Self> {
        let expr = parse_expr(s)?;
        let needed = max_index(&expr)?;
        let n = match n {
            Some(n) if n < needed => {
                return Err(Error::InvalidInput(format!(
                    "expression uses variable index {} but n = {}",
                    needed, n
                )))
            }
            Some(n) => n,
            None => needed.max(1),
        };
        evaluate(&expr, &WeylTarget { n, mode })
    }
}

/// Steps a mixed-radix counter; false once it wraps around.
fn advance(k: &mut [usize], tables: &[Vec<BigInt>]) -> bool {
    for (i, t) in tables.iter().enumerate() {
        k[i] += 1;
        if k[i] < t.len() {
            return true;
        }
        k[i] = 0;
    }
    false
}

enum Symbol {
    X(usize),
    D(usize),
    Lambda,
}

fn classify_symbol(name: &str) -> Option<Symbol> {
    let name = canonical_name(name);
    if name == LAMBDA {
        return Some(Symbol::Lambda);
    }
    let (head, rest) = if let Some(r) = name.strip_prefix('∂') {
        ('d', r)
    } else {
        let mut chars = name.chars();
        let h = chars.next()?;
        (h, chars.as_str())
    };
    let index = if rest.is_empty() {
        1
    } else if rest.bytes().all(|b| b.is_ascii_digit()) {
        rest.parse::<usize>().ok().filter(|&i| i >= 1)?
    } else {
        return None;
    };
    match head {
        'x' => Some(Symbol::X(index - 1)),
        'd' | 'D' => Some(Symbol::D(index - 1)),
        _ => None,
    }
}

fn max_index(e: &crate::parse::Expr) -> Result<usize> {
    use crate::parse::Expr;
    Ok(match e {
        Expr::Num(_) => 0,
        Expr::Var { name, pos } => match classify_symbol(name) {
            Some(Symbol::X(i)) | Some(Symbol::D(i)) => i + 1,
            Some(Symbol::Lambda) => 0,
            None => {
                return Err(Error::Parse {
                    pos: *pos,
                    msg: format!("unknown Weyl generator '{}'", name),
                })
            }
        },
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            max_index(a)?.max(max_index(b)?)
        }
        Expr::Neg(a) | Expr::Pow(a, _) => max_index(a)?,
    })
}

struct WeylTarget {
    n: usize,
    mode: LambdaMode,
}

impl ExprTarget for WeylTarget {
    type Value = WeylElement;

    fn constant(&self, c: Rational) -> WeylElement {
        WeylElement::scalar(self.n, self.mode.clone(), MultiPoly::constant(c))
    }

    fn variable(&self, name: &str, pos: usize) -> Result<WeylElement> {
        let mode = self.mode.clone();
        match classify_symbol(name) {
            Some(Symbol::X(i)) => Ok(WeylElement::x(self.n, mode, i)),
            Some(Symbol::D(i)) => Ok(WeylElement::d(self.n, mode, i)),
            Some(Symbol::Lambda) => Ok(WeylElement::scalar(self.n, mode.clone(), mode.value())),
            None => Err(Error::Parse {
                pos,
                msg: format!("unknown Weyl generator '{}'", name),
            }),
        }
    }

    fn add(&self, a: WeylElement, b: WeylElement) -> WeylElement {
        &a + &b
    }

    fn mul(&self, a: WeylElement, b: WeylElement) -> WeylElement {
        &a * &b
    }

    fn neg(&self, a: WeylElement) -> WeylElement {
        -&a
    }

    fn as_constant(&self, a: &WeylElement) -> Option<Rational> {
        a.scalar_part().and_then(|c| c.constant_value())
    }
}

impl<'a> Add<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;
    /// Panics if the operands have different `n` or lambda mode; see
    /// [`WeylElement::checked_add`].
    fn add(self, rhs: &WeylElement) -> WeylElement {
        self.checked_add(rhs).expect("compatible Weyl elements")
    }
}

impl<'a> Sub<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        self.checked_sub(rhs).expect("compatible Weyl elements")
    }
}

impl<'a> Mul<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;
    /// Panics on incompatible operands; see [`WeylElement::weyl_mul`].
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.weyl_mul(rhs).expect("compatible Weyl elements")
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        WeylElement {
            n: self.n,
            mode: self.mode.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl SimplicityCertificate {
    /// Replays the recorded commutators on `d`.
    pub fn replay(&self, d: &WeylElement) -> WeylElement {
        self.steps.iter().fold(d.clone(), |cur, s| cur.apply_step(*s))
    }

    /// The replay lands exactly on the nonzero recorded scalar.
    pub fn verify(&self, d: &WeylElement) -> bool {
        !self.final_scalar.is_zero()
            && self.replay(d) == WeylElement::scalar(d.n, d.mode.clone(), self.final_scalar.clone())
    }
}

impl fmt::Display for CommutatorStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.generator {
            Generator::X(i) => format!("x{}", i + 1),
            Generator::D(i) => format!("d{}", i + 1),
        };
        match self.side {
            Side::Left => write!(f, "[{}, .]", g),
            Side::Right => write!(f, "[., {}]", g),
        }
    }
}

impl fmt::Display for WeylElement {
    /// Monomials `x1^a1*...*d1^b1*...` in descending graded order, each
    /// coefficient polynomial expanded in descending powers of lambda.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first_term = true;
        for (m, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            for i in 0..self.n {
                if m.x[i] > 0 {
                    factors.push(power_text(&position_name(self.n, i), m.x[i]));
                }
            }
            for i in 0..self.n {
                if m.d[i] > 0 {
                    factors.push(power_text(&derivation_name(self.n, i), m.d[i]));
                }
            }
            for (powers, q) in c.terms() {
                let mut fs: Vec<String> = powers.iter().map(|(v, e)| power_text(v, *e)).collect();
                fs.extend(factors.iter().cloned());
                let neg = q.is_negative();
                let abs = q.abs();
                if first_term {
                    if neg {
                        f.write_str("-")?;
                    }
                } else {
                    f.write_str(if neg { " - " } else { " + " })?;
                }
                first_term = false;
                if fs.is_empty() || !abs.is_one() {
                    write!(f, "{}", abs)?;
                    if !fs.is_empty() {
                        f.write_str("*")?;
                    }
                }
                f.write_str(&fs.join("*"))?;
            }
        }
        Ok(())
    }
}

fn power_text(v: &str, e: u32) -> String {
    if e == 1 {
        String::from(v)
    } else {
        format!("{}^{}", v, e)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weyl[n={}, lambda={}]({})", self.n, self.mode, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn formal(s: &str) -> WeylElement {
        WeylElement::parse(s, LambdaMode::Formal, None).unwrap()
    }

    fn classical(s: &str) -> WeylElement {
        WeylElement::parse(s, LambdaMode::classical(), None).unwrap()
    }

    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
    enum G {
        X(usize),
        D(usize),
    }

    /// Slow oracle: rewrite words with `d_i x_i -> x_i d_i + lambda` and
    /// plain swaps, one step at a time, until every word is normal-ordered.
    fn rewrite_normal_form(words: Vec<(Vec<G>, MultiPoly)>, n: usize, mode: &LambdaMode) -> WeylElement {
        let mut pending = words;
        let mut out = WeylElement::zero(n, mode.clone());
        while let Some((w, c)) = pending.pop() {
            let bad = w.windows(2).position(|p| match (p[0], p[1]) {
                (G::D(_), G::X(_)) => true,
                (G::X(i), G::X(j)) | (G::D(i), G::D(j)) => i > j,
                _ => false,
            });
            match bad {
                None => {
                    let mut a = vec![0; n];
                    let mut b = vec![0; n];
                    for g in &w {
                        match g {
                            G::X(i) => a[*i] += 1,
                            G::D(i) => b[*i] += 1,
                        }
                    }
                    out = &out + &WeylElement::monomial(n, mode.clone(), &a, &b, c);
                }
                Some(p) => {
                    let mut swapped = w.clone();
                    swapped.swap(p, p + 1);
                    if let (G::D(i), G::X(j)) = (w[p], w[p + 1]) {
                        if i == j {
                            let mut shorter = w.clone();
                            shorter.drain(p..p + 2);
                            pending.push((shorter, &c * &mode.value()));
                        }
                    }
                    pending.push((swapped, c));
                }
            }
        }
        out
    }

    fn word(a: &[u32], b: &[u32]) -> Vec<G> {
        let mut w = Vec::new();
        for (i, e) in a.iter().enumerate() {
            w.extend(core::iter::repeat_n(G::X(i), *e as usize));
        }
        for (i, e) in b.iter().enumerate() {
            w.extend(core::iter::repeat_n(G::D(i), *e as usize));
        }
        w
    }

    #[test]
    fn basic_relation() {
        assert_eq!(formal("d*x").to_string(), "x*d + lambda");
        assert_eq!(formal("d*x"), formal("x*d + lambda"));
        assert_eq!(formal("x*d"), formal("x*d"));
        assert_eq!(classical("D*x").to_string(), "x*d + 1");
    }

    #[test]
    fn second_order_reordering() {
        // act both sides on x^k: d^2 x^2 x^k = (k+2)(k+1) x^k, and
        // (x^2 d^2 + 4 x d + 2) x^k = (k(k-1) + 4k + 2) x^k, equal for all k.
        let lhs = classical("d^2*x^2");
        let rhs = classical("x^2*d^2 + 4*x*d + 2");
        assert_eq!(lhs, rhs);
        for k in 0..=4u32 {
            let f = MultiPoly::var("x").pow(k);
            assert_eq!(lhs.act_on_polynomial(&f).unwrap(), rhs.act_on_polynomial(&f).unwrap());
        }
    }

    #[test]
    fn closed_form_matches_slow_rewriter() {
        let n = 2;
        for mode in [LambdaMode::Formal, LambdaMode::classical(), LambdaMode::Fixed(Rational::new(3.into(), 2.into()))] {
            for (a1, b1, a2, b2) in [
                ([0u32, 1], [2u32, 1], [3u32, 1], [0u32, 2]),
                ([1, 0], [3, 0], [3, 2], [1, 1]),
                ([0, 0], [2, 2], [2, 2], [0, 0]),
            ] {
                let l = WeylElement::monomial(n, mode.clone(), &a1, &b1, MultiPoly::one());
                let r = WeylElement::monomial(n, mode.clone(), &a2, &b2, MultiPoly::one());
                let mut w = word(&a1, &b1);
                w.extend(word(&a2, &b2));
                let slow = rewrite_normal_form(vec![(w, MultiPoly::one())], n, &mode);
                assert_eq!(&l * &r, slow);
            }
        }
    }

    #[test]
    fn action_examples() {
        let x = MultiPoly::var("x");
        assert_eq!(classical("d").act_on_polynomial(&x.pow(3)).unwrap(), x.pow(2).scale(&Rational::from_integer(3.into())));
        let f = &x.pow(2) + &MultiPoly::int(5);
        assert_eq!(classical("x").act_on_polynomial(&f).unwrap(), &x * &f);
        let g = &x.pow(2) + &MultiPoly::one();
        assert_eq!(classical("x*d").act_on_polynomial(&g).unwrap(), x.pow(2).scale(&Rational::from_integer(2.into())));
        assert!(matches!(formal("x").act_on_polynomial(&x), Err(Error::ModeMismatch(_))));
        assert!(matches!(classical("x").act_on_polynomial(&MultiPoly::var("z")), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn fourier_examples() {
        assert_eq!(formal("x").fourier(), formal("d"));
        assert_eq!(formal("d").fourier(), formal("-x"));
        let e = formal("x*d");
        let f4 = e.fourier().fourier().fourier().fourier();
        assert_eq!(f4, e);
        // x d -> d (-x) = -x d - lambda
        assert_eq!(e.fourier(), formal("-x*d - lambda"));
    }

    #[test]
    fn reduce_examples() {
        let one = formal("1");
        let cert = one.reduce_to_scalar().unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(cert.final_scalar, MultiPoly::one());

        let x = classical("x");
        let cert = x.reduce_to_scalar().unwrap();
        assert_eq!(
            cert.steps,
            vec![CommutatorStep {
                generator: Generator::D(0),
                side: Side::Left
            }]
        );
        assert_eq!(cert.final_scalar, MultiPoly::one());
        assert!(cert.verify(&x));

        let e = formal("x^2*d");
        let cert = e.reduce_to_scalar().unwrap();
        let left = CommutatorStep {
            generator: Generator::D(0),
            side: Side::Left,
        };
        let right = CommutatorStep {
            generator: Generator::X(0),
            side: Side::Right,
        };
        assert_eq!(cert.steps, vec![left, left, right]);
        assert_eq!(cert.final_scalar.to_string(), "2*lambda^3");
        assert!(cert.verify(&e));
    }

    #[test]
    fn reduce_errors() {
        assert_eq!(formal("0").reduce_to_scalar(), Err(Error::Zero));
        let e = WeylElement::parse("x", LambdaMode::Fixed(Rational::zero()), None).unwrap();
        assert_eq!(e.reduce_to_scalar(), Err(Error::Degenerate));
    }

    #[test]
    fn specialization() {
        let e = formal("x*d + lambda");
        assert_eq!(e.specialize_lambda(&Rational::zero()).unwrap().to_string(), "x*d");
        let dx = formal("d*x");
        let xd = formal("x*d");
        let zero = Rational::zero();
        assert_eq!(dx.specialize_lambda(&zero).unwrap(), xd.specialize_lambda(&zero).unwrap());
        assert_eq!(dx.specialize_lambda(&Rational::one()).unwrap().to_string(), "x*d + 1");
        assert!(dx.specialize_lambda(&zero).unwrap().specialize_lambda(&zero).is_err());
    }

    #[test]
    fn mode_mismatch_is_reported() {
        let a = formal("x");
        let b = classical("x");
        assert!(matches!(a.weyl_mul(&b), Err(Error::ModeMismatch(_))));
        let c = WeylElement::parse("x1", LambdaMode::Formal, Some(2)).unwrap();
        assert!(matches!(a.weyl_mul(&c), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn parsing_variants() {
        let e = WeylElement::parse("∂1*x1 - λ", LambdaMode::Formal, None).unwrap();
        assert_eq!(e.to_string(), "x*d");
        let two = WeylElement::parse("d2*x2*x1", LambdaMode::classical(), None).unwrap();
        assert_eq!(two.n(), 2);
        assert_eq!(two.to_string(), "x1*x2*d2 + x1");
        assert!(WeylElement::parse("y", LambdaMode::Formal, None).is_err());
        assert!(WeylElement::parse("x3", LambdaMode::Formal, Some(2)).is_err());
    }
}
