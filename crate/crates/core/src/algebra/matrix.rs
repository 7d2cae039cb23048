use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::poly::MultiPoly;
use super::Rational;
use crate::{Error, Result};

/// Dense matrix of multivariate polynomials, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds from nested rows; fails on ragged input.
    pub fn from_rows(rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer matrix, convenient in tests and examples.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|x| MultiPoly::int(*x)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> MultiPoly) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| MultiPoly::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &MultiPoly::one())
    }

    pub fn scalar(n: usize, p: &MultiPoly) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { p.clone() } else { MultiPoly::zero() })
    }

    /// Elementary matrix with a single 1 at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(n, n, |a, b| if (a, b) == (i, j) { MultiPoly::one() } else { MultiPoly::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<MultiPoly>> {
        self.entries.chunks(self.cols).map(<[MultiPoly]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    /// Variables occurring in any entry, in canonical order.
    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = self.entries.iter().flat_map(|e| e.vars().iter().cloned()).collect();
        out.sort_by(|a, b| super::var_order(a, b));
        out.dedup();
        out
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Entry-wise formal derivative.
    pub fn derivative(&self, var: &str) -> Self {
        self.map(|e| e.derivative(var))
    }

    pub fn scale(&self, p: &MultiPoly) -> Self {
        self.map(|e| e * p)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn substitute(&self, var: &str, value: &MultiPoly) -> Self {
        self.map(|e| e.substitute(var, value))
    }

    pub fn eval(&self, var: &str, value: &Rational) -> Self {
        self.map(|e| e.eval(var, value))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> MultiPoly {
        (0..self.rows.min(self.cols)).fold(MultiPoly::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Largest degree in `var` over all entries (0 for the zero matrix).
    pub fn degree_in(&self, var: &str) -> u32 {
        self.entries.iter().filter_map(|e| e.degree_in(var)).max().unwrap_or(0)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(MultiPoly::zero(), |acc, k| {
                &acc + &(self.get(i, k) * other.get(k, j))
            })
        }))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(MultiPoly::zero(), |acc, k| &acc + &(self.get(i, k) * &v[k])))
            .collect())
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// `det(var * I - self)` by the Faddeev-LeVerrier recursion, which only
    /// divides by integers and so stays inside the polynomial ring.
    pub fn char_poly(&self, var: &str) -> Result<MultiPoly> {
        if !self.is_square() {
            return Err(Error::Shape("characteristic polynomial of a non-square matrix".into()));
        }
        if self.vars().iter().any(|v| v == var) {
            return Err(Error::InvalidInput(format!("matrix entries already use '{}'", var)));
        }
        let n = self.rows;
        let mut coeffs = alloc::vec![MultiPoly::zero(); n + 1];
        coeffs[n] = MultiPoly::one();
        let mut m = PolyMatrix::zero(n, n);
        for k in 1..=n {
            m = self
                .checked_mul(&m)?
                .checked_add(&PolyMatrix::scalar(n, &coeffs[n - k + 1]))?;
            let t = self.checked_mul(&m)?.trace();
            coeffs[n - k] = t.scale(&Rational::new((-1).into(), (k as i64).into()));
        }
        Ok(MultiPoly::from_coefficients_in(var, &coeffs))
    }

    /// Evaluates the polynomial `p(var)` at this matrix; coefficients of
    /// `p` in the other variables act as scalars.
    pub fn eval_poly(&self, p: &MultiPoly, var: &str) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut acc = PolyMatrix::zero(n, n);
        for c in p.coefficients_in(var).iter().rev() {
            acc = acc.checked_mul(self)?.checked_add(&PolyMatrix::scalar(n, c))?;
        }
        Ok(acc)
    }
}

/// Rank over the fraction field of the polynomial ring, by fraction-free
/// (Bareiss) elimination with exact division.
pub fn poly_rank(rows: &[Vec<MultiPoly>]) -> usize {
    let mut m: Vec<Vec<MultiPoly>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = MultiPoly::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in col + 1..ncols {
                let num = &(&m[r][col] * &m[i][j]) - &(&m[i][col] * &m[r][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
            }
            m[i][col] = MultiPoly::zero();
        }
        prev = m[r][col].clone();
        r += 1;
    }
    r
}

impl<'a> Add<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.checked_add(rhs).expect("matrix shapes agree")
    }
}

impl<'a> Sub<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.checked_sub(rhs).expect("matrix shapes agree")
    }
}

impl<'a> Mul<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.checked_mul(rhs).expect("matrix shapes agree")
    }
}

impl Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|e| -e)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix{}", self)
    }
}
