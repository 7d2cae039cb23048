use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Field, Rational};
use crate::{Error, Result};

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. Zero rows are dropped from the result.
pub fn rref<F: Field>(mut m: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one() / m[r][col].clone();
        for j in col..ncols {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i == r || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..ncols {
                let t = f.clone() * m[r][j].clone();
                m[i][j] = m[i][j].clone() - t;
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Echelon { rows: m, pivots }
}

pub fn rank<F: Field>(m: &[Vec<F>], ncols: usize) -> usize {
    rref(m.to_vec(), ncols).pivots.len()
}

/// Basis of `{x : m x = 0}`, one vector per free column, with a 1 in that
/// column.
pub fn nullspace<F: Field>(m: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let e = rref(m.to_vec(), ncols);
    (0..ncols)
        .filter(|c| !e.pivots.contains(c))
        .map(|free| {
            let mut x = vec![F::zero(); ncols];
            x[free] = F::one();
            for (row, &p) in e.rows.iter().zip(e.pivots.iter()) {
                x[p] = -row[free].clone();
            }
            x
        })
        .collect()
}

/// Affine solution set of a linear system.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<F> {
    Consistent {
        particular: Vec<F>,
        nullspace: Vec<Vec<F>>,
    },
    Inconsistent,
}

/// Solves `m x = rhs` for a matrix with `ncols` columns. The particular
/// solution sets every free variable to zero.
pub fn solve<F: Field>(m: &[Vec<F>], ncols: usize, rhs: &[F]) -> LinearSolution<F> {
    let aug: Vec<Vec<F>> = m
        .iter()
        .zip(rhs.iter())
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let e = rref(aug, ncols + 1);
    if e.pivots.last() == Some(&ncols) {
        return LinearSolution::Inconsistent;
    }
    let mut particular = vec![F::zero(); ncols];
    for (row, &p) in e.rows.iter().zip(e.pivots.iter()) {
        particular[p] = row[ncols].clone();
    }
    LinearSolution::Consistent {
        particular,
        nullspace: nullspace(m, ncols),
    }
}

/// Exact solution of a rational linear system.
pub fn linear_solve_exact(
    m: &[Vec<Rational>],
    rhs: &[Rational],
) -> Result<LinearSolution<Rational>> {
    let ncols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != ncols) {
        return Err(Error::Shape("ragged coefficient matrix".into()));
    }
    if rhs.len() != m.len() {
        return Err(Error::Shape(format!(
            "{} equations but {} right-hand sides",
            m.len(),
            rhs.len()
        )));
    }
    Ok(solve(m, ncols, rhs))
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let e = rref(aug, 2 * n);
    if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(e.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}
