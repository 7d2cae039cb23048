//! Linear systems over `Z/n` by integer diagonalization.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cochain::{coboundary, Cochain1, UnitCochain2};
use super::nerve::{Unit, UnitGroup};
use crate::{Error, Result};

/// A solution of `A x = b (mod n)`, or `None`. `a` has `ncols` columns.
pub fn solve_mod(a: &[Vec<i64>], ncols: usize, b: &[i64], n: u32) -> Option<Vec<u32>> {
    let modulus = BigInt::from(n);
    let rows = a.len();
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut rhs: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    // columns of v record the column operations, x = v y
    let mut v: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let mut t = 0;
    while t < rows.min(ncols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..ncols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        rhs.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let p = m[t][t].clone();
        let mut clean = true;
        for i in t + 1..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&p);
            for j in t..ncols {
                let d = &q * &m[t][j];
                m[i][j] -= d;
            }
            let d = &q * &rhs[t];
            rhs[i] -= d;
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..ncols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&p);
            for row in m.iter_mut().skip(t) {
                let d = &q * &row[t];
                row[j] -= d;
            }
            for row in v.iter_mut() {
                let d = &q * &row[t];
                row[j] -= d;
            }
            clean &= m[t][j].is_zero();
        }
        if clean {
            t += 1;
        }
    }

    let mut y = vec![BigInt::zero(); ncols];
    for i in 0..rows {
        let c = rhs[i].mod_floor(&modulus);
        let d = if i < ncols { m[i][i].mod_floor(&modulus) } else { BigInt::zero() };
        let g = d.gcd(&modulus);
        if !(&c % &g).is_zero() {
            return None;
        }
        if i >= ncols || d.is_zero() {
            continue;
        }
        let reduced_mod = &modulus / &g;
        let inv = mod_inverse(&(&d / &g), &reduced_mod);
        y[i] = ((&c / &g) * inv).mod_floor(&reduced_mod);
    }
    Some(
        (0..ncols)
            .map(|i| {
                let x: BigInt = (0..ncols).map(|j| &v[i][j] * &y[j]).sum();
                u32::try_from(x.mod_floor(&modulus)).expect("reduced mod n")
            })
            .collect(),
    )
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

/// Decides whether a `mu_n`-valued 2-cochain is a coboundary, returning a
/// witness `b` with `d b = a` on every nonempty triple.
pub fn is_coboundary(a: &UnitCochain2) -> Result<Option<Cochain1>> {
    let UnitGroup::Mu(n) = a.group() else {
        return Err(Error::UndecidableGroup);
    };
    let nerve = a.nerve();
    let size = nerve.index_count();
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (0..size).map(move |j| (i, j)))
        .filter(|&(i, j)| !nerve.is_empty(&[i, j]))
        .collect();
    let col = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).expect("pair of a nonempty triple");
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for [i, j, k] in a.support() {
        let mut row = vec![0i64; pairs.len()];
        row[col(j, k)] += 1;
        row[col(i, k)] -= 1;
        row[col(i, j)] += 1;
        rows.push(row);
        let Unit::Root(v) = a.get(i, j, k) else { unreachable!("mu_n cochain") };
        rhs.push(*v as i64);
    }
    let Some(x) = solve_mod(&rows, pairs.len(), &rhs, n) else {
        return Ok(None);
    };
    let mut witness = Cochain1::trivial(a.group(), nerve);
    for (&(i, j), v) in pairs.iter().zip(x) {
        witness.set(i, j, Unit::Root(v))?;
    }
    debug_assert!(coboundary(&witness).agrees_with(a));
    Ok(Some(witness))
}
