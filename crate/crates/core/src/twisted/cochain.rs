use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::nerve::{CoverNerve, Unit, UnitGroup};
use crate::{Error, Result};

/// Unit-valued function on ordered pairs of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    group: UnitGroup,
    nerve: CoverNerve,
    values: Vec<Unit>,
}

/// Unit-valued function on ordered triples of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitCochain2 {
    group: UnitGroup,
    nerve: CoverNerve,
    values: Vec<Unit>,
}

fn triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| [i, j, k])))
}

fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    triples(n).flat_map(move |[i, j, k]| (0..n).map(move |l| [i, j, k, l]))
}

impl Cochain1 {
    pub fn trivial(group: UnitGroup, nerve: &CoverNerve) -> Self {
        let n = nerve.index_count();
        Cochain1 {
            values: vec![group.identity(); n * n],
            group,
            nerve: nerve.clone(),
        }
    }

    /// Value `u` on every pair.
    pub fn constant(group: UnitGroup, nerve: &CoverNerve, u: Unit) -> Result<Self> {
        group.check(&u)?;
        let n = nerve.index_count();
        Ok(Cochain1 {
            values: vec![u; n * n],
            group,
            nerve: nerve.clone(),
        })
    }

    /// Builds from `f(i, j)`.
    pub fn from_fn(group: UnitGroup, nerve: &CoverNerve, f: impl Fn(usize, usize) -> Unit) -> Result<Self> {
        let n = nerve.index_count();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let u = f(i, j);
                group.check(&u)?;
                values.push(u);
            }
        }
        Ok(Cochain1 {
            group,
            nerve: nerve.clone(),
            values,
        })
    }

    pub fn group(&self) -> UnitGroup {
        self.group
    }

    pub fn nerve(&self) -> &CoverNerve {
        &self.nerve
    }

    pub fn get(&self, i: usize, j: usize) -> &Unit {
        &self.values[i * self.nerve.index_count() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, u: Unit) -> Result<()> {
        self.group.check(&u)?;
        let n = self.nerve.index_count();
        self.values[i * n + j] = u;
        Ok(())
    }
}

impl UnitCochain2 {
    pub fn trivial(group: UnitGroup, nerve: &CoverNerve) -> Self {
        let n = nerve.index_count();
        UnitCochain2 {
            values: vec![group.identity(); n * n * n],
            group,
            nerve: nerve.clone(),
        }
    }

    pub fn from_fn(group: UnitGroup, nerve: &CoverNerve, f: impl Fn(usize, usize, usize) -> Unit) -> Result<Self> {
        let mut out = Self::trivial(group, nerve);
        for [i, j, k] in triples(nerve.index_count()) {
            out.set(i, j, k, f(i, j, k))?;
        }
        Ok(out)
    }

    pub fn group(&self) -> UnitGroup {
        self.group
    }

    pub fn nerve(&self) -> &CoverNerve {
        &self.nerve
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.nerve.index_count();
        (i * n + j) * n + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Unit {
        &self.values[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, u: Unit) -> Result<()> {
        self.group.check(&u)?;
        let idx = self.index(i, j, k);
        self.values[idx] = u;
        Ok(())
    }

    /// Nonempty triples in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        triples(self.nerve.index_count()).filter(move |t| !self.nerve.is_empty(t))
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::CoverMismatch(format!("groups {} and {}", self.group, other.group)));
        }
        if self.nerve != other.nerve {
            return Err(Error::CoverMismatch("cochains live on different covers".into()));
        }
        Ok(())
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Self {
        UnitCochain2 {
            group: self.group,
            nerve: self.nerve.clone(),
            values: self.values.iter().map(|u| self.group.inv(u)).collect(),
        }
    }

    /// Equal on every nonempty triple.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.same_space(other).is_ok() && self.support().all(|[i, j, k]| self.get(i, j, k) == other.get(i, j, k))
    }

    pub fn is_trivial(&self) -> bool {
        let e = self.group.identity();
        self.support().all(|[i, j, k]| *self.get(i, j, k) == e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleViolation {
    pub tuple: [usize; 4],
    /// `a_jkl a_ikl^-1 a_ijl a_ijk^-1`, which should be the identity.
    pub value: Unit,
}

/// First quadruple, in lexicographic order, with nonempty intersection where
/// `a_jkl a_ikl^-1 a_ijl a_ijk^-1 != 1`.
pub fn check_2cocycle(a: &UnitCochain2) -> Option<CocycleViolation> {
    let g = a.group;
    let e = g.identity();
    for t @ [i, j, k, l] in quadruples(a.nerve.index_count()) {
        if a.nerve.is_empty(&t) {
            continue;
        }
        let v = g.mul(
            &g.div(a.get(j, k, l), a.get(i, k, l)),
            &g.div(a.get(i, j, l), a.get(i, j, k)),
        );
        if v != e {
            return Some(CocycleViolation { tuple: t, value: v });
        }
    }
    None
}

/// `(d b)_ijk = b_jk b_ik^-1 b_ij`; identity on empty triples.
pub fn coboundary(b: &Cochain1) -> UnitCochain2 {
    let g = b.group;
    let mut out = UnitCochain2::trivial(g, &b.nerve);
    for t @ [i, j, k] in triples(b.nerve.index_count()) {
        if b.nerve.is_empty(&t) {
            continue;
        }
        let v = g.mul(&g.div(b.get(j, k), b.get(i, k)), b.get(i, j));
        let idx = out.index(i, j, k);
        out.values[idx] = v;
    }
    out
}

/// Twist of `F (x) G` for an `a`-twisted `F` and `b`-twisted `G`.
pub fn twist_of_tensor(a: &UnitCochain2, b: &UnitCochain2) -> Result<UnitCochain2> {
    a.same_space(b)?;
    let g = a.group;
    Ok(UnitCochain2 {
        group: g,
        nerve: a.nerve.clone(),
        values: a.values.iter().zip(&b.values).map(|(x, y)| g.mul(x, y)).collect(),
    })
}

/// Twist of `Hom(F, G)`: `a^-1 b`.
pub fn twist_of_hom(a: &UnitCochain2, b: &UnitCochain2) -> Result<UnitCochain2> {
    twist_of_tensor(&a.inverse(), b)
}

/// Pullback along `sigma: J -> I`.
pub fn refine(a: &UnitCochain2, sigma: &[usize]) -> Result<UnitCochain2> {
    let nerve = a.nerve.pullback(sigma)?;
    let mut out = UnitCochain2::trivial(a.group, &nerve);
    for t @ [i, j, k] in triples(sigma.len()) {
        if nerve.is_empty(&t) {
            continue;
        }
        let idx = out.index(i, j, k);
        out.values[idx] = a.get(sigma[i], sigma[j], sigma[k]).clone();
    }
    Ok(out)
}

/// First nonempty triple where two twists, already pulled back to a common
/// cover, differ. Equality is required on the nose, not up to coboundary.
pub fn twist_matching_check(pulled: &UnitCochain2, target: &UnitCochain2) -> Result<Option<[usize; 3]>> {
    pulled.same_space(target)?;
    Ok(pulled
        .support()
        .find(|&[i, j, k]| pulled.get(i, j, k) != target.get(i, j, k)))
}
