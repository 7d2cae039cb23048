use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::algebra::Rational;
use crate::{Error, Result};

/// Finite index set of a cover together with the intersections that are
/// empty. A tuple of indices is empty when its underlying set contains one
/// of `empty_faces`; cochains carry no data there and no condition is
/// imposed on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverNerve {
    labels: Vec<String>,
    empty_faces: Vec<BTreeSet<usize>>,
}

impl CoverNerve {
    /// Every intersection nonempty, labels `U0, U1, ..`.
    pub fn full(index_count: usize) -> Result<Self> {
        Self::with_empty_faces(index_count, Vec::new())
    }

    pub fn with_empty_faces(index_count: usize, empty_faces: Vec<BTreeSet<usize>>) -> Result<Self> {
        let labels = (0..index_count).map(|i| format!("U{}", i)).collect();
        Self::new(labels, empty_faces)
    }

    pub fn new(labels: Vec<String>, empty_faces: Vec<BTreeSet<usize>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("a cover needs at least one open set".into()));
        }
        for f in &empty_faces {
            if f.len() < 2 {
                return Err(Error::InvalidInput("an empty face must involve at least two open sets".into()));
            }
            if let Some(i) = f.iter().find(|&&i| i >= labels.len()) {
                return Err(Error::InvalidInput(format!("empty face uses index {} out of range", i)));
            }
        }
        let mut faces = empty_faces;
        faces.sort();
        faces.dedup();
        Ok(CoverNerve { labels, empty_faces: faces })
    }

    pub fn index_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn empty_faces(&self) -> &[BTreeSet<usize>] {
        &self.empty_faces
    }

    /// Whether the intersection over `tuple` is empty.
    pub fn is_empty(&self, tuple: &[usize]) -> bool {
        if self.empty_faces.is_empty() {
            return false;
        }
        let set: BTreeSet<usize> = tuple.iter().copied().collect();
        self.empty_faces.iter().any(|f| f.is_subset(&set))
    }

    /// Pullback along `sigma: J -> I`: a subset of `J` is empty when its
    /// image is. Faces are recorded up to size four, enough for cochains of
    /// degree at most three.
    pub fn pullback(&self, sigma: &[usize]) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::InvalidInput("refinement needs at least one index".into()));
        }
        if let Some(&bad) = sigma.iter().find(|&&s| s >= self.index_count()) {
            return Err(Error::InvalidInput(format!("refinement maps to index {} out of range", bad)));
        }
        let n = sigma.len();
        let mut faces: Vec<BTreeSet<usize>> = Vec::new();
        let mut consider = |set: BTreeSet<usize>| {
            if faces.iter().any(|f| f.is_subset(&set)) {
                return;
            }
            let image: Vec<usize> = set.iter().map(|&j| sigma[j]).collect();
            if self.is_empty(&image) {
                faces.push(set);
            }
        };
        // subsets in order of size so that only minimal faces are kept
        for a in 0..n {
            for b in a + 1..n {
                consider([a, b].into_iter().collect());
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    consider([a, b, c].into_iter().collect());
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        consider([a, b, c, d].into_iter().collect());
                    }
                }
            }
        }
        Self::with_empty_faces(n, faces)
    }
}

/// Coefficient group of a cochain: nonzero rationals, or the `n`-th roots
/// of unity written additively as `Z/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitGroup {
    QStar,
    Mu(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Unit {
    Scalar(Rational),
    /// `zeta^k` with `zeta` a primitive `n`-th root of unity.
    Root(u32),
}

impl UnitGroup {
    pub fn identity(&self) -> Unit {
        match self {
            UnitGroup::QStar => Unit::Scalar(Rational::one()),
            UnitGroup::Mu(_) => Unit::Root(0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            UnitGroup::Mu(0) => Err(Error::InvalidInput("mu_n needs n >= 1".into())),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, u: &Unit) -> bool {
        match (self, u) {
            (UnitGroup::QStar, Unit::Scalar(q)) => !q.is_zero(),
            (UnitGroup::Mu(n), Unit::Root(k)) => k < n,
            _ => false,
        }
    }

    pub fn check(&self, u: &Unit) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("{} is not an element of {}", u, self)))
        }
    }

    pub fn mul(&self, a: &Unit, b: &Unit) -> Unit {
        match (self, a, b) {
            (UnitGroup::QStar, Unit::Scalar(x), Unit::Scalar(y)) => Unit::Scalar(x * y),
            (UnitGroup::Mu(n), Unit::Root(x), Unit::Root(y)) => Unit::Root(((*x as u64 + *y as u64) % *n as u64) as u32),
            _ => panic!("unit {} or {} outside {}", a, b, self),
        }
    }

    pub fn inv(&self, a: &Unit) -> Unit {
        match (self, a) {
            (UnitGroup::QStar, Unit::Scalar(x)) => Unit::Scalar(x.recip()),
            (UnitGroup::Mu(n), Unit::Root(x)) => Unit::Root((n - x % n) % n),
            _ => panic!("unit {} outside {}", a, self),
        }
    }

    /// `a * b^-1`.
    pub fn div(&self, a: &Unit, b: &Unit) -> Unit {
        self.mul(a, &self.inv(b))
    }

    /// The unit as a rational number, when it is one (`+-1` for roots).
    pub fn as_rational(&self, a: &Unit) -> Option<Rational> {
        match (self, a) {
            (UnitGroup::QStar, Unit::Scalar(x)) => Some(x.clone()),
            (UnitGroup::Mu(_), Unit::Root(0)) => Some(Rational::one()),
            (UnitGroup::Mu(n), Unit::Root(k)) if 2 * k == *n => Some(-Rational::one()),
            _ => None,
        }
    }
}

impl fmt::Display for UnitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitGroup::QStar => f.write_str("Q*"),
            UnitGroup::Mu(n) => write!(f, "mu_{}", n),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unit::Scalar(q) => write!(f, "{}", q),
            Unit::Root(k) => write!(f, "{}", k),
        }
    }
}
