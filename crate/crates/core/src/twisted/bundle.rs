use alloc::format;
use alloc::vec::Vec;

use super::cochain::UnitCochain2;
use super::nerve::CoverNerve;
use crate::algebra::{MultiPoly, PolyMatrix};
use crate::{Error, Result};

/// Rank-`r` gluing data `g_ij` on a nerve, twisted by a 2-cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedBundle {
    rank: usize,
    /// Row-major over ordered pairs; `None` on empty pairs.
    gluing: Vec<Option<PolyMatrix>>,
    twist: UnitCochain2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingViolation {
    /// `g_ii != I`.
    NotIdentity(usize),
    /// `g_ij g_ji != I`.
    NotInverse(usize, usize),
    /// `g_ki g_jk g_ij != a_ijk I`.
    Twisted(usize, usize, usize),
}

impl TwistedBundle {
    /// `gluing(i, j)` is consulted on nonempty pairs only.
    pub fn new(rank: usize, twist: UnitCochain2, gluing: impl Fn(usize, usize) -> Option<PolyMatrix>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        let nerve = twist.nerve().clone();
        let n = nerve.index_count();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                if nerve.is_empty(&[i, j]) {
                    out.push(None);
                    continue;
                }
                let g = gluing(i, j).ok_or_else(|| {
                    Error::InvalidInput(format!("missing gluing matrix on ({}, {})", i, j))
                })?;
                if g.rows() != rank || g.cols() != rank {
                    return Err(Error::Shape(format!(
                        "gluing matrix on ({}, {}) is {}x{}, rank is {}",
                        i,
                        j,
                        g.rows(),
                        g.cols(),
                        rank
                    )));
                }
                out.push(Some(g));
            }
        }
        Ok(TwistedBundle {
            rank,
            gluing: out,
            twist,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nerve(&self) -> &CoverNerve {
        self.twist.nerve()
    }

    pub fn twist(&self) -> &UnitCochain2 {
        &self.twist
    }

    /// `g_ij`, `None` on an empty pair.
    pub fn gluing(&self, i: usize, j: usize) -> Option<&PolyMatrix> {
        self.gluing[i * self.nerve().index_count() + j].as_ref()
    }

    fn g(&self, i: usize, j: usize) -> &PolyMatrix {
        self.gluing(i, j).expect("pair of a nonempty triple")
    }
}

/// Checks `g_ii = I`, `g_ij g_ji = I` and `g_ki g_jk g_ij = a_ijk I` on
/// nonempty intersections, reporting the first failure. A `mu_n` twist
/// can only act on rational matrices through the values `+-1`.
pub fn twisted_gluing_check(e: &TwistedBundle) -> Result<Option<GluingViolation>> {
    let nerve = e.nerve();
    let n = nerve.index_count();
    let id = PolyMatrix::identity(e.rank);
    for i in 0..n {
        if *e.g(i, i) != id {
            return Ok(Some(GluingViolation::NotIdentity(i)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if nerve.is_empty(&[i, j]) {
                continue;
            }
            if e.g(i, j).checked_mul(e.g(j, i))? != id {
                return Ok(Some(GluingViolation::NotInverse(i, j)));
            }
        }
    }
    let group = e.twist.group();
    for [i, j, k] in e.twist.support() {
        let a = group.as_rational(e.twist.get(i, j, k)).ok_or_else(|| {
            Error::InvalidInput(format!(
                "twist value {} on ({}, {}, {}) is not a rational scalar",
                e.twist.get(i, j, k),
                i,
                j,
                k
            ))
        })?;
        let lhs = e.g(k, i).checked_mul(e.g(j, k))?.checked_mul(e.g(i, j))?;
        if lhs != PolyMatrix::scalar(e.rank, &MultiPoly::constant(a)) {
            return Ok(Some(GluingViolation::Twisted(i, j, k)));
        }
    }
    Ok(None)
}

/// Gluing of `End(E)`: `h_ij(M) = g_ij M g_ij^-1`, stored as an
/// `r^2 x r^2` matrix acting on row-major flattened `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AzumayaDescent {
    pub rank: usize,
    gluing: Vec<Option<PolyMatrix>>,
    index_count: usize,
    /// First triple where `h_ki h_jk h_ij != I`, expected `None`.
    pub cocycle_failure: Option<[usize; 3]>,
}

impl AzumayaDescent {
    pub fn gluing(&self, i: usize, j: usize) -> Option<&PolyMatrix> {
        self.gluing[i * self.index_count + j].as_ref()
    }
}

fn conjugation(g: &PolyMatrix, g_inv: &PolyMatrix) -> PolyMatrix {
    let r = g.rows();
    PolyMatrix::from_fn(r * r, r * r, |row, col| {
        let (a, b) = (row / r, row % r);
        let (c, d) = (col / r, col % r);
        g.get(a, c) * g_inv.get(d, b)
    })
}

/// Builds the untwisted gluing of the endomorphism bundle and verifies the
/// ordinary cocycle condition on it.
pub fn endomorphism_azumaya(e: &TwistedBundle) -> Result<AzumayaDescent> {
    if let Some(v) = twisted_gluing_check(e)? {
        return Err(Error::InvalidInput(format!("bundle fails the twisted gluing check: {:?}", v)));
    }
    let nerve = e.nerve();
    let n = nerve.index_count();
    let mut gluing = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            gluing.push(e.gluing(i, j).map(|g| conjugation(g, e.g(j, i))));
        }
    }
    let mut out = AzumayaDescent {
        rank: e.rank * e.rank,
        gluing,
        index_count: n,
        cocycle_failure: None,
    };
    let id = PolyMatrix::identity(out.rank);
    for [i, j, k] in e.twist.support() {
        let h = |a: usize, b: usize| out.gluing(a, b).expect("nonempty pair");
        let prod = h(k, i).checked_mul(h(j, k))?.checked_mul(h(i, j))?;
        if prod != id {
            out.cocycle_failure = Some([i, j, k]);
            break;
        }
    }
    Ok(out)
}
