use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{MultiPoly, Rational};
use crate::{Error, Result};

/// Variable of Hilbert polynomials.
pub const HILBERT_VAR: &str = "m";

/// `O(a_1) + .. + O(a_s)` plus a torsion sheaf of the given length on the
/// projective line.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SheafOnP1 {
    pub summands: Vec<i64>,
    pub torsion_length: u64,
}

impl SheafOnP1 {
    /// Dimension of the support: 1 with a locally free part, 0 for nonzero
    /// pure torsion, `None` for the zero sheaf.
    pub fn dimension(&self) -> Option<u32> {
        if !self.summands.is_empty() {
            Some(1)
        } else if self.torsion_length > 0 {
            Some(0)
        } else {
            None
        }
    }
}

fn line(slope: i64, constant: i64) -> MultiPoly {
    &MultiPoly::var(HILBERT_VAR).scale(&Rational::from_integer(slope.into())) + &MultiPoly::int(constant)
}

/// `m -> chi((F (x) G^dual)(m))` for split `F` and a split locally free `G`
/// of rank `g_rank` with summands `O(b_j)`. Each `O(d)` contributes
/// `m + d + 1`, torsion of length `l` contributes `l * g_rank`.
pub fn hilbert_poly(f: &SheafOnP1, g_rank: usize, g_summands: &[i64]) -> Result<MultiPoly> {
    if g_rank == 0 || g_summands.len() != g_rank {
        return Err(Error::InvalidInput(format!(
            "G has rank {} but {} summands",
            g_rank,
            g_summands.len()
        )));
    }
    let mut acc = MultiPoly::int(f.torsion_length as i64 * g_rank as i64);
    for a in &f.summands {
        for b in g_summands {
            acc = &acc + &line(1, a - b + 1);
        }
    }
    Ok(acc)
}

/// Hilbert polynomial of a pushforward `+ O(a_i)` for the polarization
/// `O(1) [x] O(1)`, where the target polarization has degree `d_i` on the
/// `i`-th component: `sum (a_i + m (1 + d_i) + 1)`.
pub fn morphism_hilbert_poly(summands: &[(i64, i64)]) -> MultiPoly {
    summands
        .iter()
        .fold(MultiPoly::zero(), |acc, &(a, d)| &acc + &line(1 + d, a + 1))
}
