//! Matrix-valued differential operators on a free bundle over affine space,
//! and the commuting-partner problem `[lambda d_z + A, B] = 0`.
//!
//! A [`MixedOperator`] is a finite sum `sum_alpha M_alpha d^alpha` with the
//! matrix coefficients on the left. Moving a derivation past a matrix uses
//! the induced connection on endomorphisms,
//! `d_i M = (dM/dw_i + [G_i, M]) + M d_i`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{kernel_saturated, min_poly, nullspace, rref, MultiPoly, PolyMatrix, Rational, SPECTRAL_VAR};
use crate::{Error, Result};

/// Coordinate of the affine line.
pub const BASE_VAR: &str = "z";

/// Rank, coordinate names and connection matrices shared by operators that
/// can be multiplied together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedContext {
    rank: usize,
    vars: Vec<String>,
    gammas: Vec<PolyMatrix>,
}

impl MixedContext {
    /// Trivial connection on the affine line.
    pub fn line(rank: usize) -> Self {
        MixedContext {
            rank,
            vars: vec![String::from(BASE_VAR)],
            gammas: vec![PolyMatrix::zero(rank, rank)],
        }
    }

    /// One connection matrix per coordinate.
    pub fn new(rank: usize, vars: Vec<String>, gammas: Vec<PolyMatrix>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        if vars.len() != gammas.len() {
            return Err(Error::Shape(format!(
                "{} coordinates but {} connection matrices",
                vars.len(),
                gammas.len()
            )));
        }
        if let Some(g) = gammas.iter().find(|g| g.rows() != rank || g.cols() != rank) {
            return Err(Error::Shape(format!(
                "connection matrix is {}x{}, expected {}x{}",
                g.rows(),
                g.cols(),
                rank,
                rank
            )));
        }
        // derivations only commute with each other when the connection is flat
        for i in 0..gammas.len() {
            for j in i + 1..gammas.len() {
                let f = &(&gammas[j].derivative(&vars[i]) - &gammas[i].derivative(&vars[j]))
                    + &gammas[i].commutator(&gammas[j])?;
                if !f.is_zero() {
                    return Err(Error::Precondition(format!(
                        "connection has curvature in the ({}, {}) direction",
                        vars[i], vars[j]
                    )));
                }
            }
        }
        Ok(MixedContext { rank, vars, gammas })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn gammas(&self) -> &[PolyMatrix] {
        &self.gammas
    }

    /// `dM/dw_i + [G_i, M]`.
    pub fn covariant_derivative(&self, i: usize, m: &PolyMatrix) -> PolyMatrix {
        let g = &self.gammas[i];
        let d = m.derivative(&self.vars[i]);
        if g.is_zero() {
            return d;
        }
        &d + &g.commutator(m).expect("square of matching rank")
    }
}

/// Normal-ordered element `sum_alpha M_alpha d^alpha`.
#[derive(Clone, PartialEq, Eq)]
pub struct MixedOperator {
    ctx: MixedContext,
    terms: BTreeMap<Vec<u32>, PolyMatrix>,
}

impl MixedOperator {
    pub fn zero(ctx: &MixedContext) -> Self {
        MixedOperator {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &MixedContext) -> Self {
        Self::from_matrix(ctx, PolyMatrix::identity(ctx.rank)).expect("identity has the context rank")
    }

    /// `m * d^alpha`.
    pub fn term(ctx: &MixedContext, m: PolyMatrix, alpha: Vec<u32>) -> Result<Self> {
        if m.rows() != ctx.rank || m.cols() != ctx.rank {
            return Err(Error::Shape(format!(
                "coefficient is {}x{}, operator rank is {}",
                m.rows(),
                m.cols(),
                ctx.rank
            )));
        }
        if alpha.len() != ctx.vars.len() {
            return Err(Error::Shape("derivation multi-index has the wrong length".into()));
        }
        let mut out = Self::zero(ctx);
        out.insert(alpha, m);
        Ok(out)
    }

    pub fn from_matrix(ctx: &MixedContext, m: PolyMatrix) -> Result<Self> {
        Self::term(ctx, m, vec![0; ctx.vars.len()])
    }

    /// The derivation along coordinate `i`.
    pub fn derivation(ctx: &MixedContext, i: usize) -> Self {
        let mut alpha = vec![0; ctx.vars.len()];
        alpha[i] = 1;
        Self::term(ctx, PolyMatrix::identity(ctx.rank), alpha).expect("identity has the context rank")
    }

    pub fn context(&self) -> &MixedContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `d^alpha`.
    pub fn coeff(&self, alpha: &[u32]) -> PolyMatrix {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zero(self.ctx.rank, self.ctx.rank))
    }

    /// Nonzero terms by ascending multi-index.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &PolyMatrix)> + '_ {
        self.terms.iter().map(|(a, m)| (a.as_slice(), m))
    }

    /// Highest total derivation order, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.iter().sum()).max()
    }

    fn insert(&mut self, alpha: Vec<u32>, m: PolyMatrix) {
        if m.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&alpha) {
            Some(old) => &old + &m,
            None => m,
        };
        if !sum.is_zero() {
            self.terms.insert(alpha, sum);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.rank != other.ctx.rank {
            return Err(Error::Shape(format!("rank {} vs rank {}", self.ctx.rank, other.ctx.rank)));
        }
        if self.ctx != other.ctx {
            return Err(Error::Shape("operators use different coordinates or connections".into()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, m) in &other.terms {
            out.insert(a.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MixedOperator {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(a, m)| (a.clone(), -m)).collect(),
        }
    }

    /// `d_i * self`.
    fn left_derivation(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (a, m) in &self.terms {
            out.insert(a.clone(), self.ctx.covariant_derivative(i, m));
            let mut shifted = a.clone();
            shifted[i] += 1;
            out.insert(shifted, m.clone());
        }
        out
    }

    /// Normal-ordered product.
    pub fn mixed_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.ctx);
        for (alpha, m) in &self.terms {
            let mut moved = other.clone();
            for (i, &k) in alpha.iter().enumerate() {
                for _ in 0..k {
                    moved = moved.left_derivation(i);
                }
            }
            for (beta, n) in &moved.terms {
                out.insert(beta.clone(), m * n);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mixed_mul(other)?.checked_sub(&other.mixed_mul(self)?)
    }
}

impl fmt::Display for MixedOperator {
    /// Terms `M*dz^k` by ascending derivation order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (alpha, m)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", m)?;
            for (v, &k) in self.ctx.vars.iter().zip(alpha.iter()) {
                match k {
                    0 => {}
                    1 => write!(f, "*d{}", v)?,
                    _ => write!(f, "*d{}^{}", v, k)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MixedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MixedOperator({})", self)
    }
}

fn check_square_pair(a: &PolyMatrix, b: &PolyMatrix) -> Result<()> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Shape(format!(
            "expected square matrices of one size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// `lambda * dB/dz + [A, B]`. `lambda` may be a constant or the variable
/// `lambda`.
pub fn commutation_constraint(a: &PolyMatrix, b: &PolyMatrix, lambda: &MultiPoly) -> Result<PolyMatrix> {
    check_square_pair(a, b)?;
    let db = b.derivative(BASE_VAR).scale(lambda);
    db.checked_add(&a.commutator(b)?)
}

fn ensure_base_only(m: &PolyMatrix, what: &str) -> Result<()> {
    if let Some(v) = m.vars().into_iter().find(|v| v != BASE_VAR) {
        return Err(Error::InvalidInput(format!(
            "{} may only involve '{}', found '{}'",
            what, BASE_VAR, v
        )));
    }
    Ok(())
}

/// Degree bound used when none is given: twice the entry degree of `A`,
/// plus two.
pub fn default_deg_bound(a: &PolyMatrix) -> u32 {
    2 * a.degree_in(BASE_VAR) + 2
}

/// Q-basis of the polynomial solutions `B` with entry degree at most
/// `deg_bound` of `lambda B' + [A, B] = 0`, in reduced echelon form over the
/// coordinates (entry row-major, then ascending power of z).
pub fn solve_commutation(a: &PolyMatrix, lambda: &Rational, deg_bound: u32) -> Result<Vec<PolyMatrix>> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    if !a.is_square() {
        return Err(Error::Shape("A must be square".into()));
    }
    ensure_base_only(a, "A")?;
    let r = a.rows();
    let per_entry = deg_bound as usize + 1;
    let unknowns = r * r * per_entry;
    let out_len = deg_bound as usize + a.degree_in(BASE_VAR) as usize + 1;
    let lam = MultiPoly::constant(lambda.clone());
    let z = MultiPoly::var(BASE_VAR);

    let basis_matrix = |col: usize| -> PolyMatrix {
        let entry = col / per_entry;
        let k = (col % per_entry) as u32;
        PolyMatrix::unit(r, entry / r, entry % r).scale(&z.pow(k))
    };

    // column j of the system is the constraint applied to the j-th ansatz matrix
    let mut system = vec![vec![Rational::zero(); unknowns]; r * r * out_len];
    for col in 0..unknowns {
        let image = commutation_constraint(a, &basis_matrix(col), &lam)?;
        for (e, p) in image.entries().iter().enumerate() {
            for (k, c) in p.coefficients_in(BASE_VAR).iter().enumerate() {
                let c = c.constant_value().expect("entries involve only z");
                system[e * out_len + k][col] = c;
            }
        }
    }
    let kernel = nullspace(&system, unknowns);
    let echelon = rref(kernel, unknowns);
    Ok(echelon
        .rows
        .iter()
        .map(|v| {
            v.iter().enumerate().fold(PolyMatrix::zero(r, r), |acc, (col, c)| {
                if c.is_zero() {
                    acc
                } else {
                    &acc + &basis_matrix(col).scale_rational(c)
                }
            })
        })
        .collect())
}

fn entries_2x2(a: &PolyMatrix) -> Result<[MultiPoly; 4]> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::Shape(format!("expected a 2x2 matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok([a.get(0, 0).clone(), a.get(0, 1).clone(), a.get(1, 0).clone(), a.get(1, 1).clone()])
}

/// `(a1 - a4)^2 + 4 a2 a3` for `A = [[a1, a2], [a3, a4]]`.
pub fn discriminant(a: &PolyMatrix) -> Result<MultiPoly> {
    let [a1, a2, a3, a4] = entries_2x2(a)?;
    let d = &a1 - &a4;
    Ok(&(&d * &d) + &(&a2 * &a3).scale(&Rational::from_integer(4.into())))
}

/// The four closed-form solutions `B1..B4` for a z-constant 2x2 `A` with
/// vanishing discriminant. Their degree-zero terms are the elementary
/// matrices `E11, E12, E21, E22`.
pub fn paper_basis(a: &PolyMatrix, lambda: &Rational) -> Result<[PolyMatrix; 4]> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let [a1, a2, a3, a4] = entries_2x2(a)?;
    if a.entries().iter().any(|e| !e.vars().is_empty()) {
        return Err(Error::Precondition(
            "closed-form solutions need a constant A (entries free of z)".into(),
        ));
    }
    if !discriminant(a)?.is_zero() {
        return Err(Error::Precondition("discriminant (a1 - a4)^2 + 4 a2 a3 is nonzero".into()));
    }
    let z = MultiPoly::var(BASE_VAR);
    let l1 = MultiPoly::constant(lambda.recip());
    let l2 = &l1 * &l1;
    let half = Rational::new(1.into(), 2.into());
    let d = &a1 - &a4;
    let one = MultiPoly::one();
    // u = z/lambda, q = z^2/lambda^2
    let u = &z * &l1;
    let q = &(&z * &z) * &l2;
    let hd = d.scale(&half);
    let a23 = &a2 * &a3;

    let b1 = [
        &one + &(&a23 * &q),
        &(&a2 * &u) - &(&(&hd * &a2) * &q),
        -(&(&a3 * &u) + &(&(&hd * &a3) * &q)),
        -(&a23 * &q),
    ];
    let b2 = [
        &(&a3 * &u) - &(&(&hd * &a3) * &q),
        &(&one - &(&d * &u)) - &(&a23 * &q),
        -(&(&a3 * &a3) * &q),
        &(&(&hd * &a3) * &q) - &(&a3 * &u),
    ];
    let b3 = [
        -(&(&a2 * &u) + &(&(&hd * &a2) * &q)),
        -(&(&a2 * &a2) * &q),
        &(&one + &(&d * &u)) - &(&a23 * &q),
        &(&a2 * &u) + &(&(&hd * &a2) * &q),
    ];
    let b4 = [
        -(&a23 * &q),
        &(&(&hd * &a2) * &q) - &(&a2 * &u),
        &(&a3 * &u) + &(&(&hd * &a3) * &q),
        &one + &(&a23 * &q),
    ];
    let build = |e: [MultiPoly; 4]| {
        let [p, q, r, s] = e;
        PolyMatrix::from_rows(vec![vec![p, q], vec![r, s]]).expect("2x2")
    };
    Ok([build(b1), build(b2), build(b3), build(b4)])
}

/// `sum_i bhat_i B_i` over the closed-form basis.
pub fn assemble_from_basis(a: &PolyMatrix, bhat: &[Rational; 4], lambda: &Rational) -> Result<PolyMatrix> {
    let basis = paper_basis(a, lambda)?;
    Ok(basis
        .iter()
        .zip(bhat.iter())
        .fold(PolyMatrix::zero(2, 2), |acc, (b, c)| &acc + &b.scale_rational(c)))
}

/// How the eigenvalues of a commuting partner `B` split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HiggsingCase {
    /// Two different eigenvalues, smaller first.
    DistinctEigen(Rational, Rational),
    RepeatedSemisimple(Rational),
    RepeatedNilpotent(Rational),
}

impl HiggsingCase {
    pub fn tag(&self) -> &'static str {
        match self {
            HiggsingCase::DistinctEigen(..) => "DistinctEigen",
            HiggsingCase::RepeatedSemisimple(_) => "RepeatedSemisimple",
            HiggsingCase::RepeatedNilpotent(_) => "RepeatedNilpotent",
        }
    }

    pub fn eigenvalues(&self) -> Vec<Rational> {
        match self {
            HiggsingCase::DistinctEigen(a, b) => vec![a.clone(), b.clone()],
            HiggsingCase::RepeatedSemisimple(a) | HiggsingCase::RepeatedNilpotent(a) => vec![a.clone()],
        }
    }
}

/// Saturated kernel of `B - nu` over Q[z].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenComponent {
    pub eigenvalue: Rational,
    pub basis: Vec<Vec<MultiPoly>>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiggsingReport {
    pub case_tag: HiggsingCase,
    pub kernel_ideal_gen: MultiPoly,
    pub components: Vec<EigenComponent>,
    pub filtration_flag: bool,
}

fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    Some(Rational::new(integer_sqrt_exact(q.numer())?, integer_sqrt_exact(q.denom())?))
}

fn component(b: &PolyMatrix, nu: &Rational) -> Result<EigenComponent> {
    let shifted = b.checked_sub(&PolyMatrix::scalar(b.rows(), &MultiPoly::constant(nu.clone())))?;
    let basis = kernel_saturated(&shifted)?;
    Ok(EigenComponent {
        eigenvalue: nu.clone(),
        rank: basis.len(),
        basis,
    })
}

/// Eigen-decomposition of a 2x2 commuting partner whose characteristic
/// polynomial is z-free and splits over Q.
pub fn classify_higgsing(b: &PolyMatrix) -> Result<HiggsingReport> {
    if b.rows() != 2 || b.cols() != 2 {
        return Err(Error::Shape(format!(
            "eigen-splitting is implemented for 2x2 matrices, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    ensure_base_only(b, "B")?;
    let chi = b.char_poly(SPECTRAL_VAR)?;
    let coeffs = chi
        .coefficients_in(SPECTRAL_VAR)
        .iter()
        .map(|c| c.constant_value())
        .collect::<Option<Vec<Rational>>>()
        .ok_or_else(|| Error::NonConstant(format!("characteristic polynomial {} depends on z", chi)))?;
    // v^2 - t v + det
    let t = -coeffs[1].clone();
    let det = coeffs[0].clone();
    let disc = &t * &t - Rational::from_integer(4.into()) * &det;
    let s = rational_sqrt(&disc)
        .ok_or_else(|| Error::NotSplit(format!("{} has no rational roots", chi)))?;
    let half = Rational::new(1.into(), 2.into());
    let kernel_ideal_gen = min_poly(b)?;
    if !s.is_zero() {
        let lo = (&t - &s) * &half;
        let hi = (&t + &s) * &half;
        return Ok(HiggsingReport {
            components: vec![component(b, &lo)?, component(b, &hi)?],
            case_tag: HiggsingCase::DistinctEigen(lo, hi),
            kernel_ideal_gen,
            filtration_flag: false,
        });
    }
    let nu = t * half;
    let nilpotent = kernel_ideal_gen.degree_in(SPECTRAL_VAR) == Some(2);
    Ok(HiggsingReport {
        components: vec![component(b, &nu)?],
        case_tag: if nilpotent {
            HiggsingCase::RepeatedNilpotent(nu)
        } else {
            HiggsingCase::RepeatedSemisimple(nu)
        },
        kernel_ideal_gen,
        filtration_flag: nilpotent,
    })
}

/// Builds `B = sum bhat_i B_i` from the closed-form basis and classifies it.
pub fn pushforward_report(a: &PolyMatrix, bhat: &[Rational; 4], lambda: &Rational) -> Result<HiggsingReport> {
    classify_higgsing(&assemble_from_basis(a, bhat, lambda)?)
}

/// `B` evaluated at `z = 0`.
pub fn degree_zero_term(b: &PolyMatrix) -> PolyMatrix {
    b.eval(BASE_VAR, &Rational::zero())
}

/// `true` if `m` is a Q-linear combination of `basis`.
pub fn in_rational_span(basis: &[PolyMatrix], m: &PolyMatrix) -> bool {
    let coords = |p: &PolyMatrix| -> Vec<(Vec<(String, u32)>, Rational, usize)> {
        let mut out = Vec::new();
        for (e, entry) in p.entries().iter().enumerate() {
            for (powers, c) in entry.terms() {
                out.push((powers.iter().map(|(v, k)| (String::from(*v), *k)).collect(), c.clone(), e));
            }
        }
        out
    };
    let mut keys: Vec<(usize, Vec<(String, u32)>)> = Vec::new();
    let mut vecs: Vec<BTreeMap<usize, Rational>> = Vec::new();
    for p in basis.iter().chain(core::iter::once(m)) {
        let mut v = BTreeMap::new();
        for (mono, c, e) in coords(p) {
            let key = (e, mono);
            let idx = match keys.iter().position(|k| *k == key) {
                Some(i) => i,
                None => {
                    keys.push(key);
                    keys.len() - 1
                }
            };
            v.insert(idx, c);
        }
        vecs.push(v);
    }
    let dense: Vec<Vec<Rational>> = vecs
        .iter()
        .map(|v| (0..keys.len()).map(|i| v.get(&i).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    let without = crate::algebra::rank(&dense[..basis.len()], keys.len());
    let with = crate::algebra::rank(&dense, keys.len());
    without == with
}
