//! Higgs pairs over affine space, the commutative subalgebras they
//! generate, spectral covers, curvature of connections, lambda-connections
//! and the quantum family `w -> z I`, `p -> lambda d_z + Phi`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{is_squarefree_over_fraction_field, min_poly, poly_rank, rank, MultiPoly, PolyMatrix, Rational, SPECTRAL_VAR};
use crate::diffop::{MixedContext, MixedOperator, BASE_VAR};
use crate::weyl::LAMBDA;
use crate::{Error, Result};

/// A free rank-`r` bundle with commuting-or-not endomorphisms `Phi_1..Phi_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiggsPair {
    rank: usize,
    phis: Vec<PolyMatrix>,
}

impl HiggsPair {
    pub fn new(rank: usize, phis: Vec<PolyMatrix>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        if let Some(p) = phis.iter().find(|p| p.rows() != rank || p.cols() != rank) {
            return Err(Error::Shape(format!(
                "Higgs field is {}x{}, rank is {}",
                p.rows(),
                p.cols(),
                rank
            )));
        }
        Ok(HiggsPair { rank, phis })
    }

    pub fn single(phi: PolyMatrix) -> Result<Self> {
        Self::new(phi.rows(), vec![phi])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn phis(&self) -> &[PolyMatrix] {
        &self.phis
    }

    fn only_field(&self) -> Result<&PolyMatrix> {
        match self.phis.as_slice() {
            [phi] => Ok(phi),
            other => Err(Error::InvalidInput(format!(
                "expected exactly one Higgs field, got {}",
                other.len()
            ))),
        }
    }
}

/// First pair `i < j` with `[Phi_i, Phi_j] != 0`.
pub fn first_noncommuting_pair(phis: &[PolyMatrix]) -> Option<(usize, usize)> {
    for i in 0..phis.len() {
        for j in i + 1..phis.len() {
            if !phis[i].commutator(&phis[j]).map(|c| c.is_zero()).unwrap_or(false) {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn commutativity_admissible(h: &HiggsPair) -> bool {
    first_noncommuting_pair(&h.phis).is_none()
}

/// Generator images together with module generators of the commutative
/// subalgebra of `M_r` they generate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismPresentation {
    pub rank: usize,
    pub generator_images: Vec<PolyMatrix>,
    pub subalgebra_basis: Vec<PolyMatrix>,
}

fn flat(m: &PolyMatrix) -> Vec<MultiPoly> {
    m.entries().to_vec()
}

/// Whether `m` lies in the span of `basis` over the fraction field of the
/// polynomial ring.
pub fn in_fraction_span(basis: &[PolyMatrix], m: &PolyMatrix) -> bool {
    let mut rows: Vec<Vec<MultiPoly>> = basis.iter().map(flat).collect();
    let before = poly_rank(&rows);
    rows.push(flat(m));
    poly_rank(&rows) == before
}

/// Closes `{I, Phi_1, .., Phi_k}` under products. At most `r^2` elements
/// can be independent, which bounds the loop.
pub fn higgs_to_morphism(h: &HiggsPair) -> Result<MorphismPresentation> {
    if let Some((i, j)) = first_noncommuting_pair(&h.phis) {
        return Err(Error::NotAdmissible(i, j));
    }
    let mut basis = vec![PolyMatrix::identity(h.rank)];
    for phi in &h.phis {
        if !in_fraction_span(&basis, phi) {
            basis.push(phi.clone());
        }
    }
    let bound = h.rank * h.rank;
    let mut changed = true;
    while changed && basis.len() < bound {
        changed = false;
        let n = basis.len();
        'outer: for i in 1..n {
            for j in i..n {
                let p = &basis[i] * &basis[j];
                if !in_fraction_span(&basis, &p) {
                    basis.push(p);
                    changed = true;
                    break 'outer;
                }
            }
        }
    }
    Ok(MorphismPresentation {
        rank: h.rank,
        generator_images: h.phis.clone(),
        subalgebra_basis: basis,
    })
}

pub fn morphism_to_higgs(m: &MorphismPresentation) -> Result<HiggsPair> {
    if let Some((i, j)) = first_noncommuting_pair(&m.generator_images) {
        return Err(Error::NotAdmissible(i, j));
    }
    HiggsPair::new(m.rank, m.generator_images.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralCover {
    /// `det(v I - Phi)`, monic of degree `r` in `v`.
    pub poly: MultiPoly,
    /// Squarefree in `Q(z)[v]`.
    pub reduced_flag: bool,
}

pub fn spectral_cover(h: &HiggsPair) -> Result<SpectralCover> {
    let phi = h.only_field()?;
    let poly = phi.char_poly(SPECTRAL_VAR)?;
    let reduced_flag = is_squarefree_over_fraction_field(&poly, SPECTRAL_VAR)?;
    Ok(SpectralCover { poly, reduced_flag })
}

/// Generator of the kernel of `Q[z][v] -> End(E)`, `v -> Phi`: the minimal
/// polynomial with denominators cleared.
pub fn image_ideal(h: &HiggsPair) -> Result<MultiPoly> {
    min_poly(h.only_field()?)
}

fn check_connection(vars: &[String], gammas: &[PolyMatrix]) -> Result<usize> {
    if vars.len() != gammas.len() {
        return Err(Error::Shape(format!(
            "{} coordinates but {} connection matrices",
            vars.len(),
            gammas.len()
        )));
    }
    let r = gammas.first().map_or(1, PolyMatrix::rows);
    if let Some(g) = gammas.iter().find(|g| g.rows() != r || g.cols() != r) {
        return Err(Error::Shape(format!("connection matrix {}x{} is not {}x{}", g.rows(), g.cols(), r, r)));
    }
    Ok(r)
}

/// `F_ij = d_i G_j - d_j G_i + [G_i, G_j]` for `i < j`.
pub fn curvature(vars: &[String], gammas: &[PolyMatrix]) -> Result<BTreeMap<(usize, usize), PolyMatrix>> {
    check_connection(vars, gammas)?;
    let mut out = BTreeMap::new();
    for i in 0..gammas.len() {
        for j in i + 1..gammas.len() {
            let f = &(&gammas[j].derivative(&vars[i]) - &gammas[i].derivative(&vars[j]))
                + &gammas[i].commutator(&gammas[j])?;
            out.insert((i, j), f);
        }
    }
    Ok(out)
}

/// Same components, computed as `[d_i + G_i, d_j + G_j]` in the algebra of
/// operators with trivial connection. A non-scalar-order result is an error.
pub fn curvature_via_operators(vars: &[String], gammas: &[PolyMatrix]) -> Result<BTreeMap<(usize, usize), PolyMatrix>> {
    let r = check_connection(vars, gammas)?;
    let n = vars.len();
    let ctx = MixedContext::new(r, vars.to_vec(), vec![PolyMatrix::zero(r, r); n])?;
    let ops = gammas
        .iter()
        .enumerate()
        .map(|(i, g)| MixedOperator::derivation(&ctx, i).checked_add(&MixedOperator::from_matrix(&ctx, g.clone())?))
        .collect::<Result<Vec<_>>>()?;
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = ops[i].commutator(&ops[j])?;
            if c.order().unwrap_or(0) > 0 {
                return Err(Error::InvalidInput("commutator of connections has derivation terms".into()));
            }
            out.insert((i, j), c.coeff(&vec![0; n]));
        }
    }
    Ok(out)
}

/// `nabla = lambda d_z + A` on a free rank-`r` bundle over the line, with
/// `A` polynomial in `z` and `lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaConnectionFamily {
    pub a: PolyMatrix,
    pub rank: usize,
}

impl LambdaConnectionFamily {
    pub fn new(a: PolyMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Shape("lambda-connection matrix must be square".into()));
        }
        Ok(LambdaConnectionFamily { rank: a.rows(), a })
    }

    /// `lambda s' + A s`.
    pub fn apply(&self, s: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        let lam = MultiPoly::var(LAMBDA);
        let av = self.a.apply(s)?;
        Ok(s.iter()
            .zip(av)
            .map(|(x, y)| &(&lam * &x.derivative(BASE_VAR)) + &y)
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaCheck {
    Ok,
    /// `nabla(f s) != lambda f' s + f nabla(s)` on basis section `s = e_index`.
    LeibnizFailure { index: usize },
    /// `A|_{lambda=0}` differs from `phi` at this entry.
    FiberMismatch {
        row: usize,
        col: usize,
        found: MultiPoly,
        expected: MultiPoly,
    },
}

/// Checks the lambda-Leibniz rule with `f = z` on each basis section and
/// that the connection restricts to `phi` at `lambda = 0`.
pub fn lambda_connection_check(fam: &LambdaConnectionFamily, phi: &PolyMatrix) -> Result<LambdaCheck> {
    if phi.rows() != fam.rank || phi.cols() != fam.rank {
        return Err(Error::Shape(format!(
            "phi is {}x{}, connection has rank {}",
            phi.rows(),
            phi.cols(),
            fam.rank
        )));
    }
    let f = MultiPoly::var(BASE_VAR);
    let lam = MultiPoly::var(LAMBDA);
    for j in 0..fam.rank {
        let e: Vec<MultiPoly> = (0..fam.rank).map(|i| if i == j { MultiPoly::one() } else { MultiPoly::zero() }).collect();
        let fe: Vec<MultiPoly> = e.iter().map(|x| &f * x).collect();
        let lhs = fam.apply(&fe)?;
        let ne = fam.apply(&e)?;
        let df = f.derivative(BASE_VAR);
        let ok = (0..fam.rank).all(|i| lhs[i] == &(&(&lam * &df) * &e[i]) + &(&f * &ne[i]));
        if !ok {
            return Ok(LambdaCheck::LeibnizFailure { index: j });
        }
    }
    let fiber = fam.a.eval(LAMBDA, &Rational::zero());
    for i in 0..fam.rank {
        for j in 0..fam.rank {
            if fiber.get(i, j) != phi.get(i, j) {
                return Ok(LambdaCheck::FiberMismatch {
                    row: i,
                    col: j,
                    found: fiber.get(i, j).clone(),
                    expected: phi.get(i, j).clone(),
                });
            }
        }
    }
    Ok(LambdaCheck::Ok)
}

/// Default total degree of the kernel probe.
pub const DEFAULT_PROBE_DEGREE: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberReport {
    /// Commutative fiber: support data of the Higgs pair.
    Classical { cover: SpectralCover, image_ideal: MultiPoly },
    /// `lambda != 0`: the images of `w^a p^b` with `a + b <= degree` and
    /// the rank they span.
    Quantum {
        lambda: Rational,
        degree: u32,
        monomials: usize,
        rank: usize,
    },
}

impl FiberReport {
    /// Kernel dimension of the probe, zero for the classical fiber.
    pub fn kernel_dim(&self) -> usize {
        match self {
            FiberReport::Classical { .. } => 0,
            FiberReport::Quantum { monomials, rank, .. } => monomials - rank,
        }
    }
}

/// Evaluator for the family `phi_lambda` attached to a single Higgs field.
#[derive(Clone, Debug)]
pub struct LambdaFamily {
    phi: PolyMatrix,
}

pub fn lambda_family(h: &HiggsPair) -> Result<LambdaFamily> {
    let phi = h.only_field()?.clone();
    if let Some(v) = phi.vars().into_iter().find(|v| v != BASE_VAR) {
        return Err(Error::InvalidInput(format!("Higgs field may only involve '{}', found '{}'", BASE_VAR, v)));
    }
    Ok(LambdaFamily { phi })
}

impl LambdaFamily {
    pub fn evaluate(&self, lambda: &Rational, degree: u32) -> Result<FiberReport> {
        if lambda.is_zero() {
            let h = HiggsPair::single(self.phi.clone())?;
            return Ok(FiberReport::Classical {
                cover: spectral_cover(&h)?,
                image_ideal: image_ideal(&h)?,
            });
        }
        let r = self.phi.rows();
        let ctx = MixedContext::line(r);
        let w = MixedOperator::from_matrix(&ctx, PolyMatrix::scalar(r, &MultiPoly::var(BASE_VAR)))?;
        let p = MixedOperator::from_matrix(&ctx, PolyMatrix::scalar(r, &MultiPoly::constant(lambda.clone())))?
            .mixed_mul(&MixedOperator::derivation(&ctx, 0))?
            .checked_add(&MixedOperator::from_matrix(&ctx, self.phi.clone())?)?;

        let mut w_pows = vec![MixedOperator::one(&ctx)];
        let mut p_pows = vec![MixedOperator::one(&ctx)];
        for k in 1..=degree as usize {
            w_pows.push(w_pows[k - 1].mixed_mul(&w)?);
            p_pows.push(p_pows[k - 1].mixed_mul(&p)?);
        }
        let mut keys: BTreeMap<(u32, usize, u32), usize> = BTreeMap::new();
        let mut images: Vec<BTreeMap<usize, Rational>> = Vec::new();
        for total in 0..=degree as usize {
            for a in 0..=total {
                let img = w_pows[a].mixed_mul(&p_pows[total - a])?;
                let mut v = BTreeMap::new();
                for (alpha, m) in img.terms() {
                    for (e, entry) in m.entries().iter().enumerate() {
                        for (k, c) in entry.coefficients_in(BASE_VAR).iter().enumerate() {
                            let c = c.constant_value().expect("entries involve only z");
                            if c.is_zero() {
                                continue;
                            }
                            let next = keys.len();
                            let idx = *keys.entry((alpha[0], e, k as u32)).or_insert(next);
                            v.insert(idx, c);
                        }
                    }
                }
                images.push(v);
            }
        }
        let ncols = keys.len();
        let dense: Vec<Vec<Rational>> = images
            .iter()
            .map(|v| (0..ncols).map(|i| v.get(&i).cloned().unwrap_or_else(Rational::zero)).collect())
            .collect();
        Ok(FiberReport::Quantum {
            lambda: lambda.clone(),
            degree,
            monomials: images.len(),
            rank: rank(&dense, ncols),
        })
    }
}

/// Names `w1..wn`.
pub fn affine_coordinates(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("w{}", i)).collect()
}
