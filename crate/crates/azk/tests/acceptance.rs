//! Acceptance suite: one line per criterion. Tolerances are exact (rational
//! arithmetic, tolerance 0) and the two runtime bounds are pinned below.
//!
//! Criteria listed in `KNOWN_RED` are expected to fail; the process exits
//! nonzero on any other failure, or if a known-red criterion starts passing.

use std::process::Command;
use std::time::{Duration, Instant};

use azk::gen;
use azk::suites::{run_suite, support_configuration, torsion_length};
use azk_core::diffop::{
    commutation_constraint, default_deg_bound, paper_basis, pushforward_report, solve_commutation, HiggsingCase,
    BASE_VAR,
};
use azk_core::spectral::{higgs_to_morphism, image_ideal, lambda_family, morphism_to_higgs, spectral_cover, FiberReport, HiggsPair};
use azk_core::twisted::{
    check_2cocycle, coboundary, face_cocycle, hilbert_poly, is_coboundary, refine, CoverNerve, SheafOnP1,
    Unit, UnitCochain2, UnitGroup,
};
use azk_core::{LambdaMode, MultiPoly, PolyMatrix, Rational, WeylElement};
use num_traits::{One, Zero};
use rand::Rng;

const C1_RUNTIME: Duration = Duration::from_secs(5);
const C4_RUNTIME: Duration = Duration::from_secs(10);
const SEED: u64 = 0x5eed;

/// Criterion 6 asks for equality of image and cover exactly when the cover
/// is squarefree. A cyclic non-semisimple field such as `[[0, z], [0, 0]]`
/// has minimal polynomial equal to its non-squarefree characteristic
/// polynomial, so the converse direction cannot hold.
const KNOWN_RED: &[u32] = &[6];

type Outcome = Result<String, String>;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: azk_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{}: {}", e.code(), e))
}

// ---------- independent oracles ----------

/// Rank over Q by plain Gaussian elimination.
fn rank_q(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &pivot;
                for c in col..ncols {
                    let t = &f * &rows[rank][c];
                    rows[r][c] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficient vector of a matrix over Q[z], entry-major, z-degree up to `deg`.
fn flatten(m: &PolyMatrix, deg: usize) -> Vec<Rational> {
    let mut out = Vec::new();
    for e in m.entries() {
        let cs = e.coefficients_in(BASE_VAR);
        for k in 0..=deg {
            out.push(cs.get(k).and_then(MultiPoly::constant_value).unwrap_or_else(Rational::zero));
        }
    }
    out
}

fn span_rank(ms: &[&PolyMatrix], deg: usize) -> usize {
    rank_q(ms.iter().map(|m| flatten(m, deg)).collect())
}

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    PolyMatrix::from_fn(2, 2, |i, j| &(a.get(i, 0) * b.get(0, j)) + &(a.get(i, 1) * b.get(1, j)))
}

/// `lambda B' + AB - BA`, entrywise.
fn ode_residual(a: &PolyMatrix, b: &PolyMatrix, lambda: &Rational) -> PolyMatrix {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    PolyMatrix::from_fn(2, 2, |i, j| {
        &(&b.get(i, j).derivative(BASE_VAR).scale(lambda) + ab.get(i, j)) - ba.get(i, j)
    })
}

/// `v^2 - tr v + det` for a 2x2 matrix.
fn char2(m: &PolyMatrix) -> MultiPoly {
    let v = MultiPoly::var("v");
    let tr = m.get(0, 0) + m.get(1, 1);
    let det = &(m.get(0, 0) * m.get(1, 1)) - &(m.get(0, 1) * m.get(1, 0));
    &(&(&v * &v) - &(&tr * &v)) + &det
}

/// Closed-form solutions transcribed from the worked example, for constant `A`.
fn transcribed_basis(a: &PolyMatrix, lambda: &Rational) -> [PolyMatrix; 4] {
    let c = |i: usize, j: usize| a.get(i, j).constant_value().expect("constant A");
    let (a1, a2, a3, a4) = (c(0, 0), c(0, 1), c(1, 0), c(1, 1));
    let l1 = lambda.recip();
    let l2 = &l1 * &l1;
    let half = Rational::new(1.into(), 2.into());
    let d = &a1 - &a4;
    let z = |c0: Rational, c1: Rational, c2: Rational| {
        &(&MultiPoly::constant(c0) + &MultiPoly::term(c1, &[(BASE_VAR, 1)])) + &MultiPoly::term(c2, &[(BASE_VAR, 2)])
    };
    let zero = Rational::zero;
    let one = Rational::one;
    let m = |e: [MultiPoly; 4]| {
        let [p, q, r, s] = e;
        PolyMatrix::from_rows(vec![vec![p, q], vec![r, s]]).unwrap()
    };
    let a2a3 = &a2 * &a3;
    let hd = &half * &d;
    [
        m([
            z(one(), zero(), &l2 * &a2a3),
            z(zero(), &l1 * &a2, -(&(&l2 * &hd) * &a2)),
            z(zero(), -(&l1 * &a3), -(&(&l2 * &hd) * &a3)),
            z(zero(), zero(), -(&l2 * &a2a3)),
        ]),
        m([
            z(zero(), &l1 * &a3, -(&(&l2 * &hd) * &a3)),
            z(one(), -(&l1 * &d), -(&l2 * &a2a3)),
            z(zero(), zero(), -(&(&l2 * &a3) * &a3)),
            z(zero(), -(&l1 * &a3), &(&l2 * &hd) * &a3),
        ]),
        m([
            z(zero(), -(&l1 * &a2), -(&(&l2 * &hd) * &a2)),
            z(zero(), zero(), -(&(&l2 * &a2) * &a2)),
            z(one(), &l1 * &d, -(&l2 * &a2a3)),
            z(zero(), &l1 * &a2, &(&l2 * &hd) * &a2),
        ]),
        m([
            z(zero(), zero(), -(&l2 * &a2a3)),
            z(zero(), -(&l1 * &a2), &(&l2 * &hd) * &a2),
            z(zero(), &l1 * &a3, &(&l2 * &hd) * &a3),
            z(one(), zero(), &l2 * &a2a3),
        ]),
    ]
}

/// `D f` with `d_i` acting as `lambda * d/dx_i`, term by term.
fn oracle_act(d: &WeylElement, f: &MultiPoly, lambda: &Rational) -> MultiPoly {
    let names = gen::position_vars(d.n());
    let mut acc = MultiPoly::zero();
    for (a, b, c) in d.terms() {
        let mut g = f.clone();
        for (i, &e) in b.iter().enumerate() {
            for _ in 0..e {
                g = g.derivative(&names[i]).scale(lambda);
            }
        }
        for (i, &e) in a.iter().enumerate() {
            g = &g * &MultiPoly::var(&names[i]).pow(e);
        }
        acc = &acc + &(c * &g);
    }
    acc
}

// ---------- criteria ----------

fn c1() -> Outcome {
    let start = Instant::now();
    let mut g = gen::rng(SEED);
    let mut instances = vec![(PolyMatrix::from_ints(&[&[0, 1], &[0, 0]]), q(1))];
    for _ in 0..12 {
        instances.push((gen::disc_zero_a(&mut g), gen::nonzero_int(&mut g, 3)));
    }
    for (a, lambda) in &instances {
        let basis = core(paper_basis(a, lambda))?;
        let expected = transcribed_basis(a, lambda);
        ensure(basis == expected, || format!("closed-form basis differs from transcription for A = {:?}", a))?;
        for b in &basis {
            ensure(ode_residual(a, b, lambda).is_zero(), || format!("lambda B' + [A, B] != 0 for A = {:?}", a))?;
            ensure(core(commutation_constraint(a, b, &MultiPoly::constant(lambda.clone())))?.is_zero(), || {
                "library constraint disagrees with the oracle".into()
            })?;
        }
        let bound = default_deg_bound(a);
        ensure(bound == 2 * a.degree_in(BASE_VAR) + 2, || "default degree bound".into())?;
        let space = core(solve_commutation(a, lambda, bound))?;
        ensure(space.len() == 4, || format!("solver dimension {} for A = {:?}", space.len(), a))?;
        let deg = bound as usize;
        let all: Vec<&PolyMatrix> = basis.iter().chain(space.iter()).collect();
        let r_basis = span_rank(&basis.iter().collect::<Vec<_>>(), deg);
        let r_space = span_rank(&space.iter().collect::<Vec<_>>(), deg);
        let r_all = span_rank(&all, deg);
        ensure(r_basis == 4 && r_space == 4 && r_all == 4, || {
            format!("ranks basis {} space {} union {} for A = {:?}", r_basis, r_space, r_all, a)
        })?;
    }
    let took = start.elapsed();
    ensure(took < C1_RUNTIME, || format!("took {:?}", took))?;
    Ok(format!("{} matrices A, dimension 4, spans equal, {:.2?}", instances.len(), took))
}

fn c2() -> Outcome {
    let mut g = gen::rng(SEED + 2);
    for i in 0..50 {
        let a = if i == 0 { PolyMatrix::from_ints(&[&[0, 1], &[0, 0]]) } else { gen::disc_zero_a(&mut g) };
        let lambda = gen::nonzero_int(&mut g, 3);
        let bhat = gen::bhat(&mut g, 7);
        let b = transcribed_basis(&a, &lambda)
            .iter()
            .zip(&bhat)
            .fold(PolyMatrix::zero(2, 2), |acc, (m, c)| &acc + &m.scale_rational(c));
        let lib = core(azk_core::diffop::assemble_from_basis(&a, &bhat, &lambda))?;
        ensure(lib == b, || "assembled B differs from the transcribed combination".into())?;
        let b0 = PolyMatrix::from_fn(2, 2, |r, c| b.get(r, c).coefficients_in(BASE_VAR).first().cloned().unwrap_or_else(MultiPoly::zero));
        let want = PolyMatrix::from_fn(2, 2, |r, c| MultiPoly::constant(bhat[2 * r + c].clone()));
        ensure(b0 == want, || format!("B(0) = {:?} for bhat {:?}", b0, bhat))?;
        ensure(core(azk_core::diffop::degree_zero_term(&b).char_poly("v"))? == char2(&b0), || "library B(0)".into())?;
        let chi = char2(&b);
        ensure(!chi.uses(BASE_VAR), || format!("char poly {} depends on z", chi))?;
        ensure(chi == char2(&b0), || format!("{} != {}", chi, char2(&b0)))?;
        ensure(core(b.char_poly("v"))? == chi, || "library char_poly disagrees with the 2x2 formula".into())?;
    }
    Ok("50 random bhat: B(0) = bhat, char_poly(B) = char_poly(B(0)), z-free".into())
}

fn conj(p: &[[i64; 2]; 2], m: [[Rational; 2]; 2]) -> [Rational; 4] {
    // P M P^-1 for unimodular P
    let det = q(p[0][0] * p[1][1] - p[0][1] * p[1][0]);
    let pinv = [[q(p[1][1]) / &det, q(-p[0][1]) / &det], [q(-p[1][0]) / &det, q(p[0][0]) / &det]];
    let pm = |i: usize, j: usize| (0..2).map(|k| q(p[i][k]) * &m[k][j]).fold(Rational::zero(), |a, b| a + b);
    let out = |i: usize, j: usize| (0..2).map(|k| pm(i, k) * &pinv[k][j]).fold(Rational::zero(), |a, b| a + b);
    [out(0, 0), out(0, 1), out(1, 0), out(1, 1)]
}

fn c3() -> Outcome {
    let mut g = gen::rng(SEED + 3);
    let ps = [[[1, 0], [0, 1]], [[1, 1], [0, 1]], [[2, 1], [1, 1]], [[1, -2], [1, -1]], [[3, 2], [1, 1]]];
    let mut counts = [0usize; 3];
    for inst in 0..30 {
        let a = if inst % 3 == 0 { PolyMatrix::from_ints(&[&[0, 1], &[0, 0]]) } else { gen::disc_zero_a(&mut g) };
        let lambda = gen::nonzero_int(&mut g, 2);
        let p = &ps[inst % ps.len()];
        let nu = gen::int(&mut g, -4, 4);
        let kind = inst % 3;
        let bhat = match kind {
            0 => {
                let mu = &nu + gen::nonzero_int(&mut g, 3);
                conj(p, [[nu.clone(), Rational::zero()], [Rational::zero(), mu]])
            }
            1 => [nu.clone(), Rational::zero(), Rational::zero(), nu.clone()],
            _ => conj(p, [[nu.clone(), Rational::one()], [Rational::zero(), nu.clone()]]),
        };
        let b = core(azk_core::diffop::assemble_from_basis(&a, &bhat, &lambda))?;
        let r = core(pushforward_report(&a, &bhat, &lambda))?;
        let v_minus = |x: &Rational| &MultiPoly::var("v") - &MultiPoly::constant(x.clone());
        let shifted = |x: &Rational| &b - &PolyMatrix::scalar(2, &MultiPoly::constant(x.clone()));
        match (kind, &r.case_tag) {
            (0, HiggsingCase::DistinctEigen(lo, hi)) => {
                ensure(lo < hi && r.components.len() == 2 && r.components.iter().all(|c| c.rank == 1), || format!("{:?}", r))?;
                ensure(r.kernel_ideal_gen == &v_minus(lo) * &v_minus(hi), || format!("kernel ideal {}", r.kernel_ideal_gen))?;
                for c in &r.components {
                    let v = &c.basis[0];
                    let img = core(shifted(&c.eigenvalue).apply(v))?;
                    ensure(img.iter().all(MultiPoly::is_zero), || "eigenvector fails".into())?;
                    ensure(saturated(v), || format!("{:?} is not saturated", v))?;
                }
                ensure(!r.filtration_flag, || "flag".into())?;
            }
            (1, HiggsingCase::RepeatedSemisimple(x)) => {
                ensure(*x == nu && r.kernel_ideal_gen == v_minus(&nu) && !r.filtration_flag, || format!("{:?}", r))?;
                ensure(r.components.len() == 1 && r.components[0].rank == 2, || format!("{:?}", r))?;
            }
            (2, HiggsingCase::RepeatedNilpotent(x)) => {
                let sq = &v_minus(&nu) * &v_minus(&nu);
                ensure(*x == nu && r.kernel_ideal_gen == sq && r.filtration_flag, || format!("{:?}", r))?;
                ensure(r.components.len() == 1 && r.components[0].rank == 1, || format!("{:?}", r))?;
            }
            _ => return Err(format!("instance {} (kind {}) classified as {}", inst, kind, r.case_tag.tag())),
        }
        counts[kind] += 1;
    }
    Ok(format!("grid of 30: {} distinct, {} semisimple, {} nilpotent", counts[0], counts[1], counts[2]))
}

/// Integer entries with content 1 in every z-coefficient jointly.
fn saturated(v: &[MultiPoly]) -> bool {
    let mut gcd = num_bigint::BigInt::zero();
    for p in v {
        for (_, c) in p.terms() {
            if !c.is_integer() {
                return false;
            }
            gcd = num_integer::Integer::gcd(&gcd, c.numer());
        }
    }
    gcd.is_one() && {
        // no common factor (z - a): the entries share no rational root
        let polys: Vec<azk_core::UniPoly<Rational>> =
            v.iter().map(|p| azk_core::UniPoly::from_multi(p, BASE_VAR).expect("entries in z")).collect();
        let g = polys.iter().fold(azk_core::UniPoly::zero(), |acc, p| acc.gcd(p));
        g.degree() == Some(0)
    }
}

fn c4() -> Outcome {
    let start = Instant::now();
    let mut g = gen::rng(SEED + 4);
    // defining relation at lambda = 1
    for n in 1..=2usize {
        for i in 0..n {
            for j in 0..n {
                let one = LambdaMode::classical();
                let comm = core(WeylElement::d(n, one.clone(), i).commutator(&WeylElement::x(n, one.clone(), j)))?;
                let want = if i == j { WeylElement::one(n, one) } else { WeylElement::zero(n, one) };
                ensure(comm == want, || format!("[d{}, x{}] = {}", i + 1, j + 1, comm))?;
            }
        }
    }
    let nf = core(WeylElement::parse("D*x", LambdaMode::classical(), None))?;
    ensure(nf.to_string() == "x*d + 1", || format!("D*x -> {}", nf))?;

    for _ in 0..200 {
        let n = g.random_range(1..=2);
        let lambda = if g.random_bool(0.5) { q(1) } else { gen::nonzero_int(&mut g, 3) };
        let mode = LambdaMode::Fixed(lambda.clone());
        let a = gen::weyl(&mut g, n, &mode, 3, 4);
        let b = gen::weyl(&mut g, n, &mode, 3, 4);
        let f = gen::test_function(&mut g, n, 5);
        let ab = &a * &b;
        let lhs = oracle_act(&ab, &f, &lambda);
        let rhs = oracle_act(&a, &oracle_act(&b, &f, &lambda), &lambda);
        ensure(lhs == rhs, || format!("({}) * ({}) on {}", a, b, f))?;
        ensure(core(ab.act_on_polynomial(&f))? == lhs, || "act_on_polynomial disagrees with the oracle".into())?;
    }
    for suite in ["weyl-assoc", "weyl-reduce", "weyl-fourier"] {
        let r = run_suite(suite, SEED, 100).map_err(|e| e.to_string())?;
        ensure(r.all_passed(), || format!("{:?}", r))?;
    }
    let took = start.elapsed();
    ensure(took < C4_RUNTIME, || format!("took {:?}", took))?;
    Ok(format!("200 action pairs, 100 each of assoc/reduce/fourier, {:.2?}", took))
}

fn c5() -> Outcome {
    for suite in ["lambda-commute", "lambda-torsion"] {
        let r = run_suite(suite, SEED + 5, 100).map_err(|e| e.to_string())?;
        ensure(r.all_passed(), || format!("{:?}", r))?;
    }
    let mut g = gen::rng(SEED + 5);
    for _ in 0..10 {
        let phi = gen::z_matrix(&mut g, 2, 2);
        let h = core(HiggsPair::single(phi.clone()))?;
        let fam = core(lambda_family(&h))?;
        match core(fam.evaluate(&q(1), 3))? {
            FiberReport::Quantum { monomials, rank, .. } => {
                ensure(monomials == 10 && rank == monomials, || format!("probe rank {} of {} for {:?}", rank, monomials, phi))?
            }
            other => return Err(format!("unexpected fiber {:?}", other)),
        }
        match core(fam.evaluate(&Rational::zero(), 3))? {
            FiberReport::Classical { cover, image_ideal: ideal } => {
                ensure(cover.poly == char2(&phi), || format!("cover {} vs det(v - phi) {}", cover.poly, char2(&phi)))?;
                ensure(ideal == core(image_ideal(&h))?, || "fiber image ideal".into())?;
            }
            other => return Err(format!("unexpected fiber {:?}", other)),
        }
    }
    Ok("100 commuting pairs, 100 torsion samples, probe kernel 0 on 10 fields, classical fiber = cover".into())
}

fn c6() -> Outcome {
    let mut g = gen::rng(SEED + 6);
    for _ in 0..50 {
        let r = g.random_range(1..=3);
        let k = g.random_range(1..=3);
        let h = gen::admissible_pair(&mut g, r, k);
        let m = core(higgs_to_morphism(&h))?;
        ensure(core(morphism_to_higgs(&m))? == h, || format!("round trip changed {:?}", h))?;
    }
    let mut fields: Vec<PolyMatrix> = (0..20).map(|i| gen::z_matrix(&mut g, 1 + i % 3, 1)).collect();
    fields.push(PolyMatrix::scalar(2, &MultiPoly::var(BASE_VAR)));
    fields.push(PolyMatrix::from_ints(&[&[3, 0, 0], &[0, 3, 0], &[0, 0, 5]]));
    fields.push(PolyMatrix::from_fn(2, 2, |i, j| if i == 0 && j == 1 { MultiPoly::var(BASE_VAR) } else { MultiPoly::zero() }));
    let mut forward = 0;
    let mut converse_failures = Vec::new();
    for phi in &fields {
        let h = core(HiggsPair::single(phi.clone()))?;
        let cover = core(spectral_cover(&h))?;
        let ideal = core(image_ideal(&h))?;
        let (quo, rem) = divide_in_v(&cover.poly, &ideal);
        ensure(rem.is_zero() && quo.is_some(), || format!("{} does not divide {}", ideal, cover.poly))?;
        let squarefree = squarefree_oracle(&cover.poly);
        ensure(squarefree == cover.reduced_flag, || format!("reduced flag of {}", cover.poly))?;
        if squarefree {
            ensure(ideal == cover.poly, || format!("squarefree {} but image {}", cover.poly, ideal))?;
            forward += 1;
        } else if ideal == cover.poly {
            converse_failures.push(format!("{} (field {:?})", cover.poly, crate_matrix(phi)));
        }
    }
    let summary = format!("50 round trips, divisibility on {} fields, squarefree => equal on {}", fields.len(), forward);
    if converse_failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!(
            "{}; equality without squarefreeness for {}",
            summary,
            converse_failures.join(", ")
        ))
    }
}

fn crate_matrix(m: &PolyMatrix) -> Vec<Vec<String>> {
    azk_core::parse::matrix_strings(m)
}

/// Division in Q(z)[v] of monic polynomials: since both are monic in `v`
/// with coefficients in Q[z], long division stays in Q[z][v].
fn divide_in_v(num: &MultiPoly, den: &MultiPoly) -> (Option<MultiPoly>, MultiPoly) {
    let v = MultiPoly::var("v");
    let mut rem = num.clone();
    let mut quo = MultiPoly::zero();
    let dd = den.degree_in("v").unwrap_or(0);
    let lead = den.coefficients_in("v")[dd as usize].clone();
    if !lead.is_one() {
        return (None, rem);
    }
    while let Some(rd) = rem.degree_in("v").filter(|&d| d >= dd && !rem.is_zero()) {
        let c = rem.coefficients_in("v")[rd as usize].clone();
        let t = &c * &v.pow(rd - dd);
        quo = &quo + &t;
        rem = &rem - &(&t * den);
    }
    (Some(quo), rem)
}

/// Squarefree test on a generic specialization `z = t` for several `t`:
/// the discriminant over Q(z) vanishes iff it vanishes at all sampled points
/// beyond its degree.
fn squarefree_oracle(p: &MultiPoly) -> bool {
    let deg_z = p.degree_in(BASE_VAR).unwrap_or(0) as i64;
    let deg_v = p.degree_in("v").unwrap_or(0) as i64;
    // discriminant degree in z is at most (2 deg_v - 2) deg_z
    let samples = (2 * deg_v.max(1)) * deg_z.max(1) + 2;
    (0..samples).any(|t| {
        let s = p.eval(BASE_VAR, &q(t + 7));
        let u = azk_core::UniPoly::from_multi(&s, "v").expect("univariate after evaluation");
        u.gcd(&u.derivative()).degree() == Some(0)
    })
}

/// Additive coboundary on exponent arrays for mu_n.
fn delta_exp(k: usize, n: u32, b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; k * k * k];
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let v = b[j * k + l] as i64 - b[i * k + l] as i64 + b[i * k + j] as i64;
                out[(i * k + j) * k + l] = v.rem_euclid(n as i64) as u32;
            }
        }
    }
    out
}

fn delta2_exp(k: usize, n: u32, a: &[u32]) -> bool {
    let at = |i: usize, j: usize, l: usize| a[(i * k + j) * k + l] as i64;
    (0..k).all(|i| {
        (0..k).all(|j| {
            (0..k).all(|l| (0..k).all(|m| (at(j, l, m) - at(i, l, m) + at(i, j, m) - at(i, j, l)).rem_euclid(n as i64) == 0))
        })
    })
}

fn c7() -> Outcome {
    let mut g = gen::rng(SEED + 7);
    for _ in 0..500 {
        let k = g.random_range(1..=4);
        let n = g.random_range(2..=6u32);
        let exps: Vec<u32> = (0..k * k).map(|_| g.random_range(0..n)).collect();
        let nerve = CoverNerve::full(k).map_err(|e| e.to_string())?;
        let b = azk_core::twisted::Cochain1::from_fn(UnitGroup::Mu(n), &nerve, |i, j| Unit::Root(exps[i * k + j]))
            .map_err(|e| e.to_string())?;
        let a = coboundary(&b);
        let want = delta_exp(k, n, &exps);
        let lib: Vec<u32> = (0..k * k * k)
            .map(|t| match a.get(t / (k * k), (t / k) % k, t % k) {
                Unit::Root(e) => *e,
                other => panic!("mu_n value expected, got {}", other),
            })
            .collect();
        ensure(lib == want, || format!("coboundary of {:?}", exps))?;
        ensure(delta2_exp(k, n, &want) && check_2cocycle(&a).is_none(), || format!("d d != 1 for {:?}", exps))?;
    }
    for suite in ["gluing", "azumaya"] {
        let r = run_suite(suite, SEED + 7, 100).map_err(|e| e.to_string())?;
        ensure(r.all_passed(), || format!("{:?}", r))?;
    }
    let mut replays = 0;
    for n in [2u32, 3, 4] {
        let r = run_suite("coboundary-replay", SEED + n as u64, 40).map_err(|e| e.to_string())?;
        ensure(r.all_passed(), || format!("{:?}", r))?;
        replays += r.passed;
        // brute force on two indices: every 2-cochain, decision against search
        let nerve = CoverNerve::full(2).map_err(|e| e.to_string())?;
        for code in 0..(n as usize).pow(8).min(600) {
            let digits: Vec<u32> = (0..8).map(|p| ((code / (n as usize).pow(p)) % n as usize) as u32).collect();
            let a = UnitCochain2::from_fn(UnitGroup::Mu(n), &nerve, |i, j, l| Unit::Root(digits[(i * 2 + j) * 2 + l]))
                .map_err(|e| e.to_string())?;
            let decided = core(is_coboundary(&a))?;
            let searched = (0..(n as usize).pow(4)).any(|bc| {
                let bd: Vec<u32> = (0..4).map(|p| ((bc / (n as usize).pow(p)) % n as usize) as u32).collect();
                delta_exp(2, n, &bd) == digits
            });
            ensure(decided.is_some() == searched, || format!("decision on {:?} in mu_{}", digits, n))?;
            if let Some(w) = decided {
                ensure(coboundary(&w).agrees_with(&a), || "witness does not replay".into())?;
                replays += 1;
            }
        }
        let face = face_cocycle(n, 1);
        ensure(check_2cocycle(&face).is_none(), || "face cochain is not a cocycle".into())?;
        ensure(core(is_coboundary(&face))?.is_none(), || format!("face class trivial in mu_{}", n))?;
        ensure(check_2cocycle(&core(refine(&face, &[3, 1, 2, 0, 1]))?).is_none(), || "refinement".into())?;
    }
    Ok(format!("500 dd checks, 100 gluing and 100 End(E) trials, {} witness replays in mu_2..mu_4", replays))
}

fn c8() -> Outcome {
    let m = MultiPoly::var(azk_core::twisted::HILBERT_VAR);
    for d in -3..=3i64 {
        let h = core(hilbert_poly(&SheafOnP1 { summands: vec![d], torsion_length: 0 }, 1, &[0]))?;
        let want = &m + &MultiPoly::int(d + 1);
        ensure(h == want, || format!("O({}) gives {}", d, h))?;
        let text = if d + 1 == 0 { "m".to_string() } else if d + 1 > 0 { format!("m + {}", d + 1) } else { format!("m - {}", -(d + 1)) };
        ensure(h.to_string() == text, || format!("rendered {} vs {}", h, text))?;
    }
    let mut g = gen::rng(SEED + 8);
    for _ in 0..50 {
        let s = g.random_range(0..=3);
        let f = SheafOnP1 {
            summands: (0..s).map(|_| g.random_range(-5..=5)).collect(),
            torsion_length: if s == 0 { g.random_range(1..=4) } else { g.random_range(0..=4) },
        };
        let gs: Vec<i64> = (0..g.random_range(1..=3)).map(|_| g.random_range(-3..=3)).collect();
        let h = core(hilbert_poly(&f, gs.len(), &gs))?;
        let dim = if f.summands.is_empty() { 0 } else { 1 };
        ensure(h.total_degree() == Some(dim), || format!("degree of {} for {:?}", h, f))?;
        // Euler characteristic oracle: sum over pairs of (m + a - b + 1) plus length times rank
        let mut want = MultiPoly::int(f.torsion_length as i64 * gs.len() as i64);
        for a in &f.summands {
            for b in &gs {
                want = &want + &(&m + &MultiPoly::int(a - b + 1));
            }
        }
        ensure(h == want, || format!("{} vs {}", h, want))?;
    }
    for cfg in 0..20 {
        let total = g.random_range(1..=6u32);
        let free: Vec<i64> = (0..cfg % 3).map(|_| g.random_range(-2..=2)).collect();
        let mut polys = Vec::new();
        for _ in 0..4 {
            let pts = support_configuration(&mut g, total);
            ensure(pts.iter().map(|(_, m)| m).sum::<u32>() == total, || "configuration".into())?;
            let f = SheafOnP1 { summands: free.clone(), torsion_length: torsion_length(&pts) };
            polys.push(core(hilbert_poly(&f, 1, &[0]))?);
        }
        ensure(polys.windows(2).all(|w| w[0] == w[1]), || format!("family of length {} varies: {:?}", total, polys))?;
        if free.is_empty() {
            ensure(polys[0] == MultiPoly::int(total as i64), || format!("{} != {}", polys[0], total))?;
        }
    }
    Ok("O(d) for d in [-3, 3], 50 degree checks, 20 flat families".into())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_azk"))
}

fn golden(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn c9() -> Outcome {
    let run = |args: &[&str]| -> Result<(i32, Vec<u8>), String> {
        let out = bin().args(args).env("AZK_COLOR", "never").output().map_err(|e| e.to_string())?;
        Ok((out.status.code().unwrap_or(-1), out.stdout))
    };
    for (args, file) in [
        (&["demo", "example-5-1-11", "--bhat", "1,0,0,2"][..], "example-5-1-11.json"),
        (&["--text", "demo", "example-5-1-11", "--bhat", "1,0,0,2"][..], "example-5-1-11.txt"),
        (&["demo", "example-5-1-11", "--bhat", "2,0,0,2"][..], "example-5-1-11-semisimple.json"),
        (&["demo", "example-5-1-11", "--bhat", "1,1,0,1"][..], "example-5-1-11-nilpotent.json"),
    ] {
        let (c1, o1) = run(args)?;
        let (c2, o2) = run(args)?;
        ensure(c1 == 0 && c2 == 0, || format!("{:?} exited {} / {}", args, c1, c2))?;
        ensure(o1 == o2, || format!("{:?} differs between runs", args))?;
        let want = std::fs::read(golden(file)).map_err(|e| format!("{}: {}", file, e))?;
        ensure(o1 == want, || format!("{:?} differs from golden {}", args, file))?;
        ensure(!o1.contains(&b'\r'), || "carriage return in output".into())?;
    }
    let path = |f: &str| golden(f).display().to_string();
    let (ok, _) = run(&["coc", "check", &path("inputs/coboundary.json")])?;
    let (bad, out) = run(&["coc", "check", &path("inputs/perturbed.json")])?;
    let (malformed, _) = run(&["coc", "check", &path("inputs/malformed.json")])?;
    ensure(ok == 0 && bad == 2 && malformed == 1, || format!("exit codes {} {} {}", ok, bad, malformed))?;
    let report: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure(report["status"] == "violation" && report["data"]["violation"]["tuple"].is_array(), || {
        "violation tuple missing".into()
    })?;
    Ok("4 golden outputs byte-identical across runs, exit codes 0/2/1".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "closed-form commuting partners and solver span", c1),
        (2, "degree-0 term and characteristic polynomial", c2),
        (3, "higgsing trichotomy", c3),
        (4, "weyl engine", c4),
        (5, "lambda-family dichotomy", c5),
        (6, "spectral correspondence", c6),
        (7, "cocycle suites", c7),
        (8, "hilbert polynomials", c8),
        (9, "cli determinism", c9),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let red = KNOWN_RED.contains(&id);
        match &result {
            Ok(detail) => println!("criterion {} [{}]: PASS ({})", id, name, detail),
            Err(detail) if red => println!("criterion {} [{}]: FAIL, known ({})", id, name, detail),
            Err(detail) => println!("criterion {} [{}]: FAIL ({})", id, name, detail),
        }
        if result.is_ok() == red {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {:?}", unexpected);
        std::process::exit(1);
    }
}
