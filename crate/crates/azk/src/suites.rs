//! Seeded invariant suites. Each sample either passes or yields a
//! counterexample description; runs are deterministic in `(seed, count)`.

use azk_core::algebra::divides_over_fraction_field;
use azk_core::diffop::{
    assemble_from_basis, commutation_constraint, default_deg_bound, degree_zero_term, in_rational_span, paper_basis,
    solve_commutation, BASE_VAR,
};
use azk_core::spectral::{higgs_to_morphism, image_ideal, morphism_to_higgs, spectral_cover};
use azk_core::twisted::{
    check_2cocycle, coboundary, endomorphism_azumaya, hilbert_poly, is_coboundary, twisted_gluing_check,
    CoverNerve, SheafOnP1, TwistedBundle, Unit, UnitCochain2, UnitGroup,
};
use azk_core::{LambdaMode, MultiPoly, PolyMatrix, Rational, UniPoly};
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::gen::{self, Gen};

type Sample = fn(&mut Gen) -> Result<(), String>;

pub const SUITES: &[(&str, Sample)] = &[
    ("weyl-assoc", weyl_assoc),
    ("weyl-action", weyl_action),
    ("weyl-fourier", weyl_fourier),
    ("weyl-reduce", weyl_reduce),
    ("lambda-commute", lambda_commute),
    ("lambda-torsion", lambda_torsion),
    ("commutation-span", commutation_span),
    ("char-poly", char_poly),
    ("spectral-roundtrip", spectral_roundtrip),
    ("spectral-image", spectral_image),
    ("cocycle-dd", cocycle_dd),
    ("coboundary-replay", coboundary_replay),
    ("gluing", gluing),
    ("azumaya", azumaya),
    ("hilbert-degree", hilbert_degree),
    ("hilbert-flat", hilbert_flat),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub failed: usize,
    /// `(sample index, description)` of the first failure.
    pub first_counterexample: Option<(usize, String)>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "count": self.count,
            "passed": self.passed,
            "failed": self.failed,
            "first_counterexample": self.first_counterexample.as_ref().map(|(i, m)| json!({"sample": i, "detail": m})),
        })
    }
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

pub fn run_suite(name: &str, seed: u64, count: usize) -> Result<SuiteReport, CliError> {
    let (_, sample) = SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CliError::UnknownSuite(name.into()))?;
    let mut g = gen::rng(seed);
    let mut report = SuiteReport {
        suite: name.into(),
        seed,
        count,
        passed: 0,
        failed: 0,
        first_counterexample: None,
    };
    for i in 0..count {
        match sample(&mut g) {
            Ok(()) => report.passed += 1,
            Err(msg) => {
                report.failed += 1;
                report.first_counterexample.get_or_insert((i, msg));
            }
        }
    }
    Ok(report)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: azk_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{}: {}", e.code(), e))
}

fn weyl_assoc(g: &mut Gen) -> Result<(), String> {
    let n = g.random_range(1..=2);
    let mode = gen::weyl_mode(g);
    let a = gen::weyl(g, n, &mode, 3, 4);
    let b = gen::weyl(g, n, &mode, 3, 4);
    let c = gen::weyl(g, n, &mode, 3, 4);
    check(&(&a * &b) * &c == &a * &(&b * &c), || format!("({})({})({})", a, b, c))
}

fn weyl_action(g: &mut Gen) -> Result<(), String> {
    let n = g.random_range(1..=2);
    let mode = LambdaMode::Fixed(gen::nonzero_int(g, 3));
    let a = gen::weyl(g, n, &mode, 3, 4);
    let b = gen::weyl(g, n, &mode, 3, 4);
    let f = gen::test_function(g, n, 5);
    let lhs = core((&a * &b).act_on_polynomial(&f))?;
    let rhs = core(b.act_on_polynomial(&f).and_then(|bf| a.act_on_polynomial(&bf)))?;
    check(lhs == rhs, || format!("a = {}, b = {}, f = {}", a, b, f))
}

fn weyl_fourier(g: &mut Gen) -> Result<(), String> {
    let n = g.random_range(1..=2);
    let mode = gen::weyl_mode(g);
    let a = gen::weyl(g, n, &mode, 3, 4);
    let b = gen::weyl(g, n, &mode, 3, 4);
    check((&a * &b).fourier() == &a.fourier() * &b.fourier(), || format!("F({} * {})", a, b))?;
    check(a.fourier().fourier().fourier().fourier() == a, || format!("F^4({}) != id", a))
}

fn weyl_reduce(g: &mut Gen) -> Result<(), String> {
    let n = g.random_range(1..=2);
    let mode = gen::weyl_mode(g);
    let d = gen::nonzero_weyl(g, n, &mode, 3, 4);
    let cert = core(d.reduce_to_scalar())?;
    check(!cert.final_scalar.is_zero() && cert.verify(&d), || format!("certificate for {} does not replay", d))
}

fn lambda_commute(g: &mut Gen) -> Result<(), String> {
    let n = g.random_range(1..=2);
    let zero = Rational::zero();
    let a = core(gen::weyl(g, n, &LambdaMode::Formal, 3, 4).specialize_lambda(&zero))?;
    let b = core(gen::weyl(g, n, &LambdaMode::Formal, 3, 4).specialize_lambda(&zero))?;
    check(&a * &b == &b * &a, || format!("[{}, {}] != 0 at lambda = 0", a, b))
}

fn lambda_torsion(g: &mut Gen) -> Result<(), String> {
    let n = g.random_range(1..=2);
    let d = gen::nonzero_weyl(g, n, &LambdaMode::Formal, 3, 4);
    let mut c = gen::poly(g, &[azk_core::weyl::LAMBDA], 3, 3);
    if c.is_zero() {
        c = MultiPoly::var(azk_core::weyl::LAMBDA);
    }
    check(!d.scale(&c).is_zero(), || format!("({}) * ({}) = 0", c, d))
}

fn commutation_span(g: &mut Gen) -> Result<(), String> {
    let a = gen::disc_zero_a(g);
    let lam = gen::nonzero_int(g, 3);
    let basis = core(paper_basis(&a, &lam))?;
    for b in &basis {
        let c = core(commutation_constraint(&a, b, &MultiPoly::constant(lam.clone())))?;
        check(c.is_zero(), || format!("basis element {:?} fails the constraint for A = {:?}", b, a))?;
    }
    let space = core(solve_commutation(&a, &lam, default_deg_bound(&a)))?;
    check(space.len() == 4, || format!("solution space has dimension {} for A = {:?}", space.len(), a))?;
    check(
        basis.iter().all(|b| in_rational_span(&space, b)) && space.iter().all(|b| in_rational_span(&basis, b)),
        || format!("spans differ for A = {:?}", a),
    )
}

fn char_poly(g: &mut Gen) -> Result<(), String> {
    let a = gen::disc_zero_a(g);
    let lam = gen::nonzero_int(g, 3);
    let bhat = gen::bhat(g, 6);
    let b = core(assemble_from_basis(&a, &bhat, &lam))?;
    let b0 = degree_zero_term(&b);
    let expected = PolyMatrix::from_fn(2, 2, |i, j| MultiPoly::constant(bhat[2 * i + j].clone()));
    check(b0 == expected, || format!("B(0) = {:?}", b0))?;
    let chi = core(b.char_poly("v"))?;
    check(!chi.uses(BASE_VAR) && chi == core(b0.char_poly("v"))?, || format!("char poly {} of {:?}", chi, b))
}

fn spectral_roundtrip(g: &mut Gen) -> Result<(), String> {
    let r = g.random_range(1..=3);
    let k = g.random_range(1..=3);
    let h = gen::admissible_pair(g, r, k);
    let m = core(higgs_to_morphism(&h))?;
    let back = core(morphism_to_higgs(&m))?;
    check(back == h, || format!("round trip changed {:?}", h))
}

fn spectral_image(g: &mut Gen) -> Result<(), String> {
    let r = g.random_range(1..=3);
    let h = if g.random_bool(0.3) {
        // repeated eigenvalue: polynomial in a nilpotent or scalar base
        let base = if g.random_bool(0.5) {
            PolyMatrix::from_fn(r, r, |i, j| if j == i + 1 { MultiPoly::var(BASE_VAR) } else { MultiPoly::zero() })
        } else {
            PolyMatrix::scalar(r, &gen::z_poly(g, 1))
        };
        core(azk_core::spectral::HiggsPair::single(base))?
    } else {
        core(azk_core::spectral::HiggsPair::single(gen::z_matrix(g, r, 1)))?
    };
    let cover = core(spectral_cover(&h))?;
    let ideal = core(image_ideal(&h))?;
    check(core(divides_over_fraction_field(&ideal, &cover.poly, "v"))?, || {
        format!("{} does not divide {}", ideal, cover.poly)
    })?;
    check(!cover.reduced_flag || ideal == cover.poly, || {
        format!("squarefree cover {} but image {}", cover.poly, ideal)
    })
}

fn cocycle_dd(g: &mut Gen) -> Result<(), String> {
    let k = g.random_range(1..=4);
    let nerve = CoverNerve::full(k).map_err(|e| e.to_string())?;
    let b = if g.random_bool(0.5) {
        let n = g.random_range(2..=6);
        gen::mu_cochain1(g, n, &nerve)
    } else {
        gen::qstar_cochain1(g, &nerve)
    };
    let a = coboundary(&b);
    check(check_2cocycle(&a).is_none(), || format!("d(d b) != 1 for b = {:?}", b))
}

fn coboundary_replay(g: &mut Gen) -> Result<(), String> {
    let n = g.random_range(2..=4);
    let k = g.random_range(1..=4);
    let nerve = CoverNerve::full(k).map_err(|e| e.to_string())?;
    let a = coboundary(&gen::mu_cochain1(g, n, &nerve));
    let w = core(is_coboundary(&a))?.ok_or_else(|| format!("coboundary {:?} not recognised", a))?;
    check(coboundary(&w).agrees_with(&a), || format!("witness {:?} does not replay", w))
}

/// `beta_ii = 1`, `beta_ji = beta_ij^-1`.
fn antisymmetric_scalars(g: &mut Gen, k: usize) -> Vec<Rational> {
    let mut t = vec![Rational::one(); k * k];
    for i in 0..k {
        for j in i + 1..k {
            let v = Rational::new(gen::nonzero_int(g, 5).to_integer(), g.random_range(1..=4i64).into());
            t[j * k + i] = v.recip();
            t[i * k + j] = v;
        }
    }
    t
}

fn scalar_bundle(k: usize, r: usize, beta: &[Rational]) -> azk_core::Result<TwistedBundle> {
    let nerve = CoverNerve::full(k)?;
    let c = azk_core::twisted::Cochain1::from_fn(UnitGroup::QStar, &nerve, |i, j| Unit::Scalar(beta[i * k + j].clone()))?;
    let twist = coboundary(&c);
    TwistedBundle::new(r, twist, |i, j| Some(PolyMatrix::scalar(r, &MultiPoly::constant(beta[i * k + j].clone()))))
}

fn gluing(g: &mut Gen) -> Result<(), String> {
    let k = g.random_range(2..=4);
    let r = g.random_range(1..=3);
    let beta = antisymmetric_scalars(g, k);
    let e = core(scalar_bundle(k, r, &beta))?;
    check(core(twisted_gluing_check(&e))?.is_none(), || format!("scalar construction rejected: {:?}", beta))?;

    let (pi, pj) = (g.random_range(0..k), g.random_range(0..k));
    let (ea, eb) = (g.random_range(0..r), g.random_range(0..r));
    let delta = MultiPoly::constant(gen::nonzero_int(g, 3));
    let bad = core(TwistedBundle::new(r, e.twist().clone(), |i, j| {
        let mut m = e.gluing(i, j).cloned()?;
        if (i, j) == (pi, pj) {
            let entry = m.get(ea, eb) + &delta;
            m.set(ea, eb, entry);
        }
        Some(m)
    }))?;
    check(core(twisted_gluing_check(&bad))?.is_some(), || {
        format!("perturbed entry ({}, {}) of g_{}{} accepted", ea, eb, pi, pj)
    })
}

fn azumaya(g: &mut Gen) -> Result<(), String> {
    let k = g.random_range(1..=3);
    let r = 2;
    let t = antisymmetric_scalars(g, k);
    let shifts: Vec<MultiPoly> = (0..k).map(|_| gen::z_poly(g, 2)).collect();
    let unip = |i: usize, sign: i64| {
        PolyMatrix::from_rows(vec![
            vec![MultiPoly::one(), shifts[i].scale(&Rational::from_integer(sign.into()))],
            vec![MultiPoly::zero(), MultiPoly::one()],
        ])
        .expect("2x2")
    };
    let nerve = core(CoverNerve::full(k))?;
    let twist = core(UnitCochain2::from_fn(UnitGroup::QStar, &nerve, |i, j, l| {
        Unit::Scalar(&(&t[l * k + i] * &t[j * k + l]) * &t[i * k + j])
    }))?;
    let e = core(TwistedBundle::new(r, twist, |i, j| {
        Some(unip(i, 1).checked_mul(&unip(j, -1)).ok()?.scale_rational(&t[i * k + j]))
    }))?;
    check(core(twisted_gluing_check(&e))?.is_none(), || "twisted construction rejected".into())?;
    let end = core(endomorphism_azumaya(&e))?;
    check(end.cocycle_failure.is_none(), || format!("End(E) fails the cocycle condition at {:?}", end.cocycle_failure))
}

fn random_sheaf(g: &mut Gen) -> SheafOnP1 {
    let s = g.random_range(0..=3);
    SheafOnP1 {
        summands: (0..s).map(|_| g.random_range(-4..=4)).collect(),
        torsion_length: g.random_range(0..=3),
    }
}

fn hilbert_degree(g: &mut Gen) -> Result<(), String> {
    let f = random_sheaf(g);
    let gs: Vec<i64> = (0..g.random_range(1..=3)).map(|_| g.random_range(-3..=3)).collect();
    let h = core(hilbert_poly(&f, gs.len(), &gs))?;
    let ok = match f.dimension() {
        None => h.is_zero(),
        Some(d) => h.total_degree() == Some(d),
    };
    check(ok, || format!("hilbert poly {} of {:?}", h, f))
}

/// Length of `O / prod (z - p)^m`, read off the degree of the product.
pub fn torsion_length(points: &[(Rational, u32)]) -> u64 {
    let prod = points.iter().fold(UniPoly::<Rational>::one(), |acc, (p, m)| {
        let lin = UniPoly::from_coeffs(vec![-p.clone(), Rational::one()]);
        (0..*m).fold(acc, |a, _| a.mul(&lin))
    });
    prod.degree().unwrap_or(0) as u64
}

/// Points with multiplicities summing to `total`, at random positions.
pub fn support_configuration(g: &mut Gen, total: u32) -> Vec<(Rational, u32)> {
    let mut left = total;
    let mut out = Vec::new();
    while left > 0 {
        let m = g.random_range(1..=left);
        out.push((gen::rational(g, 9), m));
        left -= m;
    }
    out
}

fn hilbert_flat(g: &mut Gen) -> Result<(), String> {
    let total = g.random_range(1..=5);
    let summands: Vec<i64> = (0..g.random_range(0..=2)).map(|_| g.random_range(-3..=3)).collect();
    let gs = [g.random_range(-2..=2)];
    let mut first: Option<MultiPoly> = None;
    for _ in 0..3 {
        let pts = support_configuration(g, total);
        let f = SheafOnP1 {
            summands: summands.clone(),
            torsion_length: torsion_length(&pts),
        };
        let h = core(hilbert_poly(&f, 1, &gs))?;
        match &first {
            None => first = Some(h),
            Some(h0) => check(*h0 == h, || format!("{} != {} along a length-{} family", h0, h, total))?,
        }
    }
    Ok(())
}
