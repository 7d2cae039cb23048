//! Seeded random instances shared by the property suites and the tests.

use azk_core::diffop::BASE_VAR;
use azk_core::spectral::HiggsPair;
use azk_core::twisted::{Cochain1, CoverNerve, Unit, UnitGroup};
use azk_core::{LambdaMode, MultiPoly, PolyMatrix, Rational, WeylElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Gen = ChaCha8Rng;

pub fn rng(seed: u64) -> Gen {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(g: &mut Gen, lo: i64, hi: i64) -> Rational {
    Rational::from_integer(g.random_range(lo..=hi).into())
}

pub fn nonzero_int(g: &mut Gen, bound: i64) -> Rational {
    loop {
        let v = g.random_range(-bound..=bound);
        if v != 0 {
            return Rational::from_integer(v.into());
        }
    }
}

/// Small rational with numerator in `[-bound, bound]` and denominator in `1..=3`.
pub fn rational(g: &mut Gen, bound: i64) -> Rational {
    Rational::new(g.random_range(-bound..=bound).into(), g.random_range(1..=3i64).into())
}

/// Random polynomial in `vars` of total degree at most `max_deg`.
pub fn poly(g: &mut Gen, vars: &[&str], max_deg: u32, max_terms: usize) -> MultiPoly {
    let terms = g.random_range(0..=max_terms);
    let mut acc = MultiPoly::zero();
    for _ in 0..terms {
        let mut left = g.random_range(0..=max_deg);
        let mut powers = Vec::with_capacity(vars.len());
        for v in vars {
            let e = g.random_range(0..=left);
            left -= e;
            powers.push((*v, e));
        }
        acc = &acc + &MultiPoly::term(int(g, -4, 4), &powers);
    }
    acc
}

pub fn z_poly(g: &mut Gen, max_deg: u32) -> MultiPoly {
    poly(g, &[BASE_VAR], max_deg, max_deg as usize + 1)
}

pub fn z_matrix(g: &mut Gen, r: usize, max_deg: u32) -> PolyMatrix {
    let entries = (0..r * r).map(|_| z_poly(g, max_deg)).collect();
    PolyMatrix::new(r, r, entries).expect("square shape")
}

pub fn rational_matrix(g: &mut Gen, r: usize, bound: i64) -> PolyMatrix {
    let entries = (0..r * r).map(|_| MultiPoly::constant(int(g, -bound, bound))).collect();
    PolyMatrix::new(r, r, entries).expect("square shape")
}

/// Constant `[[a4 + 2ts, t^2], [-s^2, a4]]`, whose discriminant vanishes.
pub fn disc_zero_a(g: &mut Gen) -> PolyMatrix {
    let t = g.random_range(-3..=3i64);
    let s = g.random_range(-3..=3i64);
    let a4 = g.random_range(-3..=3i64);
    PolyMatrix::from_ints(&[&[a4 + 2 * t * s, t * t], &[-s * s, a4]])
}

pub fn bhat(g: &mut Gen, bound: i64) -> [Rational; 4] {
    [rational(g, bound), rational(g, bound), rational(g, bound), rational(g, bound)]
}

/// Random Weyl element with bidegree at most `max_bideg`. Coefficients
/// involve `lambda` only in formal mode.
pub fn weyl(g: &mut Gen, n: usize, mode: &LambdaMode, max_bideg: u32, max_terms: usize) -> WeylElement {
    let terms = g.random_range(1..=max_terms);
    let mut acc = WeylElement::zero(n, mode.clone());
    for _ in 0..terms {
        let mut left = g.random_range(0..=max_bideg);
        let mut a = vec![0u32; n];
        let mut b = vec![0u32; n];
        for e in a.iter_mut().chain(b.iter_mut()) {
            *e = g.random_range(0..=left);
            left -= *e;
        }
        let mut coeff = MultiPoly::constant(nonzero_int(g, 4));
        if *mode == LambdaMode::Formal && g.random_bool(0.5) {
            coeff = &coeff + &MultiPoly::term(int(g, -2, 2), &[(azk_core::weyl::LAMBDA, g.random_range(1..=2))]);
        }
        acc = &acc + &WeylElement::monomial(n, mode.clone(), &a, &b, coeff);
    }
    acc
}

pub fn nonzero_weyl(g: &mut Gen, n: usize, mode: &LambdaMode, max_bideg: u32, max_terms: usize) -> WeylElement {
    loop {
        let d = weyl(g, n, mode, max_bideg, max_terms);
        if !d.is_zero() {
            return d;
        }
    }
}

pub fn position_vars(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["x".into()]
    } else {
        (1..=n).map(|i| format!("x{}", i)).collect()
    }
}

/// Polynomial in the position variables acted on by Weyl elements.
pub fn test_function(g: &mut Gen, n: usize, max_deg: u32) -> MultiPoly {
    let names = position_vars(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    poly(g, &refs, max_deg, 4)
}

/// Random nonzero, nonunit mode for Weyl suites.
pub fn weyl_mode(g: &mut Gen) -> LambdaMode {
    match g.random_range(0..3) {
        0 => LambdaMode::Formal,
        1 => LambdaMode::classical(),
        _ => LambdaMode::Fixed(nonzero_int(g, 3)),
    }
}

/// Admissible pair: `k` fields, each a polynomial in one random base matrix.
pub fn admissible_pair(g: &mut Gen, r: usize, k: usize) -> HiggsPair {
    let base = z_matrix(g, r, 1);
    let phis = (0..k)
        .map(|_| {
            let p = poly(g, &["v", BASE_VAR], 2, 3);
            base.eval_poly(&p, "v").expect("square base")
        })
        .collect();
    HiggsPair::new(r, phis).expect("consistent ranks")
}

pub fn mu_cochain1(g: &mut Gen, n: u32, nerve: &CoverNerve) -> Cochain1 {
    let k = nerve.index_count();
    let vals: Vec<u32> = (0..k * k).map(|_| g.random_range(0..n)).collect();
    Cochain1::from_fn(UnitGroup::Mu(n), nerve, |i, j| Unit::Root(vals[i * k + j])).expect("reduced values")
}

pub fn qstar_cochain1(g: &mut Gen, nerve: &CoverNerve) -> Cochain1 {
    let k = nerve.index_count();
    let vals: Vec<Rational> = (0..k * k)
        .map(|_| Rational::new(nonzero_int(g, 6).to_integer(), g.random_range(1..=5i64).into()))
        .collect();
    Cochain1::from_fn(UnitGroup::QStar, nerve, |i, j| Unit::Scalar(vals[i * k + j].clone())).expect("nonzero values")
}
