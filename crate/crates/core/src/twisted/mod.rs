//! Cech-level twisted sheaves on finite covers: unit-valued cochains,
//! cocycle and coboundary tests, twisted gluing data, the untwisted
//! endomorphism bundle, twist bookkeeping for tensor and hom, and Hilbert
//! polynomials of split sheaves on the projective line.

mod bundle;
mod cochain;
mod hilbert;
mod nerve;
mod zmod;

pub use bundle::{endomorphism_azumaya, twisted_gluing_check, AzumayaDescent, GluingViolation, TwistedBundle};
pub use cochain::{
    check_2cocycle, coboundary, refine, twist_matching_check, twist_of_hom, twist_of_tensor, Cochain1,
    CocycleViolation, UnitCochain2,
};
pub use hilbert::{hilbert_poly, morphism_hilbert_poly, SheafOnP1, HILBERT_VAR};
pub use nerve::{CoverNerve, Unit, UnitGroup};
pub use zmod::{is_coboundary, solve_mod};

/// Four open sets whose common intersection is empty while every three of
/// them meet; its nerve is a 2-sphere, so `H^2(mu_n) = Z/n`.
pub fn sphere_nerve() -> CoverNerve {
    CoverNerve::with_empty_faces(4, alloc::vec![[0, 1, 2, 3].into_iter().collect()]).expect("valid nerve")
}

/// Alternating cochain equal to `k` on `(1, 2, 3)`, to `-k` on odd
/// reorderings of it, and trivial elsewhere. On [`sphere_nerve`] it is a
/// cocycle, and for `k != 0 mod n` it is not a coboundary.
pub fn face_cocycle(n: u32, k: u32) -> UnitCochain2 {
    let nerve = sphere_nerve();
    let k = k % n;
    UnitCochain2::from_fn(UnitGroup::Mu(n), &nerve, |i, j, l| {
        let v = match [i, j, l] {
            [1, 2, 3] | [2, 3, 1] | [3, 1, 2] => k,
            [1, 3, 2] | [3, 2, 1] | [2, 1, 3] => (n - k) % n,
            _ => 0,
        };
        Unit::Root(v)
    })
    .expect("values reduced mod n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MultiPoly, PolyMatrix, Rational};
    use crate::parse::parse_poly;
    use alloc::vec;

    fn mu(n: u32) -> UnitGroup {
        UnitGroup::Mu(n)
    }

    fn q(n: i64) -> Unit {
        Unit::Scalar(Rational::from_integer(n.into()))
    }

    #[test]
    fn trivial_and_coboundaries_are_cocycles() {
        let nerve = CoverNerve::full(3).unwrap();
        assert_eq!(check_2cocycle(&UnitCochain2::trivial(mu(3), &nerve)), None);
        let b = Cochain1::from_fn(mu(4), &nerve, |i, j| Unit::Root(((3 * i + j * j) % 4) as u32)).unwrap();
        assert_eq!(check_2cocycle(&coboundary(&b)), None);
        let b = Cochain1::from_fn(UnitGroup::QStar, &nerve, |i, j| q((i + 2 * j + 1) as i64)).unwrap();
        assert_eq!(check_2cocycle(&coboundary(&b)), None);
    }

    #[test]
    fn perturbed_coboundary_is_detected() {
        let nerve = CoverNerve::full(3).unwrap();
        let b = Cochain1::from_fn(mu(3), &nerve, |i, j| Unit::Root(((i + 2 * j) % 3) as u32)).unwrap();
        let mut a = coboundary(&b);
        let Unit::Root(old) = a.get(0, 1, 2).clone() else { unreachable!() };
        a.set(0, 1, 2, Unit::Root((old + 1) % 3)).unwrap();
        let v = check_2cocycle(&a).expect("violation");
        assert!([0, 1, 2].iter().all(|x| v.tuple.contains(x)));
    }

    #[test]
    fn coboundary_examples() {
        let nerve = CoverNerve::full(3).unwrap();
        assert!(coboundary(&Cochain1::trivial(UnitGroup::QStar, &nerve)).is_trivial());
        let c = Cochain1::constant(UnitGroup::QStar, &nerve, q(5)).unwrap();
        let a = coboundary(&c);
        assert!(a.support().all(|[i, j, k]| *a.get(i, j, k) == q(5)));
    }

    #[test]
    fn coboundary_decisions() {
        let nerve = CoverNerve::full(3).unwrap();
        let zero = UnitCochain2::trivial(mu(5), &nerve);
        let w = is_coboundary(&zero).unwrap().expect("trivial class");
        assert_eq!(w, Cochain1::trivial(mu(5), &nerve));

        let b0 = Cochain1::from_fn(mu(6), &nerve, |i, j| Unit::Root(((5 * i + 2 * j + i * j) % 6) as u32)).unwrap();
        let a = coboundary(&b0);
        let w = is_coboundary(&a).unwrap().expect("constructed as a coboundary");
        assert!(coboundary(&w).agrees_with(&a));

        let face = face_cocycle(2, 1);
        assert_eq!(check_2cocycle(&face), None);
        assert_eq!(is_coboundary(&face).unwrap(), None);
        assert!(is_coboundary(&face_cocycle(2, 0)).unwrap().is_some());
        assert_eq!(is_coboundary(&face_cocycle(3, 2)).unwrap(), None);

        let qa = UnitCochain2::trivial(UnitGroup::QStar, &nerve);
        assert_eq!(is_coboundary(&qa), Err(crate::Error::UndecidableGroup));
    }

    #[test]
    fn solve_mod_handles_non_unit_pivots() {
        // 2x = 4 (mod 6), 3y = 3 (mod 6)
        let x = solve_mod(&[vec![2, 0], vec![0, 3]], 2, &[4, 3], 6).unwrap();
        assert_eq!((2 * x[0]) % 6, 4);
        assert_eq!((3 * x[1]) % 6, 3);
        assert_eq!(solve_mod(&[vec![2]], 1, &[1], 4), None);
        assert_eq!(solve_mod(&[vec![4, 6]], 2, &[2], 10).map(|x| (4 * x[0] + 6 * x[1]) % 10), Some(2));
    }

    fn scalar_bundle(b: &Cochain1) -> TwistedBundle {
        let a = coboundary(b);
        TwistedBundle::new(2, a, |i, j| {
            let s = b.group().as_rational(b.get(i, j)).unwrap();
            Some(PolyMatrix::scalar(2, &MultiPoly::constant(s)))
        })
        .unwrap()
    }

    #[test]
    fn gluing_checks() {
        let nerve = CoverNerve::full(3).unwrap();
        // normalized scalar cochain with b_ji = b_ij^-1
        let b = Cochain1::from_fn(UnitGroup::QStar, &nerve, |i, j| {
            if i == j {
                q(1)
            } else if i < j {
                q((i + j + 1) as i64)
            } else {
                Unit::Scalar(Rational::new(1.into(), ((i + j + 1) as i64).into()))
            }
        })
        .unwrap();
        let e = scalar_bundle(&b);
        assert_eq!(twisted_gluing_check(&e).unwrap(), None);

        let untwisted = UnitCochain2::trivial(UnitGroup::QStar, &nerve);
        let t = PolyMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let t_inv = PolyMatrix::from_ints(&[&[1, -1], &[0, 1]]);
        let cocycle = |i: usize, j: usize| -> PolyMatrix {
            // g_ij = T^(j - i)
            let k = j as i64 - i as i64;
            let base = if k >= 0 { &t } else { &t_inv };
            base.pow(k.unsigned_abs() as u32).unwrap()
        };
        let e = TwistedBundle::new(2, untwisted.clone(), |i, j| Some(cocycle(i, j))).unwrap();
        assert_eq!(twisted_gluing_check(&e).unwrap(), None);

        let e = TwistedBundle::new(2, untwisted, |i, j| {
            let mut g = cocycle(i, j);
            if (i, j) == (1, 2) {
                g.set(0, 0, MultiPoly::int(2));
            }
            Some(g)
        })
        .unwrap();
        assert!(twisted_gluing_check(&e).unwrap().is_some());
    }

    #[test]
    fn gluing_with_sign_twist() {
        let nerve = CoverNerve::full(2).unwrap();
        let b = Cochain1::from_fn(mu(2), &nerve, |i, j| Unit::Root(if i != j { 1 } else { 0 })).unwrap();
        let e = scalar_bundle(&b);
        assert_eq!(twisted_gluing_check(&e).unwrap(), None);
        let bad = UnitCochain2::from_fn(mu(3), &nerve, |_, _, _| Unit::Root(1)).unwrap();
        let e = TwistedBundle::new(1, bad, |_, _| Some(PolyMatrix::identity(1))).unwrap();
        assert!(twisted_gluing_check(&e).is_err());
    }

    #[test]
    fn twist_arithmetic() {
        let nerve = CoverNerve::full(2).unwrap();
        let a = UnitCochain2::from_fn(mu(6), &nerve, |i, j, k| Unit::Root(((i + j + k) % 6) as u32)).unwrap();
        assert!(twist_of_hom(&a, &a).unwrap().is_trivial());
        assert!(twist_of_tensor(&a, &a.inverse()).unwrap().is_trivial());
        let two = UnitCochain2::from_fn(mu(6), &nerve, |_, _, _| Unit::Root(2)).unwrap();
        let three = UnitCochain2::from_fn(mu(6), &nerve, |_, _, _| Unit::Root(3)).unwrap();
        assert_eq!(*twist_of_tensor(&two, &three).unwrap().get(0, 1, 0), Unit::Root(5));
        let other = UnitCochain2::trivial(mu(6), &CoverNerve::full(3).unwrap());
        assert!(matches!(twist_of_tensor(&a, &other), Err(crate::Error::CoverMismatch(_))));
    }

    #[test]
    fn azumaya_descent() {
        let nerve = CoverNerve::full(3).unwrap();
        let b = Cochain1::from_fn(UnitGroup::QStar, &nerve, |i, j| {
            if i == j {
                q(1)
            } else if i < j {
                q(3)
            } else {
                Unit::Scalar(Rational::new(1.into(), 3.into()))
            }
        })
        .unwrap();
        let e = scalar_bundle(&b);
        assert!(!e.twist().is_trivial());
        let d = endomorphism_azumaya(&e).unwrap();
        assert_eq!(d.cocycle_failure, None);
        assert_eq!(d.gluing(0, 1), Some(&PolyMatrix::identity(4)));

        let line = TwistedBundle::new(1, coboundary(&b), |i, j| {
            Some(PolyMatrix::scalar(1, &MultiPoly::constant(b.group().as_rational(b.get(i, j)).unwrap())))
        })
        .unwrap();
        let d = endomorphism_azumaya(&line).unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| d.gluing(i, j) == Some(&PolyMatrix::identity(1)))));
    }

    #[test]
    fn refinement() {
        let nerve = CoverNerve::full(3).unwrap();
        let b = Cochain1::from_fn(mu(5), &nerve, |i, j| Unit::Root(((2 * i + 3 * j) % 5) as u32)).unwrap();
        let a = coboundary(&b);
        assert_eq!(refine(&a, &[0, 1, 2]).unwrap(), a);
        let c = refine(&a, &[1, 1, 1, 1]).unwrap();
        assert!(c.support().all(|[i, j, k]| c.get(i, j, k) == a.get(1, 1, 1)));
        let r = refine(&a, &[2, 0, 1, 0]).unwrap();
        assert_eq!(check_2cocycle(&r), None);

        let face = face_cocycle(5, 2);
        assert_eq!(check_2cocycle(&face), None);
        let pulled = refine(&face, &[1, 2, 3, 0, 1]).unwrap();
        assert_eq!(check_2cocycle(&pulled), None);
    }

    #[test]
    fn matching() {
        let nerve = CoverNerve::full(3).unwrap();
        let b = Cochain1::from_fn(mu(4), &nerve, |i, j| Unit::Root(((i + 3 * j) % 4) as u32)).unwrap();
        let a = coboundary(&b);
        let sigma = [0, 2, 1, 1];
        assert_eq!(twist_matching_check(&refine(&a, &sigma).unwrap(), &refine(&a, &sigma).unwrap()).unwrap(), None);
        assert_eq!(twist_matching_check(&a, &a).unwrap(), None);
        // shift by the coboundary of a nonconstant 1-cochain: cohomologous, not equal
        let shift = Cochain1::from_fn(mu(4), &nerve, |i, j| Unit::Root(if i < j { 1 } else { 0 })).unwrap();
        let other = twist_of_tensor(&a, &coboundary(&shift)).unwrap();
        assert!(twist_matching_check(&a, &other).unwrap().is_some());
        assert!(is_coboundary(&twist_of_hom(&a, &other).unwrap()).unwrap().is_some());
    }

    #[test]
    fn hilbert_examples() {
        let f = SheafOnP1 { summands: vec![3], torsion_length: 0 };
        assert_eq!(hilbert_poly(&f, 1, &[0]).unwrap(), parse_poly("m + 4").unwrap());
        let t = SheafOnP1 { summands: vec![], torsion_length: 5 };
        let p = hilbert_poly(&t, 1, &[0]).unwrap();
        assert_eq!(p, MultiPoly::int(5));
        assert_eq!(p.total_degree(), Some(0));
        assert_eq!(t.dimension(), Some(0));
        let f = SheafOnP1 { summands: vec![2, -1], torsion_length: 0 };
        assert_eq!(hilbert_poly(&f, 1, &[0]).unwrap(), parse_poly("2*m + 3").unwrap());
        assert!(hilbert_poly(&f, 2, &[0]).is_err());

        assert_eq!(morphism_hilbert_poly(&[(4, 0)]), parse_poly("m + 5").unwrap());
        assert_eq!(morphism_hilbert_poly(&[(0, 1)]), parse_poly("2*m + 1").unwrap());
        assert_eq!(morphism_hilbert_poly(&[(0, 1), (0, 1)]), parse_poly("4*m + 2").unwrap());
    }
}
