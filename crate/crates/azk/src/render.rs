//! Core values as JSON, using canonical text for every number and polynomial.

use azk_core::diffop::{EigenComponent, HiggsingReport};
use azk_core::parse::matrix_strings;
use azk_core::spectral::{FiberReport, SpectralCover};
use azk_core::twisted::{Cochain1, CocycleViolation, CoverNerve, UnitCochain2, UnitGroup};
use azk_core::{MultiPoly, PolyMatrix, Rational};
use serde_json::{json, Value};

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn poly(p: &MultiPoly) -> Value {
    Value::String(p.to_string())
}

pub fn matrix(m: &PolyMatrix) -> Value {
    json!(matrix_strings(m))
}

pub fn vector(v: &[MultiPoly]) -> Value {
    Value::Array(v.iter().map(poly).collect())
}

fn component(c: &EigenComponent) -> Value {
    json!({
        "eigenvalue": rational(&c.eigenvalue),
        "rank": c.rank,
        "basis": c.basis.iter().map(|v| vector(v)).collect::<Vec<_>>(),
    })
}

pub fn higgsing(r: &HiggsingReport) -> Value {
    json!({
        "case": r.case_tag.tag(),
        "eigenvalues": r.case_tag.eigenvalues().iter().map(rational).collect::<Vec<_>>(),
        "kernel_ideal_gen": poly(&r.kernel_ideal_gen),
        "components": r.components.iter().map(component).collect::<Vec<_>>(),
        "filtration_flag": r.filtration_flag,
    })
}

pub fn cover(c: &SpectralCover) -> Value {
    json!({ "poly": poly(&c.poly), "reduced": c.reduced_flag })
}

pub fn fiber(f: &FiberReport) -> Value {
    match f {
        FiberReport::Classical { cover: c, image_ideal } => json!({
            "fiber": "classical",
            "cover": cover(c),
            "image_ideal": poly(image_ideal),
        }),
        FiberReport::Quantum { lambda, degree, monomials, rank } => json!({
            "fiber": "quantum",
            "lambda": rational(lambda),
            "degree": degree,
            "monomials": monomials,
            "rank": rank,
            "kernel_dim": f.kernel_dim(),
        }),
    }
}

/// Non-identity values only; omitted tuples are the identity.
pub fn cochain2(c: &UnitCochain2) -> Value {
    let e = c.group().identity();
    let n = c.nerve().index_count();
    let mut values = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = c.get(i, j, k);
                if *v != e {
                    values.push(json!({ "ijk": [i, j, k], "v": v.to_string() }));
                }
            }
        }
    }
    with_group(c.group(), c.nerve(), json!({ "indices": n, "values": values }))
}

pub fn cochain1(c: &Cochain1) -> Value {
    let e = c.group().identity();
    let n = c.nerve().index_count();
    let mut values = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = c.get(i, j);
            if *v != e {
                values.push(json!({ "ij": [i, j], "v": v.to_string() }));
            }
        }
    }
    with_group(c.group(), c.nerve(), json!({ "indices": n, "values": values }))
}

/// Adds `group`, `n` and `empty_faces` in the input format.
fn with_group(g: UnitGroup, nerve: &CoverNerve, mut v: Value) -> Value {
    let obj = v.as_object_mut().expect("object");
    if !nerve.empty_faces().is_empty() {
        obj.insert("empty_faces".into(), json!(nerve.empty_faces()));
    }
    match g {
        UnitGroup::Mu(n) => {
            obj.insert("group".into(), json!("mu"));
            obj.insert("n".into(), json!(n));
        }
        UnitGroup::QStar => {
            obj.insert("group".into(), json!("qstar"));
        }
    }
    v
}

pub fn violation(v: &CocycleViolation) -> Value {
    json!({ "tuple": v.tuple, "value": v.value.to_string() })
}
