use azk_core::diffop::{
    assemble_from_basis, classify_higgsing, commutation_constraint, default_deg_bound, degree_zero_term, discriminant,
    in_rational_span, paper_basis, solve_commutation,
};
use azk_core::parse::parse_poly;
use azk_core::spectral::{
    curvature, first_noncommuting_pair, higgs_to_morphism, image_ideal, lambda_family, spectral_cover, HiggsPair,
    DEFAULT_PROBE_DEGREE,
};
use azk_core::twisted::{
    check_2cocycle, coboundary, endomorphism_azumaya, hilbert_poly, is_coboundary, morphism_hilbert_poly,
    twist_matching_check, twisted_gluing_check, GluingViolation, SheafOnP1, TwistedBundle,
};
use azk_core::{MultiPoly, PolyMatrix, Rational, WeylElement};
use serde_json::{json, Value};

use crate::error::{schema, CliError};
use crate::input::{self, AnyCochain, AzuPayload, GluePayload, MatchPayload, MorphismPayload, SheafPayload, SpecPayload, WeylPayload};
use crate::render;
use crate::report::Report;
use crate::suites;

/// Flags that reach command handlers.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub deg_bound: Option<u32>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
}

pub const COMMANDS: &[&str] = &[
    "weyl nf",
    "weyl act",
    "weyl fourier",
    "weyl reduce",
    "azu solve",
    "azu basis",
    "azu classify",
    "azu report",
    "spec cover",
    "spec admissible",
    "spec family",
    "spec curvature",
    "coc check",
    "coc coboundary",
    "coc glue",
    "coc match",
    "hilb sheaf",
    "hilb morphism",
];

/// Runs a file-driven command on its payload.
pub fn run_payload(command: &str, payload: Value, opts: &Options) -> Result<Report, CliError> {
    let (group, action) = command.split_once(' ').ok_or_else(|| CliError::Usage(format!("bad command '{}'", command)))?;
    match group {
        "weyl" => weyl(command, action, input::decode(payload)?),
        "azu" => azu(command, action, input::decode(payload)?, opts),
        "spec" => spec(command, action, input::decode(payload)?),
        "coc" => coc(command, action, payload),
        "hilb" => hilb(command, action, payload),
        _ => Err(CliError::Usage(format!("unknown command '{}'", command))),
    }
}

fn weyl(command: &str, action: &str, p: WeylPayload) -> Result<Report, CliError> {
    let mode = input::lambda_mode(p.lambda.as_ref())?;
    let d = WeylElement::parse(&p.expr, mode.clone(), p.n)?;
    let mut data = json!({ "n": d.n(), "lambda": mode.to_string(), "input": d.to_string() });
    let put = |data: &mut Value, k: &str, v: Value| {
        data.as_object_mut().expect("object").insert(k.into(), v);
    };
    match action {
        "nf" => {
            put(&mut data, "normal_form", json!(d.to_string()));
            put(&mut data, "bidegree", json!(d.bidegree()));
            Ok(Report::ok(command, data))
        }
        "act" => {
            let f = parse_poly(p.poly.as_deref().ok_or_else(|| schema("weyl act needs 'poly'"))?)?;
            put(&mut data, "poly", render::poly(&f));
            put(&mut data, "result", render::poly(&d.act_on_polynomial(&f)?));
            Ok(Report::ok(command, data))
        }
        "fourier" => {
            let f = d.fourier();
            let order_four = f.fourier().fourier().fourier() == d;
            put(&mut data, "result", json!(f.to_string()));
            put(&mut data, "order_four", json!(order_four));
            if order_four {
                Ok(Report::ok(command, data))
            } else {
                Ok(Report::violation(command, data, "fourier^4 is not the identity".into()))
            }
        }
        "reduce" => {
            let cert = d.reduce_to_scalar()?;
            let verified = cert.verify(&d);
            put(&mut data, "steps", json!(cert.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>()));
            put(&mut data, "final_scalar", render::poly(&cert.final_scalar));
            put(&mut data, "verified", json!(verified));
            if verified {
                Ok(Report::ok(command, data))
            } else {
                Ok(Report::violation(command, data, "certificate does not replay".into()))
            }
        }
        _ => Err(CliError::Usage(format!("unknown command '{}'", command))),
    }
}

fn bhat4(xs: &[input::Num]) -> Result<[Rational; 4], CliError> {
    let v = input::rationals(xs)?;
    <[Rational; 4]>::try_from(v).map_err(|v| schema(format!("bhat needs 4 entries, got {}", v.len())))
}

fn azu(command: &str, action: &str, p: AzuPayload, opts: &Options) -> Result<Report, CliError> {
    let lambda = input::lambda_value(p.lambda.as_ref())?;
    let need_a = || -> Result<PolyMatrix, CliError> { input::matrix(p.a.as_deref().ok_or_else(|| schema("missing 'A'"))?) };
    match action {
        "solve" => {
            let a = need_a()?;
            let bound = opts.deg_bound.or(p.deg_bound).unwrap_or_else(|| default_deg_bound(&a));
            let basis = solve_commutation(&a, &lambda, bound)?;
            Ok(Report::ok(
                command,
                json!({
                    "lambda": render::rational(&lambda),
                    "deg_bound": bound,
                    "dimension": basis.len(),
                    "basis": basis.iter().map(render::matrix).collect::<Vec<_>>(),
                }),
            ))
        }
        "basis" => {
            let a = need_a()?;
            let basis = paper_basis(&a, &lambda)?;
            let lam = MultiPoly::constant(lambda.clone());
            let satisfied = basis
                .iter()
                .map(|b| commutation_constraint(&a, b, &lam).map(|c| c.is_zero()))
                .collect::<azk_core::Result<Vec<bool>>>()?;
            let data = json!({
                "lambda": render::rational(&lambda),
                "discriminant": render::poly(&discriminant(&a)?),
                "basis": basis.iter().map(render::matrix).collect::<Vec<_>>(),
                "satisfied": satisfied,
            });
            if satisfied.iter().all(|&s| s) {
                Ok(Report::ok(command, data))
            } else {
                Ok(Report::violation(command, data, "a basis element fails the commutation constraint".into()))
            }
        }
        "classify" => {
            let b = input::matrix(p.b.as_deref().ok_or_else(|| schema("missing 'B'"))?)?;
            Ok(Report::ok(command, json!({ "B": render::matrix(&b), "report": render::higgsing(&classify_higgsing(&b)?) })))
        }
        "report" => {
            let a = need_a()?;
            let bhat = bhat4(p.bhat.as_deref().ok_or_else(|| schema("missing 'bhat'"))?)?;
            let bound = opts.deg_bound.or(p.deg_bound).unwrap_or_else(|| default_deg_bound(&a));
            pushforward(command, &a, &bhat, &lambda, bound)
        }
        _ => Err(CliError::Usage(format!("unknown command '{}'", command))),
    }
}

/// Full pipeline for one commuting partner: closed-form basis, solver span,
/// assembled `B`, characteristic polynomials and the eigen-decomposition.
pub fn pushforward(command: &str, a: &PolyMatrix, bhat: &[Rational; 4], lambda: &Rational, bound: u32) -> Result<Report, CliError> {
    let basis = paper_basis(a, lambda)?;
    let space = solve_commutation(a, lambda, bound)?;
    let spans = basis.iter().all(|b| in_rational_span(&space, b)) && space.iter().all(|b| in_rational_span(&basis, b));
    let b = assemble_from_basis(a, bhat, lambda)?;
    let lam = MultiPoly::constant(lambda.clone());
    let commutes = commutation_constraint(a, &b, &lam)?.is_zero();
    let b0 = degree_zero_term(&b);
    let chi = b.char_poly("v")?;
    let chi0 = b0.char_poly("v")?;
    let report = classify_higgsing(&b)?;
    let data = json!({
        "A": render::matrix(a),
        "lambda": render::rational(lambda),
        "bhat": bhat.iter().map(render::rational).collect::<Vec<_>>(),
        "basis": basis.iter().map(render::matrix).collect::<Vec<_>>(),
        "deg_bound": bound,
        "solution_dimension": space.len(),
        "basis_spans_solutions": spans,
        "B": render::matrix(&b),
        "B_satisfies_constraint": commutes,
        "B0": render::matrix(&b0),
        "char_poly_B": render::poly(&chi),
        "char_poly_B0": render::poly(&chi0),
        "report": render::higgsing(&report),
    });
    let mut failures = Vec::new();
    if !spans || space.len() != 4 {
        failures.push(format!("solution space has dimension {} and spans agree = {}", space.len(), spans));
    }
    if !commutes {
        failures.push("B fails the commutation constraint".to_string());
    }
    if chi != chi0 {
        failures.push("char_poly(B) differs from char_poly(B0)".to_string());
    }
    if failures.is_empty() {
        Ok(Report::ok(command, data))
    } else {
        let mut r = Report::violation(command, data, failures.remove(0));
        r.diagnostics.extend(failures);
        Ok(r)
    }
}

fn spec(command: &str, action: &str, p: SpecPayload) -> Result<Report, CliError> {
    if let Some(m) = &p.mode {
        if m != action {
            return Err(schema(format!("payload mode '{}' does not match command '{}'", m, command)));
        }
    }
    let pair = || -> Result<HiggsPair, CliError> {
        let phis = p.phis.iter().map(|m| input::matrix(m)).collect::<Result<Vec<_>, _>>()?;
        let rank = match (p.rank, phis.first()) {
            (Some(r), _) => r,
            (None, Some(m)) => m.rows(),
            (None, None) => return Err(schema("missing 'phis'")),
        };
        Ok(HiggsPair::new(rank, phis)?)
    };
    match action {
        "cover" => {
            let h = pair()?;
            let cover = spectral_cover(&h)?;
            let ideal = image_ideal(&h)?;
            Ok(Report::ok(command, json!({ "cover": render::cover(&cover), "image_ideal": render::poly(&ideal) })))
        }
        "admissible" => {
            let h = pair()?;
            match first_noncommuting_pair(h.phis()) {
                Some((i, j)) => Ok(Report::violation(
                    command,
                    json!({ "admissible": false, "pair": [i, j] }),
                    format!("phi_{} and phi_{} do not commute", i, j),
                )),
                None => {
                    let m = higgs_to_morphism(&h)?;
                    Ok(Report::ok(
                        command,
                        json!({
                            "admissible": true,
                            "subalgebra_dimension": m.subalgebra_basis.len(),
                            "subalgebra_basis": m.subalgebra_basis.iter().map(render::matrix).collect::<Vec<_>>(),
                        }),
                    ))
                }
            }
        }
        "family" => {
            let h = pair()?;
            let lambda = input::lambda_value(p.lambda.as_ref())?;
            let degree = p.degree.unwrap_or(DEFAULT_PROBE_DEGREE);
            let fiber = lambda_family(&h)?.evaluate(&lambda, degree)?;
            let data = render::fiber(&fiber);
            if fiber.kernel_dim() == 0 {
                Ok(Report::ok(command, data))
            } else {
                Ok(Report::violation(command, data, format!("probe kernel has dimension {}", fiber.kernel_dim())))
            }
        }
        "curvature" => {
            let vars = p.base_vars.clone().ok_or_else(|| schema("curvature needs 'base_vars'"))?;
            let gammas = p.gammas.iter().map(|m| input::matrix(m)).collect::<Result<Vec<_>, _>>()?;
            let f = curvature(&vars, &gammas)?;
            let flat = f.values().all(PolyMatrix::is_zero);
            let entries: serde_json::Map<String, Value> = f
                .iter()
                .map(|((i, j), m)| (format!("{},{}", vars[*i], vars[*j]), render::matrix(m)))
                .collect();
            Ok(Report::ok(command, json!({ "flat": flat, "curvature": entries })))
        }
        _ => Err(CliError::Usage(format!("unknown command '{}'", command))),
    }
}

fn coc(command: &str, action: &str, payload: Value) -> Result<Report, CliError> {
    match action {
        "check" => {
            let a = input::decode::<input::CochainJson>(payload)?.build2()?;
            match check_2cocycle(&a) {
                None => Ok(Report::ok(command, json!({ "cocycle": true }))),
                Some(v) => Ok(Report::violation(
                    command,
                    json!({ "cocycle": false, "violation": render::violation(&v) }),
                    format!("cocycle condition fails on {:?}", v.tuple),
                )),
            }
        }
        "coboundary" => match input::decode::<input::CochainJson>(payload)?.build()? {
            AnyCochain::One(b) => Ok(Report::ok(command, json!({ "coboundary": render::cochain2(&coboundary(&b)) }))),
            AnyCochain::Two(a) => {
                let w = is_coboundary(&a)?;
                Ok(Report::ok(
                    command,
                    json!({
                        "is_coboundary": w.is_some(),
                        "witness": w.as_ref().map(render::cochain1),
                    }),
                ))
            }
        },
        "glue" => {
            let p: GluePayload = input::decode(payload)?;
            let twist = p.twist.build2()?;
            let mut given = std::collections::BTreeMap::new();
            for e in &p.gluing {
                if given.insert(e.ij, input::matrix(&e.g)?).is_some() {
                    return Err(schema(format!("gluing for {:?} given twice", e.ij)));
                }
            }
            let n = twist.nerve().index_count();
            if let Some(bad) = given.keys().find(|[i, j]| *i >= n || *j >= n) {
                return Err(schema(format!("gluing pair {:?} out of range", bad)));
            }
            let bundle = TwistedBundle::new(p.rank, twist, |i, j| {
                Some(given.get(&[i, j]).cloned().unwrap_or_else(|| PolyMatrix::identity(p.rank)))
            })?;
            match twisted_gluing_check(&bundle)? {
                Some(v) => {
                    let (kind, tuple) = match v {
                        GluingViolation::NotIdentity(i) => ("not_identity", vec![i]),
                        GluingViolation::NotInverse(i, j) => ("not_inverse", vec![i, j]),
                        GluingViolation::Twisted(i, j, k) => ("twisted_cocycle", vec![i, j, k]),
                    };
                    Ok(Report::violation(
                        command,
                        json!({ "glued": false, "violation": { "kind": kind, "tuple": tuple } }),
                        format!("gluing fails ({}) on {:?}", kind, tuple),
                    ))
                }
                None => {
                    let end = endomorphism_azumaya(&bundle)?;
                    let data = json!({
                        "glued": true,
                        "endomorphism_rank": end.rank,
                        "endomorphism_cocycle": end.cocycle_failure.is_none(),
                    });
                    match end.cocycle_failure {
                        None => Ok(Report::ok(command, data)),
                        Some(t) => Ok(Report::violation(command, data, format!("End(E) fails the cocycle condition on {:?}", t))),
                    }
                }
            }
        }
        "match" => {
            let p: MatchPayload = input::decode(payload)?;
            let pulled = p.pulled.build2()?;
            let target = p.target.build2()?;
            match twist_matching_check(&pulled, &target)? {
                None => Ok(Report::ok(command, json!({ "matched": true }))),
                Some(t) => Ok(Report::violation(
                    command,
                    json!({ "matched": false, "tuple": t }),
                    format!("twists differ on {:?}", t),
                )),
            }
        }
        _ => Err(CliError::Usage(format!("unknown command '{}'", command))),
    }
}

fn hilb(command: &str, action: &str, payload: Value) -> Result<Report, CliError> {
    match action {
        "sheaf" => {
            let p: SheafPayload = input::decode(payload)?;
            let torsion = match &p.f.torsion_length {
                None => 0,
                Some(n) => u64::try_from(n.integer()?).map_err(|_| schema("torsion_length must be nonnegative"))?,
            };
            let f = SheafOnP1 { summands: input::integers(&p.f.summands)?, torsion_length: torsion };
            let g = match &p.g {
                Some(g) => input::integers(g)?,
                None => vec![0],
            };
            let h = hilbert_poly(&f, g.len(), &g)?;
            Ok(Report::ok(
                command,
                json!({ "hilbert_poly": render::poly(&h), "dimension": f.dimension(), "degree": h.total_degree() }),
            ))
        }
        "morphism" => {
            let p: MorphismPayload = input::decode(payload)?;
            let comps = p
                .components
                .iter()
                .map(|c| Ok((c.a.integer()?, c.d.integer()?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Report::ok(command, json!({ "hilbert_poly": render::poly(&morphism_hilbert_poly(&comps)) })))
        }
        _ => Err(CliError::Usage(format!("unknown command '{}'", command))),
    }
}

/// Nilpotent `A` with `lambda = 1` unless overridden.
pub fn example_5_1_11(bhat: &[Rational; 4], lambda: &Rational, deg_bound: Option<u32>) -> Result<Report, CliError> {
    let a = PolyMatrix::from_ints(&[&[0, 1], &[0, 0]]);
    let bound = deg_bound.unwrap_or_else(|| default_deg_bound(&a));
    pushforward("demo example-5-1-11", &a, bhat, lambda, bound)
}

pub fn props(suite: &str, opts: &Options) -> Result<Report, CliError> {
    let r = suites::run_suite(suite, opts.seed.unwrap_or(0), opts.count.unwrap_or(100))?;
    let command = "demo props";
    if r.all_passed() {
        Ok(Report::ok(command, r.to_json()))
    } else {
        let (i, msg) = r.first_counterexample.clone().expect("a failure was recorded");
        Ok(Report::violation(command, r.to_json(), format!("sample {} failed: {}", i, msg)))
    }
}
