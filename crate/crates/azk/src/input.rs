//! Problem files and payload schemas. Numbers travel as strings; plain JSON
//! integers are accepted where an integer is meant.

use azk_core::parse::{parse_matrix, parse_poly, parse_rational};
use azk_core::twisted::{Cochain1, CoverNerve, Unit, UnitCochain2, UnitGroup};
use azk_core::{LambdaMode, MultiPoly, PolyMatrix, Rational};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{schema, CliError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub command: String,
    pub payload: Value,
}

/// Extracts the payload for `command`. A top-level object with a `version`
/// key is read as a [`ProblemFile`]; anything else is a bare payload.
pub fn load_payload(text: &str, command: &str) -> Result<Value, CliError> {
    let v: Value = serde_json::from_str(text)?;
    if !v.as_object().is_some_and(|o| o.contains_key("version")) {
        return Ok(v);
    }
    let file: ProblemFile = serde_json::from_value(v).map_err(|e| schema(e.to_string()))?;
    if file.version != FORMAT_VERSION {
        return Err(schema(format!("unsupported version {}, expected {}", file.version, FORMAT_VERSION)));
    }
    if file.command != command {
        return Err(schema(format!("problem file is for '{}', invoked as '{}'", file.command, command)));
    }
    Ok(file.payload)
}

pub fn decode<T: DeserializeOwned>(v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| schema(e.to_string()))
}

/// A number written either as a JSON string or a JSON integer.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Result<Rational, CliError> {
        match self {
            Num::Int(i) => Ok(Rational::from_integer((*i).into())),
            Num::Text(s) => Ok(parse_rational(s)?),
        }
    }

    pub fn poly(&self) -> Result<MultiPoly, CliError> {
        match self {
            Num::Int(i) => Ok(MultiPoly::int(*i)),
            Num::Text(s) => Ok(parse_poly(s)?),
        }
    }

    pub fn integer(&self) -> Result<i64, CliError> {
        let q = self.rational()?;
        if !q.is_integer() {
            return Err(schema(format!("expected an integer, got {}", q)));
        }
        i64::try_from(q.to_integer()).map_err(|_| schema(format!("integer {} out of range", q)))
    }

    fn text(&self) -> String {
        match self {
            Num::Int(i) => i.to_string(),
            Num::Text(s) => s.clone(),
        }
    }
}

pub fn matrix(rows: &[Vec<Num>]) -> Result<PolyMatrix, CliError> {
    let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(Num::text).collect()).collect();
    Ok(parse_matrix(&text)?)
}

pub fn rationals(xs: &[Num]) -> Result<Vec<Rational>, CliError> {
    xs.iter().map(Num::rational).collect()
}

pub fn integers(xs: &[Num]) -> Result<Vec<i64>, CliError> {
    xs.iter().map(Num::integer).collect()
}

/// `"formal"` or a rational value.
pub fn lambda_mode(v: Option<&Num>) -> Result<LambdaMode, CliError> {
    match v {
        None => Ok(LambdaMode::Formal),
        Some(Num::Text(s)) if s == "formal" => Ok(LambdaMode::Formal),
        Some(n) => Ok(LambdaMode::Fixed(n.rational()?)),
    }
}

pub fn lambda_value(v: Option<&Num>) -> Result<Rational, CliError> {
    v.map_or_else(|| Ok(Rational::from_integer(1.into())), Num::rational)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylPayload {
    pub expr: String,
    #[serde(default)]
    pub lambda: Option<Num>,
    #[serde(default)]
    pub n: Option<usize>,
    /// Polynomial acted on by `weyl act`.
    #[serde(default)]
    pub poly: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AzuPayload {
    #[serde(rename = "A", default)]
    pub a: Option<Vec<Vec<Num>>>,
    #[serde(rename = "B", default)]
    pub b: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    pub lambda: Option<Num>,
    #[serde(default)]
    pub bhat: Option<Vec<Num>>,
    #[serde(default)]
    pub deg_bound: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecPayload {
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub base_vars: Option<Vec<String>>,
    #[serde(default)]
    pub phis: Vec<Vec<Vec<Num>>>,
    #[serde(default)]
    pub gammas: Vec<Vec<Vec<Num>>>,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub lambda: Option<Num>,
    #[serde(default)]
    pub degree: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainValue {
    #[serde(default)]
    pub ij: Option<[usize; 2]>,
    #[serde(default)]
    pub ijk: Option<[usize; 3]>,
    pub v: Num,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainJson {
    pub group: String,
    #[serde(default)]
    pub n: Option<u32>,
    pub indices: usize,
    #[serde(default)]
    pub empty_faces: Vec<Vec<usize>>,
    #[serde(default)]
    pub values: Vec<CochainValue>,
    /// 1 or 2; inferred from the value keys when omitted.
    #[serde(default)]
    pub degree: Option<u32>,
}

pub enum AnyCochain {
    One(Cochain1),
    Two(UnitCochain2),
}

impl CochainJson {
    pub fn group(&self) -> Result<UnitGroup, CliError> {
        match (self.group.as_str(), self.n) {
            ("mu", Some(n)) => Ok(UnitGroup::Mu(n)),
            ("mu", None) => Err(schema("group 'mu' needs n")),
            ("qstar", None) => Ok(UnitGroup::QStar),
            ("qstar", Some(_)) => Err(schema("group 'qstar' takes no n")),
            (g, _) => Err(schema(format!("unknown group '{}', expected mu or qstar", g))),
        }
    }

    pub fn nerve(&self) -> Result<CoverNerve, CliError> {
        if self.empty_faces.is_empty() {
            return Ok(CoverNerve::full(self.indices)?);
        }
        let faces = self.empty_faces.iter().map(|f| f.iter().copied().collect()).collect();
        Ok(CoverNerve::with_empty_faces(self.indices, faces)?)
    }

    fn unit(&self, group: UnitGroup, v: &Num) -> Result<Unit, CliError> {
        match group {
            UnitGroup::Mu(n) => {
                let k = v.integer()?;
                if k < 0 {
                    return Err(schema(format!("mu_{} exponent must be nonnegative, got {}", n, k)));
                }
                Ok(Unit::Root((k as u64 % n as u64) as u32))
            }
            UnitGroup::QStar => Ok(Unit::Scalar(v.rational()?)),
        }
    }

    pub fn degree(&self) -> Result<u32, CliError> {
        let ones = self.values.iter().filter(|x| x.ij.is_some()).count();
        let twos = self.values.iter().filter(|x| x.ijk.is_some()).count();
        if self.values.iter().any(|x| x.ij.is_some() == x.ijk.is_some()) {
            return Err(schema("each value needs exactly one of 'ij' or 'ijk'"));
        }
        let inferred = match (ones, twos) {
            (0, 0) => None,
            (_, 0) => Some(1),
            (0, _) => Some(2),
            _ => return Err(schema("cochain mixes 'ij' and 'ijk' values")),
        };
        match (self.degree, inferred) {
            (Some(d), Some(i)) if d != i => Err(schema(format!("degree {} contradicts values of degree {}", d, i))),
            (Some(d), _) if d != 1 && d != 2 => Err(schema(format!("degree must be 1 or 2, got {}", d))),
            (Some(d), _) => Ok(d),
            (None, Some(i)) => Ok(i),
            (None, None) => Ok(2),
        }
    }

    fn check_index(&self, t: &[usize]) -> Result<(), CliError> {
        match t.iter().find(|&&i| i >= self.indices) {
            Some(bad) => Err(schema(format!("index {} out of range for {} indices", bad, self.indices))),
            None => Ok(()),
        }
    }

    pub fn build(&self) -> Result<AnyCochain, CliError> {
        let group = self.group()?;
        let nerve = self.nerve()?;
        if self.degree()? == 1 {
            let mut c = Cochain1::trivial(group, &nerve);
            for x in &self.values {
                let [i, j] = x.ij.expect("degree checked");
                self.check_index(&[i, j])?;
                c.set(i, j, self.unit(group, &x.v)?)?;
            }
            return Ok(AnyCochain::One(c));
        }
        let mut c = UnitCochain2::trivial(group, &nerve);
        for x in &self.values {
            let [i, j, k] = x.ijk.expect("degree checked");
            self.check_index(&[i, j, k])?;
            c.set(i, j, k, self.unit(group, &x.v)?)?;
        }
        Ok(AnyCochain::Two(c))
    }

    pub fn build2(&self) -> Result<UnitCochain2, CliError> {
        match self.build()? {
            AnyCochain::Two(c) => Ok(c),
            AnyCochain::One(_) => Err(schema("expected a 2-cochain ('ijk' values)")),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingEntry {
    pub ij: [usize; 2],
    pub g: Vec<Vec<Num>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluePayload {
    pub twist: CochainJson,
    pub rank: usize,
    /// Pairs left out default to the identity.
    #[serde(default)]
    pub gluing: Vec<GluingEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchPayload {
    pub pulled: CochainJson,
    pub target: CochainJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafJson {
    #[serde(default)]
    pub summands: Vec<Num>,
    #[serde(default)]
    pub torsion_length: Option<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafPayload {
    #[serde(rename = "F")]
    pub f: SheafJson,
    /// Summands of the locally free `G`; defaults to `[0]`.
    #[serde(rename = "G", default)]
    pub g: Option<Vec<Num>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismComponent {
    pub a: Num,
    pub d: Num,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismPayload {
    pub components: Vec<MorphismComponent>,
}
