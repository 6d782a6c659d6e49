//! Symplectic Lie-algebra models: left-invariant forms on a nilpotent group
//! with a closed nondegenerate invariant 2-form.
//!
//! A model is `2n` generators `e^1, ..., e^{2n}`, the values `d e^i` (2-forms)
//! and `omega`. The differential extends to all forms as the unique
//! anti-derivation; integration reads off the coefficient of `e^{1...2n}`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cohomology::{CohomologySpace, Theory};
use crate::exactlinalg::{QuotientSpace, Rational, RationalMatrix};
use crate::exterior::{
    basis_monomials, integrate, operator_matrix, Bivector, ExteriorError, Form, Monomial, MAX_HALF_DIM,
};
use crate::sl2ops::{degree_operator, dual_lefschetz, lefschetz, LefschetzTables, Sl2Error};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("generator index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("half-dimension {0} is not supported (expected 1..={MAX_HALF_DIM})")]
    UnsupportedDimension(usize),
    #[error("unknown model `{name}` (catalog: {catalog})")]
    UnknownModel { name: String, catalog: String },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("model `{name}` failed validation: {failed}")]
    Invalid { name: String, failed: String },
}

const CATALOG: &[(&str, &str)] = &[
    ("t2", include_str!("../models/t2.json")),
    ("t4", include_str!("../models/t4.json")),
    ("t6", include_str!("../models/t6.json")),
    ("kodaira_thurston", include_str!("../models/kodaira_thurston.json")),
    ("nil6_two_step", include_str!("../models/nil6_two_step.json")),
    ("nil6_free_two_step", include_str!("../models/nil6_free_two_step.json")),
    ("nil6_four_step", include_str!("../models/nil6_four_step.json")),
];

/// Names of the built-in models, in catalog order.
pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(name, _)| *name).collect()
}

/// A validated catalog model.
pub fn builtin(name: &str) -> Result<SymplecticModel, ModelError> {
    let (_, text) = CATALOG
        .iter()
        .find(|(candidate, _)| *candidate == name)
        .ok_or_else(|| ModelError::UnknownModel {
            name: name.to_string(),
            catalog: catalog_names().join(", "),
        })?;
    let model = parse_model(text)?;
    model.validate().into_result(&model)?;
    Ok(model)
}

/// Parses a model file; the result is not yet validated.
pub fn load_model_file(path: &Path) -> Result<SymplecticModel, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModelError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut model = parse_model(&text)?;
    if model.name.is_empty() {
        model.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(model)
}

// ---- file format ----------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default)]
    name: String,
    n: usize,
    #[serde(default)]
    differential: BTreeMap<GeneratorKey, RawDifferential>,
    omega: TermList,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(try_from = "String")]
struct GeneratorKey(usize);

impl TryFrom<String> for GeneratorKey {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        match s.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(Self(i)),
            _ => Err(format!("generator key `{s}` is not a positive integer")),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDifferential {
    Shorthand(Shorthand),
    Terms(TermList),
}

impl RawDifferential {
    fn terms(&self) -> &[(usize, usize, Rational)] {
        match self {
            Self::Shorthand(s) => &s.0,
            Self::Terms(t) => &t.0,
        }
    }
}

/// `"12"`, `"-13"`, `"14+25"`: signed sums of degree-2 monomials written as digit pairs.
#[derive(Deserialize)]
#[serde(try_from = "String")]
struct Shorthand(Vec<(usize, usize, Rational)>);

impl TryFrom<String> for Shorthand {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Self(Vec::new()));
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        if rest.is_empty() {
            return Err("empty monomial string".into());
        }
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ if terms.is_empty() => (false, rest),
                _ => return Err(format!("expected `+` or `-` in `{s}`")),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let digits: Vec<usize> = body[..end]
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| format!("`{}` is not a digit string", &body[..end]))?;
            match digits.as_slice() {
                [i, j] if *i >= 1 && i < j => {
                    let c = if negative { -Rational::one() } else { Rational::one() };
                    terms.push((*i, *j, c));
                }
                _ => {
                    return Err(format!(
                        "`{}` is not a 2-form monomial with increasing nonzero digits",
                        &body[..end]
                    ))
                }
            }
            rest = &body[end..];
        }
        check_duplicates(&terms)?;
        Ok(Self(terms))
    }
}

/// A list of `[i, j, c]` triples with `i < j` and no repeated pair.
#[derive(Deserialize)]
#[serde(try_from = "Vec<(usize, usize, RawRational)>")]
struct TermList(Vec<(usize, usize, Rational)>);

impl TryFrom<Vec<(usize, usize, RawRational)>> for TermList {
    type Error = String;

    fn try_from(raw: Vec<(usize, usize, RawRational)>) -> Result<Self, String> {
        let mut terms = Vec::with_capacity(raw.len());
        for (i, j, c) in raw {
            if i == 0 || i >= j {
                return Err(format!("index pair ({i}, {j}) is not strictly increasing from 1"));
            }
            terms.push((i, j, c.0));
        }
        check_duplicates(&terms)?;
        Ok(Self(terms))
    }
}

fn check_duplicates(terms: &[(usize, usize, Rational)]) -> Result<(), String> {
    let mut seen = std::collections::BTreeSet::new();
    for (i, j, _) in terms {
        if !seen.insert((*i, *j)) {
            return Err(format!("index pair ({i}, {j}) appears twice"));
        }
    }
    Ok(())
}

/// An integer or a `"p/q"` string.
#[derive(Deserialize)]
#[serde(try_from = "Value")]
struct RawRational(Rational);

impl TryFrom<Value> for RawRational {
    type Error = String;

    fn try_from(v: Value) -> Result<Self, String> {
        match &v {
            Value::Number(num) => num
                .as_i64()
                .map(|i| Self(Rational::from_integer(i.into())))
                .ok_or_else(|| format!("coefficient {num} is not an integer; use a \"p/q\" string")),
            Value::String(s) => parse_rational(s).map(Self),
            other => Err(format!("coefficient {other} is neither an integer nor a \"p/q\" string")),
        }
    }
}

/// Parses `"p"` or `"p/q"` with `q != 0`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("`{s}` is not a rational of the form p or p/q");
    let (num, den) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Parses the JSON model format. Indices are checked against `2n`; nothing
/// else about the model is validated.
pub fn parse_model(text: &str) -> Result<SymplecticModel, ModelError> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(cut) => message[..cut].to_string(),
            None => message,
        };
        ModelError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    let n = raw.n;
    if n == 0 || n > MAX_HALF_DIM {
        return Err(ModelError::UnsupportedDimension(n));
    }
    let dim = 2 * n;
    let to_form = |terms: &[(usize, usize, Rational)]| -> Result<Form, ModelError> {
        let mut f = Form::zero(n);
        for (i, j, c) in terms {
            if *j > dim {
                return Err(ModelError::IndexOutOfRange { index: *j, dim });
            }
            f.add_term(Monomial::from_indices(&[*i, *j]).expect("checked increasing"), c.clone());
        }
        Ok(f)
    };
    let mut structure = vec![Form::zero(n); dim];
    for (key, value) in &raw.differential {
        if key.0 > dim {
            return Err(ModelError::IndexOutOfRange { index: key.0, dim });
        }
        structure[key.0 - 1] = to_form(value.terms())?;
    }
    let omega = to_form(&raw.omega.0)?;
    Ok(SymplecticModel::from_parts(raw.name, n, structure, omega))
}

// ---- the model ------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SymplecticModel {
    name: String,
    n: usize,
    /// `structure[i - 1] = d e^i`.
    structure: Vec<Form>,
    omega: Form,
    bivector: Option<Bivector>,
    lambda_scale: Rational,
    tables: OnceLock<Result<LefschetzTables, Sl2Error>>,
    d_matrices: OnceLock<Vec<RationalMatrix>>,
}

impl SymplecticModel {
    /// Assembles a model from `d e^i` (one degree-2 form per generator) and `omega`.
    pub fn from_parts(name: impl Into<String>, n: usize, structure: Vec<Form>, omega: Form) -> Self {
        assert_eq!(structure.len(), 2 * n, "one structure form per generator");
        let bivector = Bivector::inverse_of(&omega).ok();
        Self {
            name: name.into(),
            n,
            structure,
            omega,
            bivector,
            lambda_scale: Rational::one(),
            tables: OnceLock::new(),
            d_matrices: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    /// The bivector used by `Lambda`; `None` when `omega` is degenerate.
    pub fn bivector(&self) -> Option<&Bivector> {
        self.bivector.as_ref()
    }

    /// `d e^i` for a 1-based generator index.
    pub fn structure(&self, i: usize) -> &Form {
        &self.structure[i - 1]
    }

    /// Factor applied to the Poisson bivector; 1 except for fault injection.
    pub fn lambda_scale(&self) -> &Rational {
        &self.lambda_scale
    }

    /// A copy whose `Lambda` uses `factor * pi` instead of `pi`.
    ///
    /// `ker Lambda` is unchanged for any nonzero factor, so only the sl2
    /// commutation laws can detect the change.
    pub fn with_lambda_scaled(&self, factor: &Rational) -> Self {
        Self {
            bivector: self.bivector.as_ref().map(|pi| pi.scaled(factor)),
            lambda_scale: &self.lambda_scale * factor,
            tables: OnceLock::new(),
            d_matrices: self.d_matrices.clone(),
            ..self.clone()
        }
    }

    pub(crate) fn lefschetz_tables(&self) -> Result<&LefschetzTables, Sl2Error> {
        self.tables
            .get_or_init(|| LefschetzTables::build(self))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// The Chevalley-Eilenberg differential: the anti-derivation extending `e^i -> d e^i`.
    pub fn d(&self, a: &Form) -> Form {
        assert_eq!(a.n(), self.n, "form and model dimensions differ");
        let mut out = Form::zero(self.n);
        for (m, c) in a.terms() {
            for (position, i) in m.indices().into_iter().enumerate() {
                let bit = 1u32 << (i - 1);
                let before = Monomial::from_bits(m.bits() & (bit - 1));
                let after = Monomial::from_bits(m.bits() & !(bit | (bit - 1)));
                for (dm, dc) in self.structure[i - 1].terms() {
                    let Some((neg1, left)) = before.wedge(*dm) else { continue };
                    let Some((neg2, whole)) = left.wedge(after) else { continue };
                    let value = c * dc;
                    let negative = neg1 ^ neg2 ^ (position % 2 == 1);
                    out.add_term(whole, if negative { -value } else { value });
                }
            }
        }
        out
    }

    /// Matrix of `d: Omega^k -> Omega^{k+1}`; zero rows when `k = 2n`.
    pub fn d_matrix(&self, k: usize) -> &RationalMatrix {
        let all = self.d_matrices.get_or_init(|| {
            (0..=2 * self.n)
                .map(|k| {
                    operator_matrix::<_, std::convert::Infallible>(self.n, k, k + 1, |f| Ok(self.d(f)))
                        .expect("infallible")
                })
                .collect()
        });
        &all[k]
    }

    /// `integral a` (coefficient of the top monomial).
    pub fn integrate(&self, a: &Form) -> Result<Rational, ExteriorError> {
        integrate(a)
    }

    /// Checks every model invariant; failures are verdicts carrying a witness.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let mut checks = Vec::new();

        let mut witness = None;
        for i in 1..=2 * n {
            let dd = self.d(&self.structure[i - 1]);
            if !dd.is_zero() {
                witness = Some(format!("d(d e^{i}) = {dd}"));
                break;
            }
        }
        checks.push(Check::new("d_squared_zero", witness));

        let d_omega = self.d(&self.omega);
        checks.push(Check::new(
            "omega_closed",
            (!d_omega.is_zero()).then(|| format!("d omega = {d_omega}")),
        ));

        let mut power = Form::one(n);
        for _ in 0..n {
            power = self.omega.wedge(&power).expect("same n");
        }
        checks.push(Check::new(
            "omega_nondegenerate",
            power.is_zero().then(|| format!("omega^{n} = 0")),
        ));

        // d vanishes on (2n-1)-forms iff the Lie algebra is unimodular, which
        // a compact quotient requires and integration by parts relies on
        let mut witness = None;
        for m in basis_monomials(n, 2 * n - 1) {
            let f = Form::from_terms(n, [(m, Rational::one())]).expect("in range");
            let df = self.d(&f);
            if !df.is_zero() {
                witness = Some(format!("d({f}) = {df}"));
                break;
            }
        }
        checks.push(Check::new("unimodular", witness));

        checks.push(Check::new("sl2_calibration", self.calibration_witness()));
        ValidationReport { checks }
    }

    /// First monomial on which an sl2 relation fails, if any.
    fn calibration_witness(&self) -> Option<String> {
        let n = self.n;
        if self.bivector.is_none() {
            return Some("no Poisson bivector: omega is degenerate".into());
        }
        let two = Rational::from_integer(2.into());
        for k in 0..=2 * n {
            for m in basis_monomials(n, k) {
                let a = Form::from_terms(n, [(m, Rational::one())]).expect("in range");
                let l = |f: &Form| lefschetz(self, f).expect("same n");
                let lam = |f: &Form| dual_lefschetz(self, f).expect("bivector present");
                let h = |f: &Form| degree_operator(self, f).expect("same n");
                let lambda_l = lam(&l(&a)) - l(&lam(&a));
                if lambda_l != h(&a) {
                    return Some(format!("[Lambda, L] {a} = {lambda_l}, H {a} = {}", h(&a)));
                }
                let h_l = h(&l(&a)) - l(&h(&a));
                if h_l != l(&a).scale(&-two.clone()) {
                    return Some(format!("[H, L] {a} = {h_l}, expected -2 L {a}"));
                }
                let h_lam = h(&lam(&a)) - lam(&h(&a));
                if h_lam != lam(&a).scale(&two) {
                    return Some(format!("[H, Lambda] {a} = {h_lam}, expected 2 Lambda {a}"));
                }
            }
        }
        None
    }

    /// Canonical serialization: sorted keys, explicit `[i, j, "p/q"]` triples, no name.
    pub fn canonical_json(&self) -> String {
        let mut value = self.content_json();
        if !self.lambda_scale.is_one() {
            value["lambda_scale"] = json!(self.lambda_scale.to_string());
        }
        serde_json::to_string(&value).expect("serializable")
    }

    fn content_json(&self) -> Value {
        let triples = |f: &Form| -> Value {
            Value::Array(
                f.terms()
                    .map(|(m, c)| {
                        let idx = m.indices();
                        json!([idx[0], idx[1], c.to_string()])
                    })
                    .collect(),
            )
        };
        let differential: serde_json::Map<String, Value> = self
            .structure
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(i, f)| ((i + 1).to_string(), triples(f)))
            .collect();
        json!({ "n": self.n, "differential": differential, "omega": triples(&self.omega) })
    }

    /// The model file text (parses back to an identical model).
    pub fn to_json_pretty(&self) -> String {
        let mut value = self.content_json();
        value["name"] = json!(self.name);
        serde_json::to_string_pretty(&value).expect("serializable")
    }

    /// Hex SHA-256 of [`Self::canonical_json`].
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    /// `True` when every generator is closed.
    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(Form::is_zero)
    }

    /// Invariant de Rham cohomology.
    pub fn derham(&self) -> DeRhamSummary {
        let n = self.n;
        let spaces: Vec<CohomologySpace> = (0..=2 * n)
            .map(|k| {
                let cocycles = self.d_matrix(k).kernel();
                let coboundaries = match k {
                    0 => crate::exactlinalg::SubspaceBasis::empty(cocycles.ambient_dim()),
                    _ => self.d_matrix(k - 1).image(),
                };
                let quotient = QuotientSpace::new(cocycles, coboundaries).expect("d squares to zero");
                CohomologySpace::new(Theory::DeRham, n, k, k, quotient)
            })
            .collect();
        DeRhamSummary {
            betti: spaces.iter().map(CohomologySpace::dim).collect(),
            spaces,
        }
    }
}

impl fmt::Display for SymplecticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n = {}): ", self.name, self.n)?;
        let salamon: Vec<String> = self
            .structure
            .iter()
            .map(|s| if s.is_zero() { "0".into() } else { s.to_string() })
            .collect();
        write!(f, "d = ({}), omega = {}", salamon.join(", "), self.omega)
    }
}

/// One validation verdict; `witness` is set exactly when the check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub witness: Option<String>,
}

impl Check {
    fn new(name: &'static str, witness: Option<String>) -> Self {
        Self { name, witness }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn into_result(self, model: &SymplecticModel) -> Result<Self, ModelError> {
        if self.passed() {
            return Ok(self);
        }
        let failed: Vec<String> = self
            .failures()
            .map(|c| format!("{} ({})", c.name, c.witness.as_deref().unwrap_or_default()))
            .collect();
        Err(ModelError::Invalid {
            name: model.name().to_string(),
            failed: failed.join("; "),
        })
    }
}

/// Betti numbers and representative classes of invariant de Rham cohomology.
#[derive(Clone, Debug)]
pub struct DeRhamSummary {
    pub betti: Vec<usize>,
    pub spaces: Vec<CohomologySpace>,
}

impl DeRhamSummary {
    pub fn space(&self, k: usize) -> &CohomologySpace {
        &self.spaces[k]
    }
}
