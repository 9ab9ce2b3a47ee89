//! Instance files: a square complex matrix plus a cone description, with
//! optional seed and tolerance overrides.
//!
//! The on-disk format is JSON with four top-level keys:
//!
//! - `"matrix"` (required): array of rows, each row an array of `[re, im]`
//!   pairs. All entries must be finite numbers.
//! - `"cone"` (required): a cone object, see [`ConeFile`].
//! - `"seed"` (optional): unsigned integer recorded in reports.
//! - `"tolerances"` (optional): either a profile name (`"default"` or
//!   `"strict"`) or a complete profile object.
//!
//! Unknown keys are rejected everywhere, so typos fail loudly instead of
//! silently changing meaning. Serialization is canonical: sorted keys,
//! shortest round-trip float formatting, trailing newline. Parsing a
//! serialized instance reproduces it exactly.

use conespec::cones::ConeSpec;
use conespec::config::ToleranceProfile;
use conespec::linalg::{c, CMatrix, CVector};
use serde_json::{Map, Value};

use crate::CliError;

fn input<T>(msg: String) -> Result<T, CliError> {
    Err(CliError::Input(msg))
}

/// A cone description as written in instance files.
///
/// The JSON form is an object with a `"kind"` discriminator:
///
/// - `{"kind": "orthant", "dim": n}` — the nonnegative orthant of R^n.
/// - `{"kind": "polyhedral", "dim": n, "generators": [[..], ..], "facets":
///   [[..], ..]}` — a pointed solid polyhedral cone; at least one of
///   `generators` / `facets` must be present.
/// - `{"kind": "complexified", "base": <cone>}` — base + i·base of a real
///   cone.
/// - `{"kind": "transformed", "transform": [[[re,im],..],..], "base":
///   <cone>}` — the image of the base cone under an invertible map.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeFile {
    Orthant {
        dim: usize,
    },
    Polyhedral {
        dim: usize,
        generators: Option<Vec<Vec<f64>>>,
        facets: Option<Vec<Vec<f64>>>,
    },
    Complexified {
        base: Box<ConeFile>,
    },
    Transformed {
        transform: Vec<Vec<[f64; 2]>>,
        base: Box<ConeFile>,
    },
}

/// Tolerance override carried by an instance file.
#[derive(Debug, Clone, PartialEq)]
pub enum ToleranceSpec {
    /// A named built-in profile.
    Name(String),
    /// A complete inline profile.
    Full(ToleranceProfile),
}

/// A parsed instance file, not yet bound to a tolerance profile. Cone
/// construction validates against a profile (rank and conditioning
/// decisions), so it happens in [`ConeFile::build`] once tolerances are
/// resolved.
#[derive(Debug, Clone)]
pub struct ParsedInstance {
    pub matrix: CMatrix,
    pub cone: ConeFile,
    pub seed: Option<u64>,
    pub tolerances: Option<ToleranceSpec>,
}

fn expect_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| CliError::Input(format!("{what}: expected a JSON object")))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<(), CliError> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(CliError::Input(format!(
                "{what}: unknown key `{k}` (allowed keys: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn finite_number(v: &Value, what: &str) -> Result<f64, CliError> {
    let x = v
        .as_f64()
        .ok_or_else(|| CliError::Input(format!("{what}: expected a number")))?;
    if !x.is_finite() {
        return input(format!("{what}: non-finite value"));
    }
    Ok(x)
}

fn parse_pair(v: &Value, what: &str) -> Result<[f64; 2], CliError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| CliError::Input(format!("{what}: expected a two-element [re, im] array")))?;
    Ok([
        finite_number(&arr[0], &format!("{what}: real part"))?,
        finite_number(&arr[1], &format!("{what}: imaginary part"))?,
    ])
}

fn parse_pair_rows(v: &Value, what: &str) -> Result<Vec<Vec<[f64; 2]>>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::Input(format!("{what}: expected an array of rows")))?;
    if rows.is_empty() {
        return input(format!("{what}: empty matrix"));
    }
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| CliError::Input(format!("{what}: row {i} is not an array")))?;
        let mut r = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            r.push(parse_pair(cell, &format!("{what}: entry ({i}, {j})"))?);
        }
        out.push(r);
    }
    Ok(out)
}

fn parse_real_rows(v: &Value, what: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::Input(format!("{what}: expected an array of rows")))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| CliError::Input(format!("{what}: row {i} is not an array")))?;
        let mut r = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            r.push(finite_number(cell, &format!("{what}: entry ({i}, {j})"))?);
        }
        out.push(r);
    }
    Ok(out)
}

fn parse_dim(obj: &Map<String, Value>, what: &str) -> Result<usize, CliError> {
    let v = obj
        .get("dim")
        .ok_or_else(|| CliError::Input(format!("{what}: missing key `dim`")))?;
    let n = v
        .as_u64()
        .ok_or_else(|| CliError::Input(format!("{what}: `dim` must be a nonnegative integer")))?;
    Ok(n as usize)
}

/// Converts a grid of `[re, im]` pairs into a matrix. Rows must be nonempty
/// and equally long.
pub fn matrix_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix, CliError> {
    let complex_rows: Vec<Vec<conespec::linalg::C64>> = rows
        .iter()
        .map(|r| r.iter().map(|p| c(p[0], p[1])).collect())
        .collect();
    CMatrix::from_rows(&complex_rows).map_err(crate::classify)
}

/// Inverse of [`matrix_from_pairs`], entry-exact.
pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

impl ConeFile {
    /// Parses a cone object, rejecting unknown keys at every level.
    pub fn from_value(v: &Value) -> Result<ConeFile, CliError> {
        let obj = expect_object(v, "cone")?;
        let kind = obj
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| CliError::Input("cone: missing string key `kind`".into()))?;
        match kind {
            "orthant" => {
                check_keys(obj, &["kind", "dim"], "orthant cone")?;
                Ok(ConeFile::Orthant { dim: parse_dim(obj, "orthant cone")? })
            }
            "polyhedral" => {
                check_keys(obj, &["kind", "dim", "generators", "facets"], "polyhedral cone")?;
                let dim = parse_dim(obj, "polyhedral cone")?;
                let generators = obj
                    .get("generators")
                    .map(|g| parse_real_rows(g, "polyhedral cone generators"))
                    .transpose()?;
                let facets = obj
                    .get("facets")
                    .map(|h| parse_real_rows(h, "polyhedral cone facets"))
                    .transpose()?;
                if generators.is_none() && facets.is_none() {
                    return input("polyhedral cone: needs `generators` or `facets`".into());
                }
                Ok(ConeFile::Polyhedral { dim, generators, facets })
            }
            "complexified" => {
                check_keys(obj, &["kind", "base"], "complexified cone")?;
                let base = obj
                    .get("base")
                    .ok_or_else(|| CliError::Input("complexified cone: missing key `base`".into()))?;
                Ok(ConeFile::Complexified { base: Box::new(ConeFile::from_value(base)?) })
            }
            "transformed" => {
                check_keys(obj, &["kind", "transform", "base"], "transformed cone")?;
                let transform = obj.get("transform").ok_or_else(|| {
                    CliError::Input("transformed cone: missing key `transform`".into())
                })?;
                let base = obj
                    .get("base")
                    .ok_or_else(|| CliError::Input("transformed cone: missing key `base`".into()))?;
                Ok(ConeFile::Transformed {
                    transform: parse_pair_rows(transform, "transformed cone transform")?,
                    base: Box::new(ConeFile::from_value(base)?),
                })
            }
            other => input(format!(
                "cone: unknown kind `{other}` (expected orthant, polyhedral, complexified, or transformed)"
            )),
        }
    }

    /// The canonical JSON form of this description.
    pub fn to_value(&self) -> Value {
        match self {
            ConeFile::Orthant { dim } => {
                let mut obj = Map::new();
                obj.insert("kind".into(), Value::from("orthant"));
                obj.insert("dim".into(), Value::from(*dim as u64));
                Value::Object(obj)
            }
            ConeFile::Polyhedral { dim, generators, facets } => {
                let mut obj = Map::new();
                obj.insert("kind".into(), Value::from("polyhedral"));
                obj.insert("dim".into(), Value::from(*dim as u64));
                if let Some(g) = generators {
                    obj.insert("generators".into(), real_rows_value(g));
                }
                if let Some(h) = facets {
                    obj.insert("facets".into(), real_rows_value(h));
                }
                Value::Object(obj)
            }
            ConeFile::Complexified { base } => {
                let mut obj = Map::new();
                obj.insert("kind".into(), Value::from("complexified"));
                obj.insert("base".into(), base.to_value());
                Value::Object(obj)
            }
            ConeFile::Transformed { transform, base } => {
                let mut obj = Map::new();
                obj.insert("kind".into(), Value::from("transformed"));
                obj.insert("transform".into(), pair_rows_value(transform));
                obj.insert("base".into(), base.to_value());
                Value::Object(obj)
            }
        }
    }

    /// Constructs the cone, validating pointedness, solidity, and
    /// conditioning against the given profile.
    pub fn build(&self, tol: &ToleranceProfile) -> Result<ConeSpec, CliError> {
        match self {
            ConeFile::Orthant { dim } => ConeSpec::orthant(*dim).map_err(crate::classify),
            ConeFile::Polyhedral { dim, generators, facets } => {
                ConeSpec::polyhedral(*dim, generators.clone(), facets.clone(), tol)
                    .map_err(crate::classify)
            }
            ConeFile::Complexified { base } => {
                ConeSpec::complexified(base.build(tol)?).map_err(crate::classify)
            }
            ConeFile::Transformed { transform, base } => {
                let t = matrix_from_pairs(transform)?;
                ConeSpec::transformed(t, base.build(tol)?, tol).map_err(crate::classify)
            }
        }
    }

    /// Recovers a file description from a built cone. `None` for cones that
    /// have no file form (subspace sections, which only arise as
    /// intermediate values inside the library).
    pub fn from_cone(spec: &ConeSpec) -> Option<ConeFile> {
        match spec.kind_name() {
            "orthant" => Some(ConeFile::Orthant { dim: spec.dim() }),
            "polyhedral" => Some(ConeFile::Polyhedral {
                dim: spec.dim(),
                generators: spec.real_generators().ok(),
                facets: spec.real_facets().ok(),
            }),
            "complexified" => {
                let base = ConeFile::from_cone(spec.complexified_base()?)?;
                Some(ConeFile::Complexified { base: Box::new(base) })
            }
            "transformed" => {
                let (transform, _, base) = spec.transformed_parts()?;
                let base = ConeFile::from_cone(base)?;
                Some(ConeFile::Transformed {
                    transform: matrix_to_pairs(transform),
                    base: Box::new(base),
                })
            }
            _ => None,
        }
    }
}

fn real_rows_value(rows: &[Vec<f64>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|&x| Value::from(x)).collect()))
            .collect(),
    )
}

fn pair_rows_value(rows: &[Vec<[f64; 2]>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|p| Value::Array(vec![Value::from(p[0]), Value::from(p[1])]))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// The field names of a full tolerance profile, for unknown-key rejection.
fn profile_keys() -> Vec<String> {
    match serde_json::to_value(ToleranceProfile::default_profile()) {
        Ok(Value::Object(obj)) => obj.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

fn parse_tolerances(v: &Value) -> Result<ToleranceSpec, CliError> {
    match v {
        Value::String(name) => Ok(ToleranceSpec::Name(name.clone())),
        Value::Object(obj) => {
            let allowed = profile_keys();
            for k in obj.keys() {
                if !allowed.iter().any(|a| a == k) {
                    return input(format!(
                        "tolerances: unknown key `{k}` (allowed keys: {})",
                        allowed.join(", ")
                    ));
                }
            }
            let profile: ToleranceProfile = serde_json::from_value(v.clone())
                .map_err(|e| CliError::Input(format!("tolerances: {e}")))?;
            Ok(ToleranceSpec::Full(profile))
        }
        _ => input("tolerances: expected a profile name or a profile object".into()),
    }
}

/// Parses an instance file. JSON syntax errors carry the line and column;
/// semantic errors name the offending key or entry. The matrix is validated
/// square here; cone/matrix dimension compatibility is checked by the
/// caller once the cone is built.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, CliError> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let obj = expect_object(&root, "instance")?;
    check_keys(obj, &["matrix", "cone", "seed", "tolerances"], "instance")?;

    let matrix_value = obj
        .get("matrix")
        .ok_or_else(|| CliError::Input("instance: missing key `matrix`".into()))?;
    let rows = parse_pair_rows(matrix_value, "matrix")?;
    let matrix = matrix_from_pairs(&rows)?;
    if !matrix.is_square() {
        return input(format!(
            "matrix must be square, got {} rows by {} columns",
            matrix.nrows(),
            matrix.ncols()
        ));
    }

    let cone_value = obj
        .get("cone")
        .ok_or_else(|| CliError::Input("instance: missing key `cone`".into()))?;
    let cone = ConeFile::from_value(cone_value)?;

    let seed = match obj.get("seed") {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| CliError::Input("seed: expected a nonnegative integer".into()))?,
        ),
    };

    let tolerances = obj.get("tolerances").map(parse_tolerances).transpose()?;

    Ok(ParsedInstance { matrix, cone, seed, tolerances })
}

/// The canonical JSON value of an instance. Tolerance overrides are
/// emitted as given (name or full object).
pub fn instance_value(
    matrix: &CMatrix,
    cone: &ConeFile,
    seed: Option<u64>,
    tolerances: Option<&ToleranceSpec>,
) -> Value {
    let mut obj = Map::new();
    obj.insert("matrix".into(), pair_rows_value(&matrix_to_pairs(matrix)));
    obj.insert("cone".into(), cone.to_value());
    if let Some(s) = seed {
        obj.insert("seed".into(), Value::from(s));
    }
    match tolerances {
        Some(ToleranceSpec::Name(n)) => {
            obj.insert("tolerances".into(), Value::from(n.as_str()));
        }
        Some(ToleranceSpec::Full(p)) => {
            if let Ok(v) = serde_json::to_value(p) {
                obj.insert("tolerances".into(), v);
            }
        }
        None => {}
    }
    Value::Object(obj)
}

/// Parses an initial-state flag: comma-separated components, each either
/// `re` or `re:im`. The component count must match `dim`.
pub fn parse_state(spec: &str, dim: usize) -> Result<CVector, CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != dim {
        return input(format!(
            "initial state has {} components, the instance needs {dim}",
            parts.len()
        ));
    }
    let mut data = Vec::with_capacity(dim);
    for (k, part) in parts.iter().enumerate() {
        let part = part.trim();
        let (re_str, im_str) = match part.split_once(':') {
            Some((r, i)) => (r, Some(i)),
            None => (part, None),
        };
        let re: f64 = re_str
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("initial state component {k}: bad number `{re_str}`")))?;
        let im: f64 = match im_str {
            Some(s) => s.trim().parse().map_err(|_| {
                CliError::Input(format!("initial state component {k}: bad number `{s}`"))
            })?,
            None => 0.0,
        };
        if !(re.is_finite() && im.is_finite()) {
            return input(format!("initial state component {k}: non-finite value"));
        }
        data.push(c(re, im));
    }
    CVector::new(data).map_err(crate::classify)
}
