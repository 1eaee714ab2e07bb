//! Canonical JSON for algebras, gradings and matrices. Keys are sorted and
//! scalars are written in their textual form, so equal objects serialize to
//! identical bytes.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, SuperAlgebra};
use crate::gradings::Grading;
use crate::group::{AbelianGroup, GroupElement, GroupError};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalars::{Scalar, ScalarDomain, ScalarError};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("field `{field}` should be {expected}")]
    Type {
        field: &'static str,
        expected: &'static str,
    },
    #[error("{0}")]
    Inconsistent(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, JsonError>;

pub fn scalars_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn scalars_from_json(domain: &ScalarDomain, value: &Value, field: &'static str) -> Result<Vector> {
    let items = value.as_array().ok_or(JsonError::Type {
        field,
        expected: "an array of scalar strings",
    })?;
    items
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(domain.parse_scalar(s)?),
            Value::Number(n) => Ok(domain.parse_scalar(&n.to_string())?),
            _ => Err(JsonError::Type {
                field,
                expected: "an array of scalar strings",
            }),
        })
        .collect()
}

fn field<'a>(obj: &'a Map<String, Value>, name: &'static str) -> Result<&'a Value> {
    obj.get(name).ok_or(JsonError::Missing(name))
}

fn object<'a>(value: &'a Value, what: &'static str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or(JsonError::Type {
        field: what,
        expected: "an object",
    })
}

fn usize_field(value: &Value, name: &'static str) -> Result<usize> {
    value
        .as_u64()
        .map(|x| x as usize)
        .ok_or(JsonError::Type {
            field: name,
            expected: "a non-negative integer",
        })
}

/// `{constants: [[i, j, k, "c"]], d?, dim, domain, labels, parity, unity}` with
/// zero constants omitted.
pub fn algebra_to_json(a: &SuperAlgebra) -> Value {
    let n = a.dim();
    let mut constants = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = a.constant(i, j, k);
                if !c.is_zero() {
                    constants.push(json!([i, j, k, c.to_string()]));
                }
            }
        }
    }
    let mut obj = Map::new();
    obj.insert("constants".into(), Value::Array(constants));
    if let Some(q) = a.domain().as_quadratic() {
        obj.insert("d".into(), Value::String(q.d().to_string()));
    }
    obj.insert("dim".into(), json!(n));
    obj.insert("domain".into(), Value::String(a.domain().descriptor()));
    obj.insert("labels".into(), json!(a.labels()));
    obj.insert("parity".into(), json!(a.parity()));
    obj.insert(
        "unity".into(),
        a.unity().map(|u| scalars_to_json(u)).unwrap_or(Value::Null),
    );
    Value::Object(obj)
}

pub fn algebra_from_json(value: &Value) -> Result<SuperAlgebra> {
    let obj = object(value, "algebra")?;
    let descriptor = field(obj, "domain")?.as_str().ok_or(JsonError::Type {
        field: "domain",
        expected: "a field descriptor string",
    })?;
    let domain: ScalarDomain = descriptor.parse()?;
    if let Some(d) = obj.get("d") {
        let q = domain.as_quadratic().ok_or_else(|| {
            JsonError::Inconsistent(format!("`d` given for non-quadratic domain {domain}"))
        })?;
        let text = d.as_str().ok_or(JsonError::Type {
            field: "d",
            expected: "a scalar string",
        })?;
        if &q.base().parse_scalar(text)? != q.d() {
            return Err(JsonError::Inconsistent(format!(
                "`d` = {text} disagrees with domain {domain}"
            )));
        }
    }
    let n = usize_field(field(obj, "dim")?, "dim")?;
    let parity: Vec<u8> = field(obj, "parity")?
        .as_array()
        .and_then(|xs| xs.iter().map(|x| x.as_u64().map(|p| p as u8)).collect())
        .ok_or(JsonError::Type {
            field: "parity",
            expected: "an array of 0/1",
        })?;
    if parity.len() != n || parity.iter().any(|&p| p > 1) {
        return Err(JsonError::Inconsistent("parity array does not match dim".into()));
    }
    let labels: Vec<String> = match obj.get("labels") {
        Some(v) => v
            .as_array()
            .and_then(|xs| xs.iter().map(|x| x.as_str().map(String::from)).collect())
            .ok_or(JsonError::Type {
                field: "labels",
                expected: "an array of strings",
            })?,
        None => (0..n).map(|i| format!("e{i}")).collect(),
    };
    let mut constants = vec![domain.zero(); n * n * n];
    let entries = field(obj, "constants")?.as_array().ok_or(JsonError::Type {
        field: "constants",
        expected: "an array of [i, j, k, scalar] entries",
    })?;
    for entry in entries {
        let bad = || JsonError::Type {
            field: "constants",
            expected: "an array of [i, j, k, scalar] entries",
        };
        let e = entry.as_array().filter(|e| e.len() == 4).ok_or_else(bad)?;
        let idx: Vec<usize> = e[..3]
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).filter(|&x| x < n))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        let c = scalars_from_json(&domain, &Value::Array(vec![e[3].clone()]), "constants")?;
        constants[(idx[0] * n + idx[1]) * n + idx[2]] = c[0].clone();
    }
    let unity = match obj.get("unity") {
        None | Some(Value::Null) => None,
        Some(v) => Some(scalars_from_json(&domain, v, "unity")?),
    };
    Ok(SuperAlgebra::new(&domain, parity, constants, unity, labels)?)
}

pub fn group_to_json(g: &AbelianGroup) -> Value {
    json!({ "rank": g.rank(), "torsion": g.torsion() })
}

pub fn group_from_json(value: &Value) -> Result<AbelianGroup> {
    let obj = object(value, "group")?;
    let rank = usize_field(field(obj, "rank")?, "rank")?;
    let torsion: Vec<u64> = match obj.get("torsion") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .and_then(|xs| xs.iter().map(Value::as_u64).collect())
            .ok_or(JsonError::Type {
                field: "torsion",
                expected: "an array of positive integers",
            })?,
    };
    Ok(AbelianGroup::new(rank, torsion)?)
}

/// `{components: [{degree, vectors}], group: {rank, torsion}}`, components in
/// increasing degree and each given by its echelon basis.
pub fn grading_to_json(g: &Grading) -> Value {
    let components: Vec<Value> = g
        .components()
        .iter()
        .map(|(deg, s)| {
            json!({
                "degree": deg.coords(),
                "vectors": s.basis().iter().map(|v| scalars_to_json(v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "components": components, "group": group_to_json(g.group()) })
}

pub fn grading_from_json(value: &Value, domain: &ScalarDomain, ambient: usize) -> Result<Grading> {
    let obj = object(value, "grading")?;
    let group = group_from_json(field(obj, "group")?)?;
    let comps = field(obj, "components")?.as_array().ok_or(JsonError::Type {
        field: "components",
        expected: "an array of {degree, vectors}",
    })?;
    let mut components = Vec::with_capacity(comps.len());
    for c in comps {
        let c = object(c, "components")?;
        let degree: Vec<i64> = field(c, "degree")?
            .as_array()
            .and_then(|xs| xs.iter().map(Value::as_i64).collect())
            .ok_or(JsonError::Type {
                field: "degree",
                expected: "an array of integers",
            })?;
        let degree: GroupElement = group.element(&degree)?;
        let vectors = field(c, "vectors")?.as_array().ok_or(JsonError::Type {
            field: "vectors",
            expected: "an array of vectors",
        })?;
        let vectors = vectors
            .iter()
            .map(|v| {
                let v = scalars_from_json(domain, v, "vectors")?;
                if v.len() != ambient {
                    return Err(JsonError::Inconsistent(format!(
                        "vector of length {} in a {ambient}-dimensional algebra",
                        v.len()
                    )));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        components.push((degree, Subspace::span(domain, ambient, vectors)));
    }
    Ok(Grading::new(&group, components))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(m.rows().iter().map(|r| scalars_to_json(r)).collect())
}

/// A matrix as a list of rows, or an object `{rows, ...}` carrying one.
pub fn matrix_from_json(value: &Value, domain: &ScalarDomain) -> Result<Matrix> {
    let rows = match value {
        Value::Object(obj) => field(obj, "rows")?,
        other => other,
    };
    let rows = rows.as_array().ok_or(JsonError::Type {
        field: "rows",
        expected: "an array of rows",
    })?;
    let rows: Vec<Vector> = rows
        .iter()
        .map(|r| scalars_from_json(domain, r, "rows"))
        .collect::<Result<_>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(JsonError::Inconsistent("rows of different lengths".into()));
    }
    Ok(Matrix::from_rows(domain, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::gradings::{gamma_k10, GradingLabel};

    #[test]
    fn algebra_round_trip() {
        for d in ["rational", "fp:5", "quad:rational:-1"] {
            let domain: ScalarDomain = d.parse().unwrap();
            let a = catalog::kac_k10(&domain).unwrap();
            let v = algebra_to_json(&a);
            let text = serde_json::to_string(&v).unwrap();
            let back = algebra_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, a);
            assert_eq!(serde_json::to_string(&algebra_to_json(&back)).unwrap(), text);
        }
    }

    #[test]
    fn keys_are_sorted() {
        let q = ScalarDomain::rational();
        let text = serde_json::to_string(&algebra_to_json(&catalog::kaplansky_k3(&q).unwrap())).unwrap();
        let keys = ["\"constants\"", "\"dim\"", "\"domain\"", "\"labels\"", "\"parity\"", "\"unity\""];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn grading_round_trip() {
        let q = ScalarDomain::rational();
        let group = AbelianGroup::new(1, vec![2]).unwrap();
        let label = GradingLabel::Second {
            g: group.element(&[1, 0]).unwrap(),
            h: group.element(&[0, 1]).unwrap(),
        };
        let g = gamma_k10(&q, &group, &label).unwrap();
        let back = grading_from_json(&grading_to_json(&g), &q, 10).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn malformed_input_is_reported() {
        let v: Value = serde_json::from_str(r#"{"domain": "fp:4", "dim": 1}"#).unwrap();
        assert!(matches!(algebra_from_json(&v), Err(JsonError::Scalar(_))));
        let v: Value = serde_json::from_str(
            r#"{"domain": "rational", "dim": 1, "parity": [0], "constants": [[0, 0, 5, "1"]]}"#,
        )
        .unwrap();
        assert!(matches!(algebra_from_json(&v), Err(JsonError::Type { .. })));
    }
}
