use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{build_field, FieldElement, LocalField, LocalFieldSpec};
use crate::error::{usage, Result};
use crate::padic::PadicScalar;

/// Reads a scalar given as a JSON integer, a decimal string `"n"` or `"a/b"`,
/// or a full `{"p", "val", "unit", "prec"}` object.
pub fn parse_scalar(p: u64, prec: i64, v: &Value, path: &str) -> Result<PadicScalar> {
    match v {
        Value::Number(n) => {
            let n = n.as_i64().ok_or_else(|| usage!("{path}: {n} is not an integer (use a decimal string for big values)"))?;
            Ok(PadicScalar::from_int(p, n, prec))
        }
        Value::String(s) => {
            let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|_| usage!("{path}: {s:?} is not an integer or fraction"));
            match s.split_once('/') {
                Some((a, b)) => PadicScalar::from_rational(p, parse(a)?, parse(b)?, prec)
                    .map_err(|e| usage!("{path}: {}", e.message())),
                None => Ok(PadicScalar::from_int(p, parse(s)?, prec)),
            }
        }
        Value::Object(_) => {
            let x: PadicScalar = serde_json::from_value(v.clone()).map_err(|e| usage!("{path}: {e}"))?;
            if x.p() != p {
                return Err(usage!("{path}: scalar is {}-adic, expected {p}-adic", x.p()));
            }
            Ok(x)
        }
        other => Err(usage!("{path}: expected a scalar, found {other}")),
    }
}

/// Wire form of [`LocalFieldSpec`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpecJson {
    pub p: u64,
    pub unramified_poly: Vec<Value>,
    pub eisenstein_poly: Vec<Vec<Value>>,
    #[serde(default)]
    pub prec: Option<i64>,
}

impl FieldSpecJson {
    /// Resolves to a spec; `prec_override` wins over the file's `prec`,
    /// which wins over `default_prec`.
    pub fn into_spec(self, prec_override: Option<i64>, default_prec: i64) -> Result<LocalFieldSpec> {
        let prec = prec_override.or(self.prec).unwrap_or(default_prec);
        let p = self.p;
        let g = self
            .unramified_poly
            .iter()
            .enumerate()
            .map(|(j, v)| parse_scalar(p, prec, v, &format!("unramified_poly[{j}]")))
            .collect::<Result<_>>()?;
        let e = self
            .eisenstein_poly
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| parse_scalar(p, prec, v, &format!("eisenstein_poly[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(LocalFieldSpec { p, unramified_poly: g, eisenstein_poly: e, prec })
    }

    pub fn from_spec(spec: &LocalFieldSpec) -> Self {
        let enc = |c: &PadicScalar| serde_json::to_value(c).expect("scalar serializes");
        FieldSpecJson {
            p: spec.p,
            unramified_poly: spec.unramified_poly.iter().map(enc).collect(),
            eisenstein_poly: spec.eisenstein_poly.iter().map(|row| row.iter().map(enc).collect()).collect(),
            prec: Some(spec.prec),
        }
    }
}

impl LocalField {
    pub fn from_json(v: &Value, prec_override: Option<i64>, default_prec: i64) -> Result<Self> {
        let wire: FieldSpecJson = serde_json::from_value(v.clone()).map_err(|e| usage!("field spec: {e}"))?;
        build_field(wire.into_spec(prec_override, default_prec)?)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(FieldSpecJson::from_spec(self.spec())).expect("spec serializes")
    }

    /// Reads an element: `{"coeffs": [[...], ...]}` row-major in `(j, i)`,
    /// or a bare scalar for an element of `Q_p`.
    pub fn element_from_json(&self, v: &Value, path: &str) -> Result<FieldElement> {
        let (p, prec) = (self.p(), self.prec());
        match v {
            Value::Object(map) if map.contains_key("coeffs") => {
                if let Some(extra) = map.keys().find(|k| *k != "coeffs") {
                    return Err(usage!("{path}: unknown key {extra:?} in field element"));
                }
                let rows = map["coeffs"].as_array().ok_or_else(|| usage!("{path}.coeffs: expected an array of rows"))?;
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(j, row)| {
                        let row = row.as_array().ok_or_else(|| usage!("{path}.coeffs[{j}]: expected an array"))?;
                        row.iter()
                            .enumerate()
                            .map(|(i, c)| parse_scalar(p, prec, c, &format!("{path}.coeffs[{j}][{i}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.element(rows).map_err(|e| usage!("{path}.{}", e.message()))
            }
            _ => Ok(self.from_scalar(&parse_scalar(p, prec, v, path)?)),
        }
    }
}

impl FieldElement {
    pub fn to_json(&self) -> Value {
        json!({ "coeffs": self.rows() })
    }
}
