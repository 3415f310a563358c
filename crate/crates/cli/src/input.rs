use std::path::Path;

use serde_json::Value;
use senlab_core::field::{parse_scalar, LocalField};
use senlab_core::padic::{PadicScalar, DEFAULT_PRECISION};
use senlab_core::{Error, Exec, Result};

use crate::cli::{Cli, FieldArg};

/// Global settings shared by every subcommand.
pub struct Ctx {
    pub prec: Option<i64>,
    pub default_prec: i64,
    pub trunc: Option<usize>,
    pub exec: Exec,
}

impl Ctx {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let default_prec = match std::env::var("SENLAB_PREC") {
            Ok(s) => s.trim().parse().map_err(|_| Error::Usage(format!("SENLAB_PREC={s:?} is not an integer")))?,
            Err(_) => DEFAULT_PRECISION,
        };
        if let Some(p) = cli.prec {
            if p < 1 {
                return Err(Error::Usage(format!("--prec must be positive, got {p}")));
            }
        }
        let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
        Ok(Ctx { prec: cli.prec, default_prec, trunc: cli.trunc, exec })
    }

    pub fn prec(&self) -> i64 {
        self.prec.unwrap_or(self.default_prec)
    }
}

/// A JSON argument: an existing file path, otherwise inline JSON, otherwise a bare string.
pub fn load(arg: &str, what: &str) -> Result<Value> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{what}: cannot read {arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| Error::Usage(format!("{what}: {arg} is not valid JSON: {e}")));
    }
    match serde_json::from_str(arg) {
        Ok(v) => Ok(v),
        Err(_) if !arg.trim_start().starts_with(['{', '[']) => Ok(Value::String(arg.to_string())),
        Err(e) => Err(Error::Usage(format!("{what}: not a file and not valid JSON: {e}"))),
    }
}

/// The prime of the first full scalar object found in `v`.
fn find_prime(v: &Value) -> Option<u64> {
    match v {
        Value::Object(m) if m.contains_key("unit") => m.get("p").and_then(Value::as_u64),
        Value::Object(m) => m.values().find_map(find_prime),
        Value::Array(a) => a.iter().find_map(find_prime),
        _ => None,
    }
}

/// `--field`, else a `"field"` entry of an input, else `Q_p` from `--p` or
/// from the prime carried by the inputs' scalars.
pub fn resolve_field(arg: &FieldArg, inputs: &[&Value], ctx: &Ctx) -> Result<LocalField> {
    if let Some(f) = &arg.field {
        return LocalField::from_json(&load(f, "--field")?, ctx.prec, ctx.default_prec);
    }
    if let Some(spec) = inputs.iter().find_map(|v| v.get("field")) {
        return LocalField::from_json(spec, ctx.prec, ctx.default_prec);
    }
    let p = arg
        .p
        .or_else(|| inputs.iter().find_map(|v| find_prime(v)))
        .ok_or_else(|| Error::Usage("no field: pass --field, or --p for Q_p".into()))?;
    LocalField::qp(p, ctx.prec())
}

pub fn scalar(p: Option<u64>, v: &Value, path: &str, ctx: &Ctx) -> Result<PadicScalar> {
    let p = p.or_else(|| find_prime(v)).ok_or_else(|| Error::Usage(format!("{path}: pass --p or give a full scalar object")))?;
    // an explicit --prec may only lower the precision a scalar carries
    let x = parse_scalar(p, ctx.prec(), v, path)?;
    Ok(match ctx.prec {
        Some(prec) => x.with_prec(prec),
        None => x,
    })
}
