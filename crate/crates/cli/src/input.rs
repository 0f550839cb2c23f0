//! JSON input parsing with field-path diagnostics.

use std::path::Path;

use num_complex::Complex;
use rbf_fock::gram::KernelId;
use rbf_fock::Quaternion;
use serde_json::Value;

use crate::CliError;

pub type C = Complex<f64>;
pub type Q = Quaternion<f64>;

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Schema(format!(
            "{}: line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn schema(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Schema(format!("{path}: {msg}"))
}

pub fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| schema(path, format!("missing field `{key}`")))
}

pub fn reject_unknown(v: &Value, allowed: &[&str], path: &str) -> Result<(), CliError> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(path, format!("unknown field `{key}`, expected one of {allowed:?}")));
        }
    }
    Ok(())
}

pub fn real(v: &Value, path: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| schema(path, "expected a number"))
}

pub fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

pub fn usize_value(v: &Value, path: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

/// A number, or `[re, im]`.
pub fn complex(v: &Value, path: &str) -> Result<C, CliError> {
    if let Some(x) = v.as_f64() {
        return Ok(C::new(x, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(C::new(real(re, &format!("{path}[0]"))?, real(im, &format!("{path}[1]"))?)),
        _ => Err(schema(path, "expected a number or [re, im]")),
    }
}

/// A number, or `[w, x, y, z]`.
pub fn quaternion(v: &Value, path: &str) -> Result<Q, CliError> {
    if let Some(x) = v.as_f64() {
        return Ok(Q::real(x));
    }
    match v.as_array().map(Vec::as_slice) {
        Some(items @ [_, _, _, _]) => {
            let mut a = [0.0; 4];
            for (k, item) in items.iter().enumerate() {
                a[k] = real(item, &format!("{path}[{k}]"))?;
            }
            Ok(Q::from_array(a))
        }
        _ => Err(schema(path, "expected a number or [w, x, y, z]")),
    }
}

/// A number (one coordinate) or an array of numbers.
pub fn real_point(v: &Value, path: &str) -> Result<Vec<f64>, CliError> {
    if let Some(x) = v.as_f64() {
        return Ok(vec![x]);
    }
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, x)| real(x, &format!("{path}[{k}]")))
        .collect()
}

/// An array of complex coordinates.
pub fn complex_point(v: &Value, path: &str) -> Result<Vec<C>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, x)| complex(x, &format!("{path}[{k}]")))
        .collect()
}

/// Kernel selector: a kernel id as JSON (`"complex-rbf"`, `{"polynomial": 2}`)
/// or the extra name `"fock"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelChoice {
    Id(KernelId),
    Fock,
}

impl KernelChoice {
    pub fn from_json(v: &Value, path: &str) -> Result<Self, CliError> {
        if v.as_str() == Some("fock") {
            return Ok(Self::Fock);
        }
        serde_json::from_value(v.clone())
            .map(Self::Id)
            .map_err(|e| schema(path, format!("unknown kernel: {e}")))
    }

    /// `name` or `name:arg`, as given on the command line.
    pub fn from_flag(s: &str) -> Result<Self, CliError> {
        let v = match s.split_once(':') {
            Some((name, arg)) => {
                let n: u64 = arg
                    .parse()
                    .map_err(|_| schema("--kernel", format!("bad argument `{arg}`")))?;
                serde_json::json!({ name: n })
            }
            None => Value::String(s.to_string()),
        };
        Self::from_json(&v, "--kernel")
    }

    pub fn name(&self) -> String {
        match self {
            Self::Id(id) => id.name(),
            Self::Fock => "fock".into(),
        }
    }
}

/// Inline complex point, `re,im;re,im;...`.
pub fn parse_complex_flag(s: &str, flag: &str) -> Result<Vec<C>, CliError> {
    s.split(';')
        .map(|coord| {
            let parts: Vec<_> = coord.split(',').map(str::trim).collect();
            let num = |t: &str| {
                t.parse::<f64>()
                    .map_err(|_| schema(flag, format!("bad number `{t}`")))
            };
            match parts.as_slice() {
                [re] => Ok(C::new(num(re)?, 0.0)),
                [re, im] => Ok(C::new(num(re)?, num(im)?)),
                _ => Err(schema(flag, "expected re,im")),
            }
        })
        .collect()
}

/// Inline quaternion, `w,x,y,z`.
pub fn parse_quaternion_flag(s: &str, flag: &str) -> Result<Q, CliError> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| schema(flag, format!("bad number `{t}`"))))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[w, x, y, z] => Ok(Q::new(w, x, y, z)),
        _ => Err(schema(flag, "expected w,x,y,z")),
    }
}

/// `a,b` range.
pub fn parse_range(s: &str, flag: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| schema(flag, format!("bad number `{t}`"))))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(schema(flag, "expected min,max")),
    }
}

/// `{"min": a, "max": b, "steps": n}` as an evenly spaced list.
pub fn linspace_json(v: &Value, path: &str) -> Result<Vec<f64>, CliError> {
    reject_unknown(v, &["min", "max", "steps"], path)?;
    let a = real(field(v, "min", path)?, &format!("{path}.min"))?;
    let b = real(field(v, "max", path)?, &format!("{path}.max"))?;
    let n = usize_value(field(v, "steps", path)?, &format!("{path}.steps"))?;
    if n == 0 {
        return Err(schema(&format!("{path}.steps"), "must be at least 1"));
    }
    Ok(linspace(a, b, n))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}
