//! Input formats: sets, points, label maps, partitions.

use pcf_core::algsets::FiniteAlgebraicSet;
use pcf_core::exact::{parse_poly, parse_rational};
use pcf_core::numeric::SpherePoint;
use pcf_core::passports::Partition;
use pcf_core::{Error, Result};
use rug::{Complex, Float};
use serde_json::Value;

fn json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        token: text.chars().skip(e.column().saturating_sub(1)).take(12).collect(),
        position: e.column().saturating_sub(1),
        message: e.to_string(),
    })
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// `{"points": ["0","1/3"], "infinity": false}` or
/// `{"defining": "-2,0,1", "infinity": true}`.
pub fn set(text: &str) -> Result<FiniteAlgebraicSet> {
    let v = json(text)?;
    let obj = v.as_object().ok_or_else(|| invalid("set must be a JSON object"))?;
    let infinity = match obj.get("infinity") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(other) => return Err(invalid(format!("infinity must be a boolean, got {other}"))),
    };
    match (obj.get("points"), obj.get("defining")) {
        (Some(Value::Array(pts)), None) => {
            let mut qs = Vec::new();
            let mut inf = infinity;
            for p in pts {
                let s = p.as_str().ok_or_else(|| invalid(format!("point {p} must be a string")))?;
                if is_infinity(s) {
                    inf = true;
                } else {
                    qs.push(parse_rational(s)?);
                }
            }
            FiniteAlgebraicSet::from_points(&qs, inf)
        }
        (None, Some(Value::String(d))) => FiniteAlgebraicSet::from_defining(&parse_poly(d)?, infinity),
        _ => Err(invalid("set needs exactly one of \"points\" (array) or \"defining\" (string)")),
    }
}

fn is_infinity(s: &str) -> bool {
    matches!(s.trim(), "inf" | "infinity" | "∞")
}

fn real(v: &Value, prec: u32) -> Result<Float> {
    match v {
        Value::String(s) => match parse_rational(s) {
            Ok(q) => Ok(Float::with_val(prec, &q)),
            Err(_) => Float::parse(s.trim())
                .map(|p| Float::with_val(prec, p))
                .map_err(|e| invalid(format!("bad number {s:?}: {e}"))),
        },
        Value::Number(n) => n
            .as_f64()
            .map(|x| Float::with_val(prec, x))
            .ok_or_else(|| invalid(format!("bad number {n}"))),
        other => Err(invalid(format!("expected a number, got {other}"))),
    }
}

/// A JSON array of points: `"1/9"`, `"inf"`, or `["re", "im"]`.
pub fn points(text: &str, prec: u32) -> Result<Vec<SpherePoint>> {
    let v = json(text)?;
    let arr = v.as_array().ok_or_else(|| invalid("points must be a JSON array"))?;
    arr.iter()
        .map(|p| match p {
            Value::String(s) if is_infinity(s) => Ok(SpherePoint::Infinity),
            Value::Array(pair) if pair.len() == 2 => Ok(SpherePoint::Finite(Complex::with_val(
                prec,
                (real(&pair[0], prec)?, real(&pair[1], prec)?),
            ))),
            other => Ok(SpherePoint::Finite(Complex::with_val(prec, (real(other, prec)?, 0)))),
        })
        .collect()
}

/// `"0:1,1:2,2:0"` as a total map on `0..n`.
pub fn label_map(text: &str, n: usize, default: Option<usize>) -> Result<Vec<usize>> {
    let mut out: Vec<Option<usize>> = vec![None; n];
    let mut pos = 0;
    for item in text.split(',') {
        let here = pos;
        pos += item.len() + 1;
        if item.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            token: item.to_string(),
            position: here,
            message: msg.into(),
        };
        let (a, b) = item.split_once(':').ok_or_else(|| err("expected label:value"))?;
        let a: usize = a.trim().parse().map_err(|_| err("label is not an integer"))?;
        let b: usize = b.trim().parse().map_err(|_| err("value is not an integer"))?;
        if a >= n {
            return Err(err("label out of range"));
        }
        out[a] = Some(b);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.or(default).ok_or_else(|| invalid(format!("label {i} has no value"))))
        .collect()
}

/// `[[2,1],[3],[]]`.
pub fn partitions(text: &str) -> Result<Vec<Partition>> {
    let v = json(text)?;
    let arr = v.as_array().ok_or_else(|| invalid("partitions must be an array of arrays"))?;
    arr.iter()
        .map(|p| {
            let parts = p
                .as_array()
                .ok_or_else(|| invalid(format!("partition {p} must be an array")))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .filter(|&k| (1..=u32::MAX as u64).contains(&k))
                        .map(|k| k as u32)
                        .ok_or_else(|| invalid(format!("part {x} must be a positive integer")))
                })
                .collect::<Result<Vec<u32>>>()?;
            Partition::new(parts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets() {
        let s = set(r#"{"points":["0","1","1/3"]}"#).unwrap();
        assert_eq!(s.size(), 3);
        let s = set(r#"{"defining":"-2,0,1","infinity":true}"#).unwrap();
        assert!(s.contains_infinity());
        assert!(set(r#"{"points":["0","1/0"]}"#).is_err());
        assert!(set("[1,2]").is_err());
    }

    #[test]
    fn maps() {
        assert_eq!(label_map("0:1,1:2,2:0", 3, None).unwrap(), vec![1, 2, 0]);
        assert_eq!(label_map("1:3", 3, Some(1)).unwrap(), vec![1, 3, 1]);
        match label_map("0:1,x:2", 3, None) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn point_lists() {
        let p = points(r#"["0","1","inf",["0.5","-1/4"]]"#, 64).unwrap();
        assert!(p[2].is_infinity());
        assert_eq!(p[3].to_f64_pair(), Some((0.5, -0.25)));
    }

    #[test]
    fn partition_lists() {
        let p = partitions("[[2,1],[3],[]]").unwrap();
        assert_eq!(p.len(), 3);
        assert!(p[2].is_empty());
        assert!(partitions("[[0]]").is_err());
    }
}
