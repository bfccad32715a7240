//! JSON forms of core values. Rationals and floats are strings so that
//! nothing is rounded through f64.

use pcf_core::algsets::{BelyiCertificate, BelyiStep, FiniteAlgebraicSet};
use pcf_core::certificate::{Certificate, Method};
use pcf_core::construct::MapCoeffs;
use pcf_core::exact::{format_poly, format_rational};
use pcf_core::numeric::{ComplexMP, SpherePoint};
use pcf_core::passports::{Constellation, Partition, Passport, Perm};
use rug::Float;
use serde_json::{json, Value};

/// Significant digits printed for multiprecision floats.
const DIGITS: usize = 30;

pub fn float(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2) as usize + 1;
    x.to_string_radix(10, Some(digits.min(DIGITS)))
}

pub fn complex(z: &ComplexMP) -> Value {
    json!([float(z.real()), float(z.imag())])
}

pub fn sphere(p: &SpherePoint) -> Value {
    match p.as_finite() {
        Some(z) => complex(z),
        None => json!("inf"),
    }
}

/// Small residuals as short scientific strings.
pub fn sci(x: f64) -> Value {
    json!(format!("{x:.3e}"))
}

pub fn set(s: &FiniteAlgebraicSet) -> Value {
    let mut v = json!({
        "defining": format_poly(s.defining()),
        "infinity": s.contains_infinity(),
        "size": s.size(),
    });
    if let Some(pts) = s.rational_points() {
        v["points"] = pts.iter().map(format_rational).collect();
    }
    v
}

pub fn coeffs(m: &MapCoeffs) -> Value {
    match m {
        MapCoeffs::Exact(p) => json!({"exact": true, "coeffs": format_poly(p)}),
        MapCoeffs::Numeric(p) => json!({
            "exact": false,
            "coeffs": p.coeffs.iter().map(complex).collect::<Vec<_>>(),
        }),
    }
}

pub fn certificate(c: &Certificate) -> Value {
    json!({
        "subject": c.subject,
        "verdict": c.verdict(),
        "claims": c.claims.iter().map(|cl| {
            let mut v = json!({"statement": cl.statement, "verdict": cl.verdict});
            match cl.method {
                Method::Exact => v["method"] = json!("exact"),
                Method::Numeric { bound } => {
                    v["method"] = json!("numeric");
                    v["bound"] = sci(bound);
                }
            }
            if let Some(r) = cl.residual {
                v["residual"] = sci(r);
            }
            v
        }).collect::<Vec<_>>(),
        "notes": c.notes,
    })
}

fn step(s: &BelyiStep) -> Value {
    match s {
        BelyiStep::Cofactor(p) => json!({"cofactor": format_poly(p)}),
        BelyiStep::Affine { a, b } => json!({"affine": [format_rational(a), format_rational(b)]}),
        BelyiStep::Fold { p, r, m, n } => json!({"fold": {
            "p": format_rational(p), "r": format_rational(r), "m": m, "n": n,
        }}),
        BelyiStep::Square { c } => json!({"square": format_rational(c)}),
    }
}

pub fn belyi(b: &BelyiCertificate) -> Value {
    json!({
        "beta": format_poly(&b.beta),
        "degree": b.degree,
        "verdict": b.verdict(),
        "image_check": b.image_check.verdict,
        "critval_check": b.critval_check.verdict,
        "steps": b.steps.iter().map(step).collect::<Vec<_>>(),
    })
}

pub fn partition(p: &Partition) -> Value {
    json!(p.parts())
}

pub fn passport(p: &Passport) -> Value {
    json!({
        "degree": p.degree(),
        "partitions": p.partitions().iter().map(partition).collect::<Vec<_>>(),
        "c_value": p.c_value(),
        "polynomial": p.is_polynomial(),
    })
}

pub fn perm(p: &Perm) -> Value {
    json!(p.cycles())
}

/// Polynomial constellations omit the permutation over `∞`; it is shown as
/// `closing` and included in the genus.
pub fn constellation(c: &Constellation) -> Value {
    let product = c.product();
    let mut v = json!({
        "degree": c.degree,
        "perms": c.perms.iter().map(perm).collect::<Vec<_>>(),
        "product_identity": product.is_identity(),
        "transitive": c.is_transitive(),
        "passport": passport(&c.passport()),
    });
    let closed = if product.is_identity() {
        c.clone()
    } else {
        let closing = product.inverse();
        v["closing"] = perm(&closing);
        let mut perms = c.perms.clone();
        perms.push(closing);
        Constellation { degree: c.degree, perms }
    };
    v["genus"] = json!(closed.genus_riemann_hurwitz());
    v
}

/// `key: value` lines for the text output mode.
pub fn text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text(x, &p, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object()) => {
            for (i, x) in xs.iter().enumerate() {
                text(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Complex;

    #[test]
    fn floats_are_strings() {
        let z = Complex::with_val(64, (0.5, -2));
        let v = complex(&z);
        let parts: Vec<f64> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect();
        assert_eq!(parts, vec![0.5, -2.0]);
        let third = Float::with_val(256, 1) / 3u32;
        assert_eq!(float(&third), format!("3.{}e-1", "3".repeat(29)));
        assert_eq!(sphere(&SpherePoint::Infinity), json!("inf"));
    }

    #[test]
    fn text_lines() {
        let mut s = String::new();
        text(&json!({"a": {"b": 1, "c": "x"}, "d": [{"e": true}]}), "", &mut s);
        assert_eq!(s, "a.b: 1\na.c: x\nd[0].e: true\n");
    }
}
