//! Text form of rationals (`n/d`) and polynomials (comma-separated
//! coefficients, lowest degree first).

use std::str::FromStr;

use rug::Rational;

use super::poly::RatPoly;
use crate::error::{Error, Result};

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    parse_rational_at(s, 0)
}

fn parse_rational_at(s: &str, position: usize) -> Result<Rational> {
    let t = s.trim().replace('\u{2212}', "-");
    let err = |message: &str| Error::Parse {
        token: s.to_string(),
        position,
        message: message.to_string(),
    };
    if t.is_empty() {
        return Err(err("empty rational"));
    }
    let valid = t
        .chars()
        .enumerate()
        .all(|(i, c)| c.is_ascii_digit() || c == '/' || ((c == '-' || c == '+') && (i == 0 || t[..i].ends_with('/'))));
    if !valid {
        return Err(err("expected an integer or n/d"));
    }
    if let Some((_, den)) = t.split_once('/') {
        if den.trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return Err(err("zero denominator"));
        }
    }
    Rational::from_str(&t).map_err(|e| err(&e.to_string()))
}

pub fn format_poly(p: &RatPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.coeffs().iter().map(format_rational).collect::<Vec<_>>().join(",")
}

/// Parse `"c0,c1,...,cn"`; positions in errors are byte offsets.
pub fn parse_poly(s: &str) -> Result<RatPoly> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for tok in s.split(',') {
        coeffs.push(parse_rational_at(tok, offset)?);
        offset += tok.len() + 1;
    }
    Ok(RatPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = parse_poly("1/2, -3,0,22/7").unwrap();
        assert_eq!(format_poly(&p), "1/2,-3,0,22/7");
        assert_eq!(parse_poly(&format_poly(&p)).unwrap(), p);
        assert_eq!(parse_poly("−2,0,1").unwrap(), RatPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(parse_rational("6/4").unwrap(), Rational::from((3, 2)));
    }

    #[test]
    fn errors_name_token_and_position() {
        match parse_poly("1,2,x3") {
            Err(Error::Parse { token, position, .. }) => {
                assert_eq!(token, "x3");
                assert_eq!(position, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }
}
