//! Textual encodings: exact scalars, tiling files and decimal rendering.
//!
//! A scalar `a + b√2 + c√3 + d√6` is written `[a, b, c, d]`, each coefficient
//! either a bare integer or a reduced fraction `[n, d]` with `d > 0`. A scalar
//! that is an integer may be written as that bare integer. A point is `[x, y]`.
//!
//! A tiling file is a JSON object
//! `{ "name": …, "basis": [v, v], "prototiles": [{ "vertices": [v, …] }, …] }`
//! with an optional `"star"`: one list per prototile of `[j, a, b]` entries,
//! meaning tile `(i, c)` is adjacent to `(j, c + (a, b))`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde_json::{json, Value};
use thiserror::Error;

use crate::geometry::{GeometryError, Polygon};
use crate::scalar::{QuarticScalar, Rational};
use crate::tiling::{AdjacencyKind, AdjacencyStar, StarEntry, TilingError, TilingSpec};
use crate::vector::Vec2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error("{path}: {source}")]
    Geometry { path: String, source: GeometryError },
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

fn shape(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Shape {
        path: path.to_string(),
        message: message.into(),
    }
}

fn int_from_json(v: &Value, path: &str) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| shape(path, format!("expected an integer, found {n}"))),
        other => Err(shape(path, format!("expected an integer, found {other}"))),
    }
}

fn coefficient_from_json(v: &Value, path: &str) -> Result<Rational, FormatError> {
    match v {
        Value::Number(_) => Ok(Rational::from_integer(int_from_json(v, path)?)),
        Value::Array(pair) if pair.len() == 2 => {
            let n = int_from_json(&pair[0], &format!("{path}[0]"))?;
            let d = int_from_json(&pair[1], &format!("{path}[1]"))?;
            if !d.is_positive() {
                return Err(shape(path, "denominator must be positive"));
            }
            if !n.gcd(&d).is_one() {
                return Err(shape(path, "fraction must be in lowest terms"));
            }
            Ok(Rational::new_raw(n, d))
        }
        other => Err(shape(path, format!("expected an integer or [numerator, denominator], found {other}"))),
    }
}

pub fn scalar_from_json(v: &Value, path: &str) -> Result<QuarticScalar, FormatError> {
    match v {
        Value::Number(_) => Ok(QuarticScalar::from_rational(&Rational::from_integer(int_from_json(v, path)?))),
        Value::Array(items) if items.len() == 4 => {
            let c: Vec<Rational> = items
                .iter()
                .enumerate()
                .map(|(k, item)| coefficient_from_json(item, &format!("{path}[{k}]")))
                .collect::<Result<_, _>>()?;
            let [a, b, cc, d]: [Rational; 4] = c.try_into().expect("four coefficients");
            Ok(QuarticScalar::new(a, b, cc, d))
        }
        other => Err(shape(path, format!("expected a scalar [a, b, c, d], found {other}"))),
    }
}

fn coefficient_to_json(r: &Rational) -> Value {
    if r.is_integer() {
        number(r.numer())
    } else {
        json!([number(r.numer()), number(r.denom())])
    }
}

fn number(n: &BigInt) -> Value {
    serde_json::from_str(&n.to_string()).expect("integer literal is valid JSON")
}

pub fn scalar_to_json(s: &QuarticScalar) -> Value {
    if s.is_rational() && s.coeffs()[0].is_integer() {
        return number(s.coeffs()[0].numer());
    }
    Value::Array(s.coeffs().iter().map(coefficient_to_json).collect())
}

pub fn vec2_from_json(v: &Value, path: &str) -> Result<Vec2, FormatError> {
    match v {
        Value::Array(xy) if xy.len() == 2 => Ok(Vec2::new(
            scalar_from_json(&xy[0], &format!("{path}[0]"))?,
            scalar_from_json(&xy[1], &format!("{path}[1]"))?,
        )),
        other => Err(shape(path, format!("expected a point [x, y], found {other}"))),
    }
}

pub fn vec2_to_json(v: &Vec2) -> Value {
    json!([scalar_to_json(&v.x), scalar_to_json(&v.y)])
}

/// Compact one-line encoding of a scalar.
pub fn format_scalar(s: &QuarticScalar) -> String {
    scalar_to_json(s).to_string()
}

pub fn parse_scalar(text: &str) -> Result<QuarticScalar, FormatError> {
    let v: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    scalar_from_json(&v, "scalar")
}

/// A parsed tiling file.
#[derive(Clone, Debug)]
pub struct TilingFile {
    pub spec: TilingSpec,
    /// Adjacency supplied by the file, if any.
    pub star: Option<AdjacencyStar>,
}

/// Parses and validates a tiling file.
pub fn parse_tiling(text: &str) -> Result<TilingFile, FormatError> {
    let root: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let obj = root.as_object().ok_or_else(|| shape("$", "expected an object"))?;
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(shape("$.name", "expected a string")),
        None => "unnamed".to_string(),
    };
    let basis = match obj.get("basis") {
        Some(Value::Array(b)) if b.len() == 2 => [
            vec2_from_json(&b[0], "$.basis[0]")?,
            vec2_from_json(&b[1], "$.basis[1]")?,
        ],
        _ => return Err(shape("$.basis", "expected two lattice vectors")),
    };
    let protos = match obj.get("prototiles") {
        Some(Value::Array(p)) if !p.is_empty() => p,
        _ => return Err(shape("$.prototiles", "expected a nonempty list")),
    };
    let mut prototiles = Vec::with_capacity(protos.len());
    for (i, p) in protos.iter().enumerate() {
        let path = format!("$.prototiles[{i}].vertices");
        let verts = match p.get("vertices") {
            Some(Value::Array(vs)) => vs
                .iter()
                .enumerate()
                .map(|(k, v)| vec2_from_json(v, &format!("{path}[{k}]")))
                .collect::<Result<Vec<_>, _>>()?,
            _ => return Err(shape(&path, "expected a list of points")),
        };
        let poly = Polygon::new(verts).map_err(|source| FormatError::Geometry {
            path: path.clone(),
            source,
        })?;
        prototiles.push(poly);
    }
    let spec = TilingSpec::new(name, basis, prototiles).validated()?;
    let star = match obj.get("star") {
        None | Some(Value::Null) => None,
        Some(v) => Some(star_from_json(v, spec.m())?),
    };
    Ok(TilingFile { spec, star })
}

fn small_int(v: &Value, path: &str) -> Result<i64, FormatError> {
    v.as_i64().ok_or_else(|| shape(path, format!("expected a small integer, found {v}")))
}

fn star_from_json(v: &Value, m: usize) -> Result<AdjacencyStar, FormatError> {
    let lists = v
        .as_array()
        .filter(|l| l.len() == m)
        .ok_or_else(|| shape("$.star", format!("expected {m} neighbour lists, one per prototile")))?;
    let mut star = Vec::with_capacity(m);
    for (i, list) in lists.iter().enumerate() {
        let path = format!("$.star[{i}]");
        let items = list.as_array().ok_or_else(|| shape(&path, "expected a list"))?;
        let mut entries = Vec::with_capacity(items.len());
        for (k, item) in items.iter().enumerate() {
            let p = format!("{path}[{k}]");
            let t = item
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| shape(&p, "expected [prototile, a, b]"))?;
            let j = small_int(&t[0], &p)?;
            if j < 0 {
                return Err(shape(&p, "prototile index must be nonnegative"));
            }
            let a = i32::try_from(small_int(&t[1], &p)?).map_err(|_| shape(&p, "offset out of range"))?;
            let b = i32::try_from(small_int(&t[2], &p)?).map_err(|_| shape(&p, "offset out of range"))?;
            entries.push(StarEntry {
                proto: j as u32,
                offset: (a, b),
            });
        }
        star.push(entries);
    }
    Ok(AdjacencyStar::from_entries(AdjacencyKind::Custom, star)?)
}

/// Renders a tiling file; the star is included only when given.
pub fn render_tiling(spec: &TilingSpec, star: Option<&AdjacencyStar>) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("name".into(), Value::String(spec.name.clone()));
    obj.insert(
        "basis".into(),
        json!([vec2_to_json(&spec.basis[0]), vec2_to_json(&spec.basis[1])]),
    );
    obj.insert(
        "prototiles".into(),
        Value::Array(
            spec.prototiles
                .iter()
                .map(|p| json!({ "vertices": p.vertices().iter().map(vec2_to_json).collect::<Vec<_>>() }))
                .collect(),
        ),
    );
    if let Some(star) = star {
        let lists: Vec<Value> = (0..star.m())
            .map(|i| {
                Value::Array(
                    star.entries(i)
                        .iter()
                        .map(|e| json!([e.proto, e.offset.0, e.offset.1]))
                        .collect(),
                )
            })
            .collect();
        obj.insert("star".into(), Value::Array(lists));
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(obj)).expect("serialisable");
    text.push('\n');
    text
}

/// Correctly rounded decimal with `digits` significant digits (half away
/// from zero), trailing zeros trimmed. Scientific notation is used outside
/// `1e-6 ≤ |x| < 1e15`.
pub fn decimal(s: &QuarticScalar, digits: u32) -> String {
    assert!(digits > 0, "need at least one significant digit");
    if s.is_zero() {
        return "0".to_string();
    }
    let negative = s.sign() < 0;
    let x = s.abs();
    let mut e = magnitude(&x);
    let mut mantissa = round_scaled(&x, digits as i64 - 1 - e);
    if mantissa == pow10(digits as i64) {
        // rounding carried into a new digit
        e += 1;
        mantissa = pow10(digits as i64 - 1);
    }
    let mut text = mantissa.to_string();
    let body = if (-6..15).contains(&e) {
        place_point(&text, e)
    } else {
        let rest = text.split_off(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{text}e{e}")
        } else {
            format!("{text}.{rest}e{e}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn pow10(k: i64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

fn times_pow10(r: &Rational, k: i64) -> Rational {
    if k >= 0 {
        r * Rational::from_integer(pow10(k))
    } else {
        r / Rational::from_integer(pow10(-k))
    }
}

/// `floor(log10 x)` for `x > 0`.
fn magnitude(x: &QuarticScalar) -> i64 {
    let approx = x.to_f64().log10().floor() as i64;
    let mut e = approx;
    loop {
        let lo = QuarticScalar::from_rational(&times_pow10(&Rational::one(), e));
        let hi = QuarticScalar::from_rational(&times_pow10(&Rational::one(), e + 1));
        if x < &lo {
            e -= 1;
        } else if x >= &hi {
            e += 1;
        } else {
            return e;
        }
    }
}

/// `x · 10^k` rounded to the nearest integer, ties away from zero (`x > 0`).
fn round_scaled(x: &QuarticScalar, k: i64) -> BigInt {
    let y = x.scale(&times_pow10(&Rational::one(), k));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if y.is_rational() {
        let r = y.coeffs()[0].clone() + &half;
        return r.floor().to_integer();
    }
    // irrational: the enclosure eventually avoids every half-integer
    let mut eps = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
    loop {
        let (lo, hi) = y.enclosure(&eps);
        let a = (lo + &half).floor().to_integer();
        let b = (hi + &half).floor().to_integer();
        if a == b {
            return a;
        }
        eps = &eps * &eps;
    }
}

fn place_point(digits: &str, e: i64) -> String {
    let n = digits.len() as i64;
    let (int_part, frac_part) = match e.cmp(&0) {
        Ordering::Less => ("0".to_string(), format!("{}{}", "0".repeat((-e - 1) as usize), digits)),
        _ if e + 1 >= n => (format!("{}{}", digits, "0".repeat((e + 1 - n) as usize)), String::new()),
        _ => (digits[..(e + 1) as usize].to_string(), digits[(e + 1) as usize..].to_string()),
    };
    let frac = frac_part.trim_end_matches('0');
    if frac.is_empty() {
        int_part
    } else {
        format!("{int_part}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QuarticScalar as Q;
    use num_traits::Zero;

    #[test]
    fn scalar_encoding_round_trips() {
        for s in [
            Q::zero(),
            Q::from_integer(-7),
            Q::frac(3, 4),
            Q::from_ints(3, 0, 1, 0).div_int(4),
            Q::new(
                Rational::new(1.into(), 3.into()),
                Rational::from_integer((-2).into()),
                Rational::zero(),
                Rational::new((-5).into(), 7.into()),
            ),
        ] {
            assert_eq!(parse_scalar(&format_scalar(&s)).unwrap(), s);
        }
        assert_eq!(format_scalar(&Q::from_integer(5)), "5");
        assert_eq!(format_scalar(&Q::frac(1, 2)), "[[1,2],0,0,0]");
        assert_eq!(format_scalar(&Q::sqrt3()), "[0,0,1,0]");
    }

    #[test]
    fn parser_accepts_long_form() {
        let s = parse_scalar("[[3,4],[0,1],[1,4],[0,1]]").unwrap();
        assert_eq!(s, Q::from_ints(3, 0, 1, 0).div_int(4));
        let big = parse_scalar("[123456789012345678901234567890,0,0,0]").unwrap();
        assert_eq!(format_scalar(&big), "123456789012345678901234567890");
    }

    #[test]
    fn parser_rejects_bad_fractions() {
        assert!(parse_scalar("[[2,4],0,0,0]").is_err());
        assert!(parse_scalar("[[1,-2],0,0,0]").is_err());
        assert!(parse_scalar("[[1,0],0,0,0]").is_err());
        assert!(parse_scalar("[1,2,3]").is_err());
        assert!(parse_scalar("1.5").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&Q::from_integer(1), 12), "1");
        assert_eq!(decimal(&Q::frac(-1, 2), 12), "-0.5");
        assert_eq!(decimal(&Q::sqrt2(), 12), "1.41421356237");
        assert_eq!(decimal(&Q::from_ints(3, 0, 1, 0).div_int(4), 12), "1.18301270189");
        assert_eq!(decimal(&Q::frac(2, 3), 12), "0.666666666667");
        assert_eq!(decimal(&Q::frac(1, 3000000000), 3), "3.33e-10");
        assert_eq!(decimal(&Q::from_integer(999_999), 3), "1000000");
        assert_eq!(decimal(&Q::frac(5, 1000), 12), "0.005");
        assert_eq!(decimal(&Q::frac(1, 8), 2), "0.13");
    }
}
