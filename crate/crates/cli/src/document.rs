//! Serialisation of computed limits.

use corona_core::io::{decimal, scalar_to_json, vec2_to_json};
use corona_core::limit::{Certificate, CoronaLimit};
use corona_core::{QuarticScalar, Rational, Vec2};
use serde_json::{json, Value};

pub const DIGITS: u32 = 12;

/// Decimal text as a JSON number, keeping every printed digit.
fn decimal_number(s: &QuarticScalar) -> Value {
    serde_json::from_str(&decimal(s, DIGITS)).expect("decimal text is a JSON number")
}

fn certificate_json(cert: &Certificate) -> Value {
    json!({
        "passed": cert.passed(),
        "checks": cert.checks.iter().map(|c| json!({
            "name": c.name.as_str(),
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn result_json(key: &str, k: &CoronaLimit, cert: &Certificate) -> String {
    let vertices = k.vertices.vertices();
    let doc = json!({
        "tiling": key,
        "name": k.tiling,
        "adjacency": k.adjacency.as_str(),
        "m": k.m,
        "vertex_count": vertices.len(),
        "vertices_exact": vertices.iter().map(vec2_to_json).collect::<Vec<_>>(),
        "vertices_approx": vertices
            .iter()
            .map(|v| json!([decimal_number(&v.x), decimal_number(&v.y)]))
            .collect::<Vec<_>>(),
        "velocities": k.velocities.len(),
        "linear_velocities": k.linear_velocities.len(),
        "eta_periods": k.eta.len(),
        "eta_depth": k.eta.depth,
        "oracle_agrees": k.oracle_agrees(),
        "certificate": certificate_json(cert),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serialisable");
    text.push('\n');
    text
}

fn coefficient_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn scalar_columns(s: &QuarticScalar) -> Vec<String> {
    s.coeffs().iter().map(coefficient_text).collect()
}

/// One vertex per row: the exact coefficients of `x` and `y`, then decimals.
pub fn result_csv(k: &CoronaLimit) -> String {
    let mut out = String::from("x_1,x_sqrt2,x_sqrt3,x_sqrt6,y_1,y_sqrt2,y_sqrt3,y_sqrt6,x,y\n");
    for v in k.vertices.vertices() {
        let mut row = scalar_columns(&v.x);
        row.extend(scalar_columns(&v.y));
        row.push(decimal(&v.x, DIGITS));
        row.push(decimal(&v.y, DIGITS));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// A point as exact JSON, for human-readable reports.
pub fn point_text(v: &Vec2) -> String {
    vec2_to_json(v).to_string()
}

pub fn scalar_text(s: &QuarticScalar) -> String {
    scalar_to_json(s).to_string()
}
