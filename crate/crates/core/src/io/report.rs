//! JSON encoding of results. Exact numbers are strings; polynomials are term
//! lists in descending graded order.

use serde_json::{json, Map, Value};

use crate::engine::annihilator::{Annihilator, Search};
use crate::gaussian::GaussianRational as GR;
use crate::linalg::Matrix;
use crate::poly::{MultiPolynomial, RationalFunction, TruncatedSeries};

pub const SCHEMA_VERSION: &str = "1.0";

pub fn gr(x: &GR) -> Value {
    Value::String(x.to_string())
}

pub fn vector(v: &[GR]) -> Value {
    Value::Array(v.iter().map(gr).collect())
}

pub fn rows(r: &[Vec<GR>]) -> Value {
    Value::Array(r.iter().map(|v| vector(v)).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    rows(&m.to_rows())
}

fn terms<'a>(it: impl DoubleEndedIterator<Item = (&'a crate::poly::Monomial, &'a GR)>) -> Value {
    Value::Array(it.rev().map(|(m, c)| json!({"coeff": c.to_string(), "exps": m.exps()})).collect())
}

pub fn polynomial(p: &MultiPolynomial) -> Value {
    json!({
        "vars": p.table().names(),
        "terms": terms(p.terms()),
        "text": p.to_string(),
    })
}

pub fn series(s: &TruncatedSeries) -> Value {
    json!({
        "vars": s.table().names(),
        "order": s.order(),
        "terms": terms(s.terms()),
    })
}

pub fn rational(r: &RationalFunction) -> Value {
    json!({"numerator": polynomial(r.numerator()), "denominator": polynomial(r.denominator())})
}

pub fn searched(s: &[(u32, u32)]) -> Value {
    Value::Array(s.iter().map(|(q, k)| json!([q, k])).collect())
}

pub fn annihilator(a: &Annihilator) -> Value {
    json!({
        "status": "found",
        "polynomial": polynomial(&a.poly),
        "q": a.q,
        "k": a.k,
        "order": a.order,
        "kernel_dim": a.kernel_dim,
        "searched": searched(&a.searched),
    })
}

pub fn search(s: &Search) -> Value {
    match s {
        Search::Found(a) => annihilator(a),
        Search::NotFound { searched: sr } => json!({"status": "not_found", "searched": searched(sr)}),
    }
}

/// Top-level object: `schema_version`, `command`, then the body's fields.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
    m.insert("command".into(), Value::String(command.into()));
    if let Value::Object(b) = body {
        for (k, v) in b {
            m.insert(k, v);
        }
    } else {
        m.insert("result".into(), body);
    }
    Value::Object(m)
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}
