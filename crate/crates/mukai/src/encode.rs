//! JSON encodings for lattice data: integers as numbers when they fit in
//! `i64` and as decimal strings otherwise, rationals as `"p/q"` strings.

use mukai_core::{Int, MukaiVector, NsClass, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub fn int(n: &Int) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

pub fn ints<'a>(ns: impl IntoIterator<Item = &'a Int>) -> Value {
    Value::Array(ns.into_iter().map(int).collect())
}

pub fn rational(q: &Rational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

pub fn class(d: &NsClass) -> Value {
    json!({ "basis": d.basis().tag(), "coeffs": ints(&d.coeffs()) })
}

pub fn vector(v: &MukaiVector) -> Value {
    json!({ "r": int(&v.rank), "c1": class(&v.c1), "s": int(&v.s) })
}

pub fn opt_int(n: &Option<Int>) -> Value {
    n.as_ref().map_or(Value::Null, int)
}
