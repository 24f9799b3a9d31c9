//! Canonical JSON: compact, keys sorted, one trailing newline. Indices in
//! element entries are 1-based; entries are sorted by `(j - i, i)` with zeros
//! omitted. `m` and `order` are decimal strings, everything else is a JSON
//! number.

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use super::{Ciphertext, PrivateKey, PublicKey};
use crate::error::{Error, Result};
use crate::utgroup::{canonical_positions, Automorphism, GroupParams, UtElement};

fn parse_err(position: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { position: position.into(), message: message.into() }
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn object<'a>(v: &'a Value, at: &str, keys: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| parse_err(at, "expected an object"))?;
    for k in keys {
        if !obj.contains_key(*k) {
            return Err(parse_err(at, format!("missing field {k:?}")));
        }
    }
    if let Some(extra) = obj.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(parse_err(at, format!("unknown field {extra:?}")));
    }
    Ok(obj)
}

fn join(at: &str, field: &str) -> String {
    if at.is_empty() {
        field.to_string()
    } else {
        format!("{at}.{field}")
    }
}

fn uint(v: &Value, at: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(at, "expected a non-negative integer"))
}

fn big_string(v: &Value, at: &str) -> Result<BigUint> {
    let s = v.as_str().ok_or_else(|| parse_err(at, "expected a decimal string"))?;
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(at, "expected a decimal string"));
    }
    Ok(s.parse().expect("digits"))
}

pub fn params_to_value(params: GroupParams) -> Value {
    json!({ "n": params.n(), "p": params.p() })
}

pub fn params_from_value(v: &Value, at: &str) -> Result<GroupParams> {
    let obj = object(v, at, &["n", "p"])?;
    let n = uint(&obj["n"], &join(at, "n"))?;
    let p = uint(&obj["p"], &join(at, "p"))?;
    let n = usize::try_from(n).map_err(|_| Error::Validation("n too large".into()))?;
    GroupParams::new(n, p)
}

pub fn element_to_value(a: &UtElement) -> Value {
    let entries: Vec<Value> = canonical_positions(a.params().n())
        .into_iter()
        .filter_map(|(i, j)| {
            let v = a.get(i, j);
            (v != 0).then(|| json!([i + 1, j + 1, v]))
        })
        .collect();
    json!({ "entries": entries })
}

pub fn element_from_value(v: &Value, params: GroupParams, at: &str) -> Result<UtElement> {
    let obj = object(v, at, &["entries"])?;
    let at_entries = join(at, "entries");
    let list = obj["entries"]
        .as_array()
        .ok_or_else(|| parse_err(&at_entries, "expected an array"))?;
    let mut triples = Vec::with_capacity(list.len());
    for (k, e) in list.iter().enumerate() {
        let here = format!("{at_entries}[{k}]");
        let t = e
            .as_array()
            .filter(|t| t.len() == 3)
            .ok_or_else(|| parse_err(&here, "expected [i, j, value]"))?;
        let i = uint(&t[0], &here)?;
        let j = uint(&t[1], &here)?;
        let value = uint(&t[2], &here)?;
        if i == 0 || j == 0 {
            return Err(Error::Validation(format!("{here}: indices are 1-based")));
        }
        if triples.iter().any(|&(a, b, _)| (a, b) == (i as usize - 1, j as usize - 1)) {
            return Err(Error::Validation(format!("{here}: duplicate entry ({i}, {j})")));
        }
        triples.push((i as usize - 1, j as usize - 1, value));
    }
    UtElement::from_entries(params, &triples)
        .map_err(|e| Error::Validation(format!("{at}: {}", strip_validation(e))))
}

fn strip_validation(e: Error) -> String {
    match e {
        Error::Validation(m) => m,
        other => other.to_string(),
    }
}

pub fn automorphism_to_value(phi: &Automorphism) -> Value {
    let images: Vec<Value> = phi.images().iter().map(element_to_value).collect();
    json!({ "images": images })
}

/// Parses generator images and checks they define an automorphism.
pub fn automorphism_from_value(v: &Value, params: GroupParams, at: &str) -> Result<Automorphism> {
    let obj = object(v, at, &["images"])?;
    let at_images = join(at, "images");
    let list = obj["images"]
        .as_array()
        .ok_or_else(|| parse_err(&at_images, "expected an array"))?;
    if list.len() != params.n() - 1 {
        return Err(Error::Validation(format!(
            "{at_images}: expected {} generator images, found {}",
            params.n() - 1,
            list.len()
        )));
    }
    let images = list
        .iter()
        .enumerate()
        .map(|(k, e)| element_from_value(e, params, &format!("{at_images}[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Automorphism::from_images(params, images).map_err(|e| match e {
        Error::NonInvertibleInducedMap => {
            Error::Validation(format!("{at}: not an automorphism: images do not generate G"))
        }
        Error::Validation(m) => Error::Validation(format!("{at}: {m}")),
        other => other,
    })
}

impl PublicKey {
    pub fn to_json(&self) -> String {
        to_text(&json!({
            "params": params_to_value(self.params()),
            "phi": automorphism_to_value(self.phi()),
            "phi_m": automorphism_to_value(self.phi_m()),
        }))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v = parse_text(text)?;
        let obj = object(&v, "", &["params", "phi", "phi_m"])?;
        let params = params_from_value(&obj["params"], "params")?;
        let phi = automorphism_from_value(&obj["phi"], params, "phi")?;
        let phi_m = automorphism_from_value(&obj["phi_m"], params, "phi_m")?;
        Self::new(phi, phi_m)
    }
}

impl PrivateKey {
    pub fn to_json(&self) -> String {
        to_text(&json!({
            "m": self.m().to_string(),
            "order": self.order().to_string(),
            "params": params_to_value(self.params()),
        }))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v = parse_text(text)?;
        let obj = object(&v, "", &["m", "order", "params"])?;
        let params = params_from_value(&obj["params"], "params")?;
        let m = big_string(&obj["m"], "m")?;
        let order = big_string(&obj["order"], "order")?;
        Self::new(params, m, order)
    }
}

impl Ciphertext {
    pub fn to_json(&self) -> String {
        to_text(&json!({
            "masked": element_to_value(self.masked()),
            "params": params_to_value(self.params()),
            "phi_r": automorphism_to_value(self.phi_r()),
        }))
    }

    /// Invalid `phi_r` images are reported as a malformed ciphertext.
    pub fn from_json(text: &str) -> Result<Self> {
        let v = parse_text(text)?;
        let obj = object(&v, "", &["masked", "params", "phi_r"])?;
        let params = params_from_value(&obj["params"], "params")?;
        let phi_r = automorphism_from_value(&obj["phi_r"], params, "phi_r").map_err(|e| match e {
            Error::Validation(m) => Error::MalformedCiphertext(m),
            other => other,
        })?;
        let masked = element_from_value(&obj["masked"], params, "masked")?;
        Self::new(phi_r, masked)
    }
}

/// Message file: `{"element": ..., "params": ...}`.
pub fn message_to_json(a: &UtElement) -> String {
    to_text(&json!({
        "element": element_to_value(a),
        "params": params_to_value(a.params()),
    }))
}

pub fn message_from_json(text: &str) -> Result<UtElement> {
    let v = parse_text(text)?;
    let obj = object(&v, "", &["element", "params"])?;
    let params = params_from_value(&obj["params"], "params")?;
    element_from_value(&obj["element"], params, "element")
}
