//! Canonical JSON serialization for series and partitions.
//!
//! Rationals print as reduced `"p/q"` strings with a positive denominator;
//! `"p"` is accepted on input. Object keys are emitted sorted, so identical
//! values always produce identical bytes.
//!
//! Schemas:
//! - algebra: `{"kind":"scalar"}` or `{"kind":"matrix","m":2}`
//! - element: array of `dim` rational strings
//! - series: `{"algebra":...,"components":[c0,c1,...],"order":N}` where
//!   component `k` is a flat array of `dim^k` elements in row-major
//!   basis-tuple order
//! - partition: `{"blocks":[[1,5],[2,3,4]],"n":5}`

use num::{BigInt, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, AlgebraElement, AlgebraKind};
use crate::mfs::{MFSeries, MultilinearMap};
use crate::ncl::{Family, Partition};
use crate::{Error, Rat, Result};

fn schema_err(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Canonical rational string `p/q`, reduced, `q > 0`.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"p/q"` or `"p"`; reduces and normalizes the sign on load.
pub fn rat_from_str(s: &str, path: &str) -> Result<Rat> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let numer: BigInt = p
        .trim()
        .parse()
        .map_err(|_| schema_err(path, format!("bad numerator in {s:?}")))?;
    let denom: BigInt = q
        .trim()
        .parse()
        .map_err(|_| schema_err(path, format!("bad denominator in {s:?}")))?;
    if denom.is_zero() {
        return Err(schema_err(path, "zero denominator"));
    }
    Ok(Rat::new(numer, denom))
}

pub fn algebra_to_value(algebra: &Algebra) -> Value {
    match algebra.kind() {
        AlgebraKind::Scalar => json!({"kind": "scalar"}),
        AlgebraKind::Matrix(m) => json!({"kind": "matrix", "m": m}),
    }
}

pub fn algebra_from_value(v: &Value, path: &str) -> Result<Algebra> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema_err(path, "expected an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema_err(&format!("{path}.kind"), "expected a string"))?;
    match kind {
        "scalar" => Ok(Algebra::scalar()),
        "matrix" => {
            let m = obj
                .get("m")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema_err(&format!("{path}.m"), "expected a positive integer"))?;
            if m == 0 {
                return Err(schema_err(
                    &format!("{path}.m"),
                    "matrix size must be positive",
                ));
            }
            Ok(Algebra::matrix(m as usize))
        }
        other => Err(schema_err(
            &format!("{path}.kind"),
            format!("unknown kind {other:?}"),
        )),
    }
}

pub fn element_to_value(e: &AlgebraElement) -> Value {
    Value::Array(
        e.coords()
            .iter()
            .map(|c| Value::String(rat_to_string(c)))
            .collect(),
    )
}

pub fn element_from_value(algebra: &Algebra, v: &Value, path: &str) -> Result<AlgebraElement> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err(path, "expected an array"))?;
    if arr.len() != algebra.dim() {
        return Err(schema_err(
            path,
            format!("expected {} entries, got {}", algebra.dim(), arr.len()),
        ));
    }
    let mut coords = Vec::with_capacity(arr.len());
    for (i, entry) in arr.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let s = entry
            .as_str()
            .ok_or_else(|| schema_err(&p, "expected a rational string"))?;
        coords.push(rat_from_str(s, &p)?);
    }
    algebra
        .element(coords)
        .map_err(|e| schema_err(path, e.to_string()))
}

pub fn series_to_value(series: &MFSeries) -> Value {
    let components: Vec<Value> = series
        .components()
        .iter()
        .map(|c| Value::Array(c.values().iter().map(element_to_value).collect()))
        .collect();
    let mut obj = Map::new();
    obj.insert("algebra".into(), algebra_to_value(series.algebra()));
    obj.insert("components".into(), Value::Array(components));
    obj.insert("order".into(), json!(series.order()));
    Value::Object(obj)
}

pub fn series_from_value(v: &Value) -> Result<MFSeries> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema_err("$", "expected an object"))?;
    let algebra = algebra_from_value(
        obj.get("algebra")
            .ok_or_else(|| schema_err("$.algebra", "missing"))?,
        "$.algebra",
    )?;
    let order = obj
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema_err("$.order", "expected a nonnegative integer"))?
        as usize;
    crate::check_table_size(algebra.dim(), order)?;
    let comps = obj
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err("$.components", "expected an array"))?;
    if comps.len() != order + 1 {
        return Err(schema_err(
            "$.components",
            format!(
                "expected {} components for order {order}, got {}",
                order + 1,
                comps.len()
            ),
        ));
    }
    let mut components = Vec::with_capacity(comps.len());
    for (k, comp) in comps.iter().enumerate() {
        let path = format!("$.components[{k}]");
        let arr = comp
            .as_array()
            .ok_or_else(|| schema_err(&path, "expected an array"))?;
        let cells = algebra.dim().pow(k as u32);
        if arr.len() != cells {
            return Err(schema_err(
                &path,
                format!("expected {cells} entries at degree {k}, got {}", arr.len()),
            ));
        }
        let mut values = Vec::with_capacity(cells);
        for (i, entry) in arr.iter().enumerate() {
            values.push(element_from_value(
                &algebra,
                entry,
                &format!("{path}[{i}]"),
            )?);
        }
        components.push(
            MultilinearMap::from_values(&algebra, k, values)
                .map_err(|e| schema_err(&path, e.to_string()))?,
        );
    }
    MFSeries::from_components(components).map_err(|e| schema_err("$", e.to_string()))
}

pub fn partition_to_value(p: &Partition) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "blocks".into(),
        Value::Array(
            p.blocks()
                .iter()
                .map(|b| Value::Array(b.iter().map(|&x| json!(x)).collect()))
                .collect(),
        ),
    );
    obj.insert("n".into(), json!(p.n()));
    Value::Object(obj)
}

pub fn partition_from_value(v: &Value, family: Family) -> Result<Partition> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema_err("$", "expected an object"))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema_err("$.n", "expected a positive integer"))? as usize;
    let blocks_v = obj
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err("$.blocks", "expected an array"))?;
    let mut blocks = Vec::with_capacity(blocks_v.len());
    for (i, b) in blocks_v.iter().enumerate() {
        let path = format!("$.blocks[{i}]");
        let arr = b
            .as_array()
            .ok_or_else(|| schema_err(&path, "expected an array"))?;
        let mut block = Vec::with_capacity(arr.len());
        for (j, x) in arr.iter().enumerate() {
            let e = x.as_u64().ok_or_else(|| {
                schema_err(&format!("{path}[{j}]"), "expected a positive integer")
            })?;
            block.push(e as usize);
        }
        blocks.push(block);
    }
    Partition::validate(n, &blocks, family)
}

/// Serialize with sorted keys and no insignificant whitespace; identical
/// values give identical bytes.
pub fn to_canonical_string(v: &Value) -> String {
    // serde_json's default map preserves sorted (BTreeMap) order.
    serde_json::to_string(v).expect("serialization of finite data cannot fail")
}

/// Strict parse of a JSON document.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema_err("$", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_series;
    use crate::{rat, rat_int};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rational_strings_normalize() {
        let r = rat_from_str("2/4", "$").unwrap();
        assert_eq!(r, rat(1, 2));
        assert_eq!(rat_to_string(&r), "1/2");
        assert_eq!(rat_from_str("-3/-6", "$").unwrap(), rat(1, 2));
        assert_eq!(rat_from_str("5", "$").unwrap(), rat_int(5));
        assert_eq!(rat_to_string(&rat_int(5)), "5/1");
        assert!(rat_from_str("1/0", "$").is_err());
        assert!(rat_from_str("x", "$").is_err());
    }

    #[test]
    fn series_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        for alg in [Algebra::scalar(), Algebra::matrix(2)] {
            let s = random_series(&alg, 3, &mut rng, false);
            let v = series_to_value(&s);
            let back = series_from_value(&v).unwrap();
            assert_eq!(back, s);
            // canonical bytes are stable
            assert_eq!(
                to_canonical_string(&v),
                to_canonical_string(&series_to_value(&back))
            );
        }
    }

    #[test]
    fn series_schema_paths() {
        let v =
            parse(r#"{"algebra":{"kind":"scalar"},"components":[[["1/1"]],[["oops"]]],"order":1}"#)
                .unwrap();
        match series_from_value(&v) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "$.components[1][0][0]"),
            other => panic!("{other:?}"),
        }
        // matrix elements need dim = 4 coordinates
        let v = parse(r#"{"algebra":{"kind":"matrix","m":2},"components":[[["1/1"]]],"order":0}"#)
            .unwrap();
        match series_from_value(&v) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "$.components[0][0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn partition_round_trip_and_validation() {
        let p = Partition::validate(5, &[vec![1, 5], vec![2, 3, 4]], Family::Ncl).unwrap();
        let v = partition_to_value(&p);
        assert_eq!(
            to_canonical_string(&v),
            r#"{"blocks":[[1,5],[2,3,4]],"n":5}"#
        );
        let back = partition_from_value(&v, Family::Ncl).unwrap();
        assert_eq!(back, p);
        let crossing = parse(r#"{"blocks":[[1,3],[2,4]],"n":4}"#).unwrap();
        assert!(matches!(
            partition_from_value(&crossing, Family::Ncl),
            Err(Error::InvalidPartition(_))
        ));
    }
}
