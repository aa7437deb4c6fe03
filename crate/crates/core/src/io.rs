//! JSON formats for lattices, matrices, relations and vectors.
//!
//! Lattices are built-in names (`"M3"`, `"chain:4"`, ...) or objects
//!
//! ```json
//! {"elements": ["0", "a", "1"], "covers": [["0", "a"], ["a", "1"]]}
//! {"elements": ["0", "1"], "join": [["0", "1"], ["1", "1"]], "meet": [["0", "0"], ["0", "1"]]}
//! ```
//!
//! Matrices are `{"lattice": <name or object>, "entries": [[labels]]}` or a
//! bare array of label rows when the lattice comes from elsewhere.
//! Relations are 0/1 row arrays or `{"n": k, "edges": [[i, j], ...]}` with
//! one-based vertices.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::boolrel::BoolRel;
use crate::error::{Error, Result};
use crate::fixpoint::LatVector;
use crate::lattice::{Elem, Lattice};
use crate::matrix::LatMatrix;

fn parse_err(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        context: context.into(),
        message: message.into(),
    }
}

/// Parses JSON text, reporting syntax errors by line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        parse_err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(ctx, "expected an array"))
}

fn string<'a>(v: &'a Value, ctx: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| parse_err(ctx, "expected a string"))
}

fn field<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| parse_err(ctx, format!("missing field {key:?}")))
}

/// An element given by label, or by index for lattices read from files.
fn element(v: &Value, names: &[String], ctx: &str) -> Result<Elem> {
    match v {
        Value::String(s) => names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Error::UnknownElement(s.clone())),
        Value::Number(k) => k
            .as_u64()
            .map(|k| k as usize)
            .filter(|&k| k < names.len())
            .ok_or_else(|| parse_err(ctx, format!("{k} is not an element index"))),
        _ => Err(parse_err(ctx, "expected an element label")),
    }
}

fn table(v: &Value, names: &[String], ctx: &str) -> Result<Vec<Vec<Elem>>> {
    array(v, ctx)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let rctx = format!("{ctx}[{i}]");
            array(row, &rctx)?
                .iter()
                .enumerate()
                .map(|(j, e)| element(e, names, &format!("{rctx}[{j}]")))
                .collect()
        })
        .collect()
}

/// A built-in name or a lattice object.
pub fn lattice_from_value(v: &Value) -> Result<Lattice> {
    if let Value::String(name) = v {
        return Lattice::builtin(name)
            .ok_or_else(|| parse_err("lattice", format!("unknown built-in lattice {name:?}")));
    }
    if !v.is_object() {
        return Err(parse_err("lattice", "expected a name or an object"));
    }
    let names: Vec<String> = array(field(v, "elements", "lattice")?, "elements")?
        .iter()
        .enumerate()
        .map(|(i, e)| string(e, &format!("elements[{i}]")).map(str::to_string))
        .collect::<Result<_>>()?;
    if let Some(covers) = v.get("covers") {
        let pairs = table(covers, &names, "covers")?;
        let pairs = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| match p.as_slice() {
                &[lo, hi] => Ok((lo, hi)),
                _ => Err(parse_err(
                    format!("covers[{i}]"),
                    "expected a [lower, upper] pair",
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Lattice::from_covers(names, &pairs)
    } else {
        let join = table(field(v, "join", "lattice")?, &names, "join")?;
        let meet = table(field(v, "meet", "lattice")?, &names, "meet")?;
        Lattice::from_tables(names, join, meet)
    }
}

/// Parses a lattice from JSON text or a bare built-in name.
pub fn parse_lattice(text: &str) -> Result<Lattice> {
    let t = text.trim();
    if let Some(l) = Lattice::builtin(t) {
        return Ok(l);
    }
    lattice_from_value(&parse_json(t)?)
}

/// The built-in name of a lattice, if it is one.
pub fn builtin_name(l: &Lattice) -> Option<String> {
    let fixed = ["bool", "M3", "N5", "2x2", "2x2+1"]
        .into_iter()
        .map(str::to_string)
        .find(|name| Lattice::builtin(name).as_ref() == Some(l));
    fixed.or_else(|| {
        let name = format!("chain:{}", l.size());
        (Lattice::builtin(&name).as_ref() == Some(l)).then_some(name)
    })
}

/// The cover-list form of a lattice.
pub fn lattice_to_value(l: &Lattice) -> Value {
    let covers: Vec<[&str; 2]> = l
        .covers()
        .into_iter()
        .map(|(lo, hi)| [l.name(lo), l.name(hi)])
        .collect();
    json!({"elements": l.names(), "covers": covers})
}

fn label_rows(v: &Value, l: &Lattice, ctx: &str) -> Result<Vec<Vec<Elem>>> {
    array(v, ctx)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let rctx = format!("{ctx}[{i}]");
            array(row, &rctx)?
                .iter()
                .enumerate()
                .map(|(j, e)| {
                    let s = string(e, &format!("{rctx}[{j}]"))?;
                    l.element(s)
                        .ok_or_else(|| Error::UnknownElement(s.to_string()))
                })
                .collect()
        })
        .collect()
}

/// Reads a matrix; a `"lattice"` field in the document takes precedence
/// over `fallback`.
pub fn matrix_from_value(v: &Value, fallback: Option<Arc<Lattice>>) -> Result<LatMatrix> {
    let (lattice, entries) = match v {
        Value::Array(_) => (fallback, v),
        Value::Object(_) => {
            let own = v
                .get("lattice")
                .map(lattice_from_value)
                .transpose()?
                .map(Arc::new);
            (own.or(fallback), field(v, "entries", "matrix")?)
        }
        _ => {
            return Err(parse_err(
                "matrix",
                "expected an object or an array of rows",
            ))
        }
    };
    let lattice = lattice.ok_or_else(|| parse_err("matrix", "no lattice given"))?;
    let rows = label_rows(entries, &lattice, "entries")?;
    LatMatrix::from_rows(lattice, rows)
}

pub fn parse_matrix(text: &str, fallback: Option<Arc<Lattice>>) -> Result<LatMatrix> {
    matrix_from_value(&parse_json(text)?, fallback)
}

/// `{"lattice": ..., "entries": ...}`, naming the lattice when it is built in.
pub fn matrix_to_value(a: &LatMatrix) -> Value {
    let lattice = match builtin_name(a.lattice()) {
        Some(name) => Value::String(name),
        None => lattice_to_value(a.lattice()),
    };
    json!({"lattice": lattice, "entries": a.to_labels()})
}

pub fn relation_from_value(v: &Value) -> Result<BoolRel> {
    match v {
        Value::Array(rows) => {
            let bits = rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    array(row, &format!("relation[{i}]"))?
                        .iter()
                        .enumerate()
                        .map(|(j, b)| match b.as_u64() {
                            Some(0) => Ok(0u8),
                            Some(1) => Ok(1u8),
                            _ => Err(parse_err(format!("relation[{i}][{j}]"), "expected 0 or 1")),
                        })
                        .collect::<Result<Vec<u8>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            BoolRel::from_rows(&bits)
        }
        Value::Object(_) => {
            let n = field(v, "n", "relation")?
                .as_u64()
                .ok_or_else(|| parse_err("n", "expected a positive integer"))?
                as usize;
            let edges = array(field(v, "edges", "relation")?, "edges")?
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    let ctx = format!("edges[{k}]");
                    let pair = array(e, &ctx)?;
                    let idx = |x: &Value| {
                        x.as_u64()
                            .filter(|&x| x >= 1 && x as usize <= n)
                            .map(|x| x as usize - 1)
                            .ok_or_else(|| parse_err(&ctx, format!("vertices are 1..={n}")))
                    };
                    match pair.as_slice() {
                        [i, j] => Ok((idx(i)?, idx(j)?)),
                        _ => Err(parse_err(&ctx, "expected an [i, j] pair")),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            BoolRel::from_edges(n, &edges)
        }
        _ => Err(parse_err(
            "relation",
            "expected a 0/1 matrix or an edge list",
        )),
    }
}

pub fn parse_relation(text: &str) -> Result<BoolRel> {
    relation_from_value(&parse_json(text)?)
}

pub fn relation_to_value(r: &BoolRel) -> Value {
    json!(r.to_rows())
}

/// A vector as an array of labels or `{"lattice": ..., "entries": [...]}`.
pub fn vector_from_value(v: &Value, fallback: Option<Arc<Lattice>>) -> Result<LatVector> {
    let (lattice, entries) = match v {
        Value::Array(_) => (fallback, v),
        Value::Object(_) => {
            let own = v
                .get("lattice")
                .map(lattice_from_value)
                .transpose()?
                .map(Arc::new);
            (own.or(fallback), field(v, "entries", "vector")?)
        }
        _ => return Err(parse_err("vector", "expected an object or an array")),
    };
    let lattice = lattice.ok_or_else(|| parse_err("vector", "no lattice given"))?;
    let labels = array(entries, "entries")?
        .iter()
        .enumerate()
        .map(|(i, e)| string(e, &format!("entries[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    LatVector::from_labels(lattice, &labels)
}

pub fn parse_vector(text: &str, fallback: Option<Arc<Lattice>>) -> Result<LatVector> {
    vector_from_value(&parse_json(text)?, fallback)
}

pub(crate) fn serialize_rel_rows<S: serde::Serializer>(
    rel: &BoolRel,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rel.to_rows(), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_and_inline_lattices() {
        assert_eq!(parse_lattice("M3").unwrap(), Lattice::m3());
        assert_eq!(
            parse_lattice("\"chain:4\"").unwrap(),
            Lattice::chain(4).unwrap()
        );
        let text = r#"{"elements": ["0", "a", "b", "c", "1"],
            "covers": [["0","a"],["a","c"],["c","1"],["0","b"],["b","1"]]}"#;
        assert_eq!(parse_lattice(text).unwrap(), Lattice::n5());
        let tables = r#"{"elements": ["0", "1"],
            "join": [["0","1"],["1","1"]], "meet": [["0","0"],["0","1"]]}"#;
        assert_eq!(parse_lattice(tables).unwrap(), Lattice::boolean());
        assert!(matches!(parse_lattice("chain:1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn lattice_round_trip() {
        for l in [Lattice::m3(), Lattice::n5(), Lattice::two_by_two_plus_one()] {
            let back = lattice_from_value(&lattice_to_value(&l)).unwrap();
            assert_eq!(back, l);
        }
        assert_eq!(
            builtin_name(&Lattice::chain(5).unwrap()).as_deref(),
            Some("chain:5")
        );
        assert_eq!(builtin_name(&Lattice::boolean()).as_deref(), Some("bool"));
    }

    #[test]
    fn matrix_examples() {
        let id = parse_matrix(
            r#"[["1","0"],["0","1"]]"#,
            Some(Arc::new(Lattice::boolean())),
        )
        .unwrap();
        assert!(id.is_identity());
        let a = parse_matrix(
            r#"{"lattice": "M3", "entries": [["a","b"],["0","0"]]}"#,
            None,
        )
        .unwrap();
        assert_eq!(a.get(0, 1), 2);
        assert_eq!(
            parse_matrix(
                r#"{"lattice": "M3", "entries": [["q","0"],["0","0"]]}"#,
                None
            ),
            Err(Error::UnknownElement("q".into()))
        );
        let back = matrix_from_value(&matrix_to_value(&a), None).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn parse_errors_carry_context() {
        match parse_matrix("[[\"0\",\n 1]]", Some(Arc::new(Lattice::m3()))) {
            Err(Error::Parse { context, .. }) => assert_eq!(context, "entries[0][1]"),
            other => panic!("{other:?}"),
        }
        match parse_json("{\n\"a\": }") {
            Err(Error::Parse { context, .. }) => assert!(context.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_matrix("[[\"0\"]]", None),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn relations() {
        let r = parse_relation("[[1,1],[0,1]]").unwrap();
        assert_eq!(
            r,
            parse_relation(r#"{"n": 2, "edges": [[1,1],[1,2],[2,2]]}"#).unwrap()
        );
        assert_eq!(relation_from_value(&relation_to_value(&r)).unwrap(), r);
        assert!(parse_relation(r#"{"n": 2, "edges": [[0,1]]}"#).is_err());
        assert!(parse_relation("[[2]]").is_err());
    }

    #[test]
    fn vectors() {
        let v = parse_vector(r#"{"lattice": "chain:3", "entries": ["x1", "1"]}"#, None).unwrap();
        assert_eq!(v.entries(), &[1, 2]);
        assert!(parse_vector(r#"["0"]"#, None).is_err());
    }
}
