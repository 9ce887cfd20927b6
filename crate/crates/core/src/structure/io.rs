//! The JSON structure file format.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::spec::{AlgebroidSpec, BaseRing, Kind, SpecParts};
use crate::error::{Error, Result};
use crate::exactmath::{SMatrix, Scalar};
use crate::exterior::{blade_of, indices, FormTerm, Multivector};
use crate::section::Section;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingDoc {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vars: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorTwistDoc {
    indices: Vec<usize>,
    value: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    ring: RingDoc,
    rank: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<String>>,
    gram: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchor: Option<Vec<Vec<String>>>,
    #[serde(default)]
    bracket: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twist: Option<Vec<FormTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vector_twist: Option<Vec<VectorTwistDoc>>,
}

fn scalar_at(src: &str, location: impl FnOnce() -> String) -> Result<Scalar> {
    src.parse::<Scalar>().map_err(|e| match e {
        Error::Parse {
            location: inner,
            message,
        } => Error::parse(format!("{}, {inner}", location()), message),
        other => other,
    })
}

fn matrix_at(rows: &[Vec<String>], name: &str, cols: usize) -> Result<SMatrix> {
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::parse(
                format!("{name}[{i}]"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, s)| scalar_at(s, || format!("{name}[{i}][{j}]")))
            .collect::<Result<Vec<_>>>()?;
        out.push(parsed);
    }
    Ok(SMatrix::from_fn(out.len(), cols, |i, j| out[i][j].clone()))
}

fn section_at(entries: &[String], rank: usize, name: &str) -> Result<Section> {
    if entries.len() != rank {
        return Err(Error::parse(
            name.to_string(),
            format!("expected {rank} entries, found {}", entries.len()),
        ));
    }
    entries
        .iter()
        .enumerate()
        .map(|(k, s)| scalar_at(s, || format!("{name}[{k}]")))
        .collect()
}

fn parse_pair(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::parse(format!("bracket key `{key}`"), "expected `i,j` with 0-based indices");
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i = a.trim().parse().map_err(|_| bad())?;
    let j = b.trim().parse().map_err(|_| bad())?;
    Ok((i, j))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
}

fn from_doc(doc: SpecDoc) -> Result<AlgebroidSpec> {
    let ring = match (doc.ring.kind.as_str(), doc.ring.vars) {
        ("point", None | Some(0)) => BaseRing::Point,
        ("polynomial", Some(n)) if n > 0 => BaseRing::Polynomial { vars: n },
        ("polynomial", _) => return Err(Error::parse("ring.vars", "polynomial ring needs a positive `vars`")),
        (other, _) => return Err(Error::parse("ring.type", format!("unknown ring `{other}`"))),
    };
    let r = doc.rank;
    let n = ring.nvars();
    if doc.gram.len() != r {
        return Err(Error::parse(
            "gram",
            format!("expected {r} rows, found {}", doc.gram.len()),
        ));
    }
    let gram = matrix_at(&doc.gram, "gram", r)?;
    let anchor = match &doc.anchor {
        Some(rows) if !rows.is_empty() || r == 0 => {
            if rows.len() != r {
                return Err(Error::parse(
                    "anchor",
                    format!("expected {r} rows, found {}", rows.len()),
                ));
            }
            matrix_at(rows, "anchor", n)?
        }
        _ => SMatrix::zeros(r, n),
    };
    let mut brackets = BTreeMap::new();
    for (key, entries) in &doc.bracket {
        let pair = parse_pair(key)?;
        let s = section_at(entries, r, &format!("bracket[\"{key}\"]"))?;
        brackets.insert(pair, s);
    }
    let twist = match &doc.twist {
        Some(terms) => Some(Multivector::from_literal(terms).map_err(|e| match e {
            Error::Parse { location, message } => Error::parse(format!("twist, {location}"), message),
            other => other,
        })?),
        None => None,
    };
    let vector_twist = match &doc.vector_twist {
        Some(entries) => {
            let mut map = BTreeMap::new();
            for (k, t) in entries.iter().enumerate() {
                let b = blade_of(&t.indices)?;
                let s = section_at(&t.value, r, &format!("vector_twist[{k}].value"))?;
                map.insert(b, s);
            }
            Some(map)
        }
        None => None,
    };
    let kind: Kind = doc.kind.parse()?;
    AlgebroidSpec::new(SpecParts {
        ring,
        rank: r,
        gram,
        anchor,
        brackets,
        twist,
        vector_twist,
        kind,
        basis_names: doc.basis,
    })
}

fn to_doc(spec: &AlgebroidSpec) -> SpecDoc {
    let p = spec.parts();
    let strings = |m: &SMatrix| -> Vec<Vec<String>> {
        m.to_rows()
            .into_iter()
            .map(|row| row.iter().map(Scalar::to_string).collect())
            .collect()
    };
    let ring = match p.ring {
        BaseRing::Point => RingDoc {
            kind: "point".into(),
            vars: None,
        },
        BaseRing::Polynomial { vars } => RingDoc {
            kind: "polynomial".into(),
            vars: Some(vars),
        },
    };
    SpecDoc {
        ring,
        rank: p.rank,
        kind: p.kind.as_str().into(),
        basis: p.basis_names.clone(),
        gram: strings(&p.gram),
        anchor: (!p.ring.is_point()).then(|| strings(&p.anchor)),
        bracket: p
            .brackets
            .iter()
            .map(|(&(i, j), s)| (format!("{i},{j}"), s.to_strings()))
            .collect(),
        twist: p.twist.as_ref().map(Multivector::to_literal),
        vector_twist: p.vector_twist.as_ref().map(|vt| {
            vt.iter()
                .map(|(&b, s)| VectorTwistDoc {
                    indices: indices(b),
                    value: s.to_strings(),
                })
                .collect()
        }),
    }
}

/// Parse a structure document.
pub fn load_spec(document: &str) -> Result<AlgebroidSpec> {
    let doc: SpecDoc = serde_json::from_str(document).map_err(json_error)?;
    from_doc(doc)
}

pub fn load_spec_file(path: impl AsRef<Path>) -> Result<AlgebroidSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_spec(&text)
}

pub fn spec_to_value(spec: &AlgebroidSpec) -> serde_json::Value {
    serde_json::to_value(to_doc(spec)).expect("spec documents always serialize")
}

/// Pretty-printed structure document; reloads to an equal spec.
pub fn spec_to_json(spec: &AlgebroidSpec) -> String {
    serde_json::to_string_pretty(&to_doc(spec)).expect("spec documents always serialize")
}
