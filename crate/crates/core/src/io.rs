//! JSON formats.
//!
//! All indices in files are 1-based (`"j,i"` permutation keys, permutation
//! entries, trace coordinates); the library API is 0-based.
//!
//! * matrix: `{"q": 3, "rows": 2, "cols": 4, "entries": [[1,2,2,1],[2,0,1,2]]}`
//! * pseudocodeword matrix: a bare nested array, or an object with `"entries"`;
//!   entries are integers or strings such as `"1/4"`
//! * cover: `{"M": 4, "base": <matrix or fixture name>, "perms": {"1,1": [3,4,1,2], ...}, "labels": [[...], ...]}`
//! * lift result: a cover plus a `"trace"` array

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cone::{ConeSystem, CriticalReport, CriticalType};
use crate::error::{Error, Result};
use crate::field::{Field, FieldMatrix, RationalMatrix};
use crate::fixtures;
use crate::lift::{LiftResult, TraceStep};
use crate::tanner::{build_cover, build_tanner, CoverLabeling, EdgePermutations, PseudoMatrix};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub q: u64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u64>>,
}

impl MatrixDoc {
    pub fn from_matrix(h: &FieldMatrix) -> Self {
        MatrixDoc {
            q: h.field().q() as u64,
            rows: h.rows(),
            cols: h.cols(),
            entries: h.to_rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<FieldMatrix> {
        let field = Field::from_q(self.q)?;
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::DimensionMismatch(format!(
                "declared {}x{} but entries do not match",
                self.rows, self.cols
            )));
        }
        let mut rows = Vec::with_capacity(self.rows);
        for r in &self.entries {
            let mut row = Vec::with_capacity(r.len());
            for &v in r {
                if v >= field.q() as u64 {
                    return Err(Error::InvalidFieldEntry { value: v, q: field.q() });
                }
                row.push(v as u8);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok(FieldMatrix::zeros(field, 0, self.cols));
        }
        FieldMatrix::from_rows(field, &rows)
    }
}

pub fn parse_matrix(s: &str) -> Result<FieldMatrix> {
    serde_json::from_str::<MatrixDoc>(s)?.to_matrix()
}

pub fn matrix_json(h: &FieldMatrix) -> Value {
    serde_json::to_value(MatrixDoc::from_matrix(h)).expect("plain data")
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn to_rational(&self) -> std::result::Result<Rational64, String> {
        match self {
            Number::Int(v) => Ok(Rational64::from_integer(*v)),
            Number::Text(s) => {
                let s = s.trim();
                match s.split_once('/') {
                    Some((n, d)) => {
                        let n: i64 = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
                        let d: i64 = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
                        if d == 0 {
                            return Err(format!("zero denominator in {s:?}"));
                        }
                        Ok(Rational64::new(n, d))
                    }
                    None => s.parse().map(Rational64::from_integer).map_err(|_| format!("bad number {s:?}")),
                }
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PseudoDoc {
    Bare(Vec<Vec<Number>>),
    Object { entries: Vec<Vec<Number>> },
}

/// Reads a pseudocodeword matrix with rational entries.
pub fn parse_pseudomatrix(s: &str) -> Result<RationalMatrix> {
    let rows = match serde_json::from_str::<PseudoDoc>(s)? {
        PseudoDoc::Bare(rows) | PseudoDoc::Object { entries: rows } => rows,
    };
    let mut out = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let mut parsed = Vec::with_capacity(row.len());
        for (c, x) in row.iter().enumerate() {
            let v = x
                .to_rational()
                .map_err(|e| Error::DimensionMismatch(format!("entry ({}, {}): {e}", r + 1, c + 1)))?;
            if v < Rational64::from_integer(0) {
                return Err(Error::NotInteger { row: r, col: c, value: v.to_string() });
            }
            parsed.push(v);
        }
        out.push(parsed);
    }
    RationalMatrix::from_rows(&out)
}

pub fn pseudomatrix_json(f: &PseudoMatrix) -> Value {
    json!(f.to_rows())
}

pub fn rational_json(z: &RationalMatrix) -> Value {
    json!(z
        .to_rows()
        .iter()
        .map(|r| r
            .iter()
            .map(|x| if x.is_integer() { json!(x.to_integer()) } else { json!(x.to_string()) })
            .collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BaseRef {
    Name(String),
    Matrix(MatrixDoc),
}

#[derive(Deserialize)]
struct CoverDoc {
    #[serde(rename = "M")]
    degree: usize,
    base: BaseRef,
    perms: BTreeMap<String, Vec<usize>>,
    labels: Vec<Vec<u8>>,
}

fn parse_edge_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidCover(format!("permutation key {key:?} is not of the form \"j,i\" with 1-based indices"));
    let (j, i) = key.split_once(',').ok_or_else(bad)?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    if j == 0 || i == 0 {
        return Err(bad());
    }
    Ok((j - 1, i - 1))
}

/// Reads a labeled cover; fixture names are accepted as `base`.
pub fn parse_cover(s: &str) -> Result<CoverLabeling> {
    let doc: CoverDoc = serde_json::from_str(s)?;
    let h = match &doc.base {
        BaseRef::Name(name) => {
            let src = fixtures::source(name)
                .ok_or_else(|| Error::Precondition(format!("unknown fixture {name:?} as cover base")))?;
            parse_matrix(src)?
        }
        BaseRef::Matrix(m) => m.to_matrix()?,
    };
    let mut perms = EdgePermutations::new();
    for (key, perm) in &doc.perms {
        let edge = parse_edge_key(key)?;
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if !sorted.iter().copied().eq(1..=doc.degree) {
            return Err(Error::InvalidCover(format!(
                "edge {key}: {perm:?} is not a permutation of 1..={}",
                doc.degree
            )));
        }
        let zero_based = perm.iter().map(|&x| x - 1).collect();
        perms.insert(edge, zero_based);
    }
    let cover = build_cover(&build_tanner(&h), &perms, doc.degree)?;
    CoverLabeling::new(cover, doc.labels)
}

/// Cover JSON; `base_name` refers to a fixture instead of inlining the matrix.
pub fn cover_json(lab: &CoverLabeling, base_name: Option<&str>) -> Value {
    let cover = lab.cover();
    let perms = cover.permutations().expect("labeled covers are valid");
    let perms: serde_json::Map<String, Value> = perms
        .iter()
        .map(|(&(j, i), p)| (format!("{},{}", j + 1, i + 1), json!(p.iter().map(|x| x + 1).collect::<Vec<_>>())))
        .collect();
    let base = match base_name {
        Some(name) => json!(name),
        None => matrix_json(cover.base().matrix()),
    };
    json!({
        "M": cover.degree(),
        "base": base,
        "perms": perms,
        "labels": lab.labels(),
    })
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

pub fn critical_json(report: &CriticalReport) -> Value {
    let coords: Vec<Value> = report
        .coordinates
        .iter()
        .map(|&(l, t)| json!([l + 1, if t == CriticalType::One { 1 } else { 2 }]))
        .collect();
    let pairs = |set: &std::collections::BTreeSet<(usize, usize)>| -> Vec<[usize; 2]> {
        set.iter().map(|&(a, b)| [a + 1, b + 1]).collect()
    };
    json!({
        "coordinates": coords,
        "pairs_type1": pairs(&report.pairs_type1),
        "pairs_type2": pairs(&report.pairs_type2),
    })
}

pub fn trace_step_json(step: &TraceStep) -> Value {
    json!({
        "row": step.row + 1,
        "kind": step.kind,
        "coordinates": one_based(&step.coordinates),
        "copies": one_based(&step.copies),
        "symbols": step.symbols,
        "check_copies": one_based(&step.check_copies),
        "critical": step.critical.as_ref().map(critical_json),
        "snapshot": pseudomatrix_json(&step.snapshot),
    })
}

pub fn lift_json(result: &LiftResult) -> Value {
    let mut v = cover_json(&result.labeling, None);
    let obj = v.as_object_mut().expect("object");
    obj.insert("M_prime".into(), json!(result.m_prime));
    obj.insert("trace".into(), Value::Array(result.trace.iter().map(trace_step_json).collect()));
    v
}

pub fn cone_json(system: &ConeSystem) -> Value {
    let inequalities: Vec<Value> = system
        .inequalities()
        .iter()
        .map(|q| {
            json!({
                "row": q.row.map(|j| j + 1),
                "kind": q.kind,
                "indices": one_based(&q.indices),
                "symbol": q.symbol,
                "coefficients": q.coefficient_rows(),
                "text": system.render(q),
            })
        })
        .collect();
    json!({
        "H": matrix_json(system.matrix()),
        "nontrivial": system.nontrivial().count(),
        "total": system.len(),
        "inequalities": inequalities,
    })
}
