//! Poset and module files, verdict serialization and dimension-vector reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grothendieck::{DimVector, Verdict};
use crate::matrix::Matrix;
use crate::module::{ModuleMap, PosetModule};
use crate::poset::Poset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub objects: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson {
            objects: p.labels().to_vec(),
            covers: p.covers().iter().map(|&(u, v)| (p.label(u).to_string(), p.label(v).to_string())).collect(),
        }
    }
}

impl PosetJson {
    pub fn build(&self) -> Result<Poset> {
        Poset::from_covers(&self.objects, &self.covers)
    }
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// `objects: a b c` followed by `cover: u v` lines; `#` starts a comment.
pub fn parse_poset_text(s: &str) -> Result<Poset> {
    let mut objects: Option<Vec<String>> = None;
    let mut covers = Vec::new();
    for (n, raw) in s.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| parse_err(n + 1, "expected `key: values`"))?;
        let words: Vec<String> = rest.split_whitespace().map(String::from).collect();
        match key.trim() {
            "objects" => {
                if objects.is_some() {
                    return Err(parse_err(n + 1, "second objects line"));
                }
                objects = Some(words);
            }
            "cover" => match <[String; 2]>::try_from(words) {
                Ok([u, v]) => covers.push((u, v)),
                Err(_) => return Err(parse_err(n + 1, "a cover needs exactly two objects")),
            },
            other => return Err(parse_err(n + 1, format!("unknown key {other:?}"))),
        }
    }
    let objects = objects.ok_or_else(|| Error::Parse("missing objects line".into()))?;
    Poset::from_covers(&objects, &covers)
}

pub fn write_poset_text(p: &Poset) -> String {
    let mut s = format!("objects: {}\n", p.labels().join(" "));
    for &(u, v) in p.covers() {
        let _ = writeln!(s, "cover: {} {}", p.label(u), p.label(v));
    }
    s
}

pub fn poset_to_json(p: &Poset) -> Value {
    serde_json::to_value(PosetJson::from(p)).expect("plain data")
}

pub fn poset_from_json(v: &Value) -> Result<Poset> {
    let pj: PosetJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    pj.build()
}

/// Either format, sniffed from the first non-blank character.
pub fn read_poset(s: &str) -> Result<Poset> {
    if s.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        poset_from_json(&v)
    } else {
        parse_poset_text(s)
    }
}

pub fn read_poset_file(path: &Path) -> Result<Poset> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    read_poset(&s)
}

fn scalar_from_json<F: Scalar>(v: &Value) -> Result<F> {
    match v {
        Value::String(s) => F::parse_literal(s).map_err(Error::Parse),
        Value::Number(n) => F::parse_literal(&n.to_string()).map_err(Error::Parse),
        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
    }
}

fn matrix_from_json<F: Scalar>(v: &Value, rows: usize, cols: usize, what: &str) -> Result<Matrix<F>> {
    let rs = v.as_array().ok_or_else(|| Error::Parse(format!("map {what} is not an array of rows")))?;
    if rs.len() != rows {
        return Err(Error::Shape(format!("map {what}: {} rows, expected {rows}", rs.len())));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (i, r) in rs.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| Error::Parse(format!("map {what}: row {i} is not an array")))?;
        if r.len() != cols {
            return Err(Error::Shape(format!("map {what}: row {i} has {} entries, expected {cols}", r.len())));
        }
        for (j, e) in r.iter().enumerate() {
            m[(i, j)] = scalar_from_json(e)?;
        }
    }
    Ok(m)
}

pub fn matrix_to_json<F: Scalar>(m: &Matrix<F>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|e| Value::String(e.to_string())).collect())).collect())
}

/// Parses a module document; a string `poset` field is a path resolved against `base_dir`.
///
/// Missing dims are 0. A missing map is allowed only when it is forced to be zero-sized.
pub fn module_from_json<F: Scalar>(v: &Value, base_dir: Option<&Path>) -> Result<PosetModule<F>> {
    let pv = v.get("poset").ok_or_else(|| Error::Parse("module without poset".into()))?;
    let poset = match pv {
        Value::String(path) => {
            let path = base_dir.map_or_else(|| Path::new(path).to_path_buf(), |d| d.join(path));
            read_poset_file(&path)?
        }
        other => poset_from_json(other)?,
    };
    let poset = Arc::new(poset);
    module_on_from_json(&poset, v)
}

/// Reads `dims` and `maps` against an already known poset.
pub fn module_on_from_json<F: Scalar>(poset: &Arc<Poset>, v: &Value) -> Result<PosetModule<F>> {
    let mut dims = vec![0usize; poset.len()];
    if let Some(d) = v.get("dims") {
        let d = d.as_object().ok_or_else(|| Error::Parse("dims must be an object".into()))?;
        for (k, val) in d {
            let x = poset.require(k)?;
            dims[x] = val.as_u64().ok_or_else(|| Error::Parse(format!("dim of {k} is not a count")))? as usize;
        }
    }
    let empty = Map::new();
    let given = match v.get("maps") {
        Some(m) => m.as_object().ok_or_else(|| Error::Parse("maps must be an object".into()))?,
        None => &empty,
    };
    let mut maps: Vec<Option<Matrix<F>>> = vec![None; poset.num_covers()];
    for (k, val) in given {
        let (a, b) = k.split_once(',').ok_or_else(|| Error::Parse(format!("map key {k:?} is not `u,v`")))?;
        let (u, v) = (poset.require(a.trim())?, poset.require(b.trim())?);
        let id = poset.cover_id(u, v).ok_or_else(|| Error::Parse(format!("{k:?} is not a cover")))?;
        maps[id] = Some(matrix_from_json(val, dims[v], dims[u], k)?);
    }
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(id, m)| {
            let (u, v) = poset.cover(id);
            match m {
                Some(m) => Ok(m),
                None if dims[u] == 0 || dims[v] == 0 => Ok(Matrix::zeros(dims[v], dims[u])),
                None => Err(Error::Parse(format!("missing map {},{}", poset.label(u), poset.label(v)))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PosetModule::new(poset.clone(), dims, maps)
}

pub fn read_module<F: Scalar>(path: &Path) -> Result<PosetModule<F>> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&s).map_err(|e| Error::Parse(e.to_string()))?;
    module_from_json(&v, path.parent())
}

/// Module document with the poset inline.
pub fn module_to_json<F: Scalar>(m: &PosetModule<F>) -> Value {
    let p = m.poset();
    let dims: Map<String, Value> = (0..p.len()).map(|x| (p.label(x).to_string(), json!(m.dim(x)))).collect();
    let maps: Map<String, Value> = p
        .covers()
        .iter()
        .enumerate()
        .map(|(k, &(u, v))| (format!("{},{}", p.label(u), p.label(v)), matrix_to_json(m.map(k))))
        .collect();
    json!({ "poset": poset_to_json(p), "dims": dims, "maps": maps })
}

pub fn module_map_to_json<F: Scalar>(p: &Poset, f: &ModuleMap<F>) -> Value {
    Value::Object((0..p.len()).map(|x| (p.label(x).to_string(), matrix_to_json(&f.components[x]))).collect())
}

pub fn dimvec_to_json(p: &Poset, d: &DimVector) -> Value {
    Value::Object(d.labeled(p).into_iter().map(|(k, v)| (k, json!(v))).collect())
}

/// `{"verdict", "witness"?, "failure_bound"?}` plus the certificate fields of refutations.
pub fn verdict_to_json<F: Scalar>(p: &Poset, v: &Verdict<F>) -> Value {
    let mut o = Map::new();
    o.insert("verdict".into(), json!(v.name()));
    match v {
        Verdict::Isomorphic { witness } => {
            o.insert("witness".into(), module_map_to_json(p, witness));
        }
        Verdict::DimsDiffer { object, left, right } => {
            o.insert("object".into(), json!(object));
            o.insert("left".into(), json!(left));
            o.insert("right".into(), json!(right));
        }
        Verdict::RankDiffers { x, y, left, right } => {
            o.insert("relation".into(), json!([x, y]));
            o.insert("left".into(), json!(left));
            o.insert("right".into(), json!(right));
        }
        Verdict::HomDiffers { hom_mn, hom_mm, hom_nn } => {
            o.insert("hom".into(), json!({ "mn": hom_mn, "mm": hom_mm, "nn": hom_nn }));
        }
        Verdict::NoIsoFound { failure_bound } => {
            o.insert("failure_bound".into(), json!(failure_bound));
        }
    }
    Value::Object(o)
}

/// A dimension vector laid out as a grid when the labels allow it.
#[derive(Clone, Debug, PartialEq)]
pub struct GridReport {
    pub text: String,
    pub json: Value,
}

fn parse_cell(s: &str) -> Option<(usize, usize)> {
    let (i, j) = s.split_once('.')?;
    Some((i.parse().ok()?, j.parse().ok()?))
}

fn parse_edge(s: &str) -> Option<((usize, usize), (usize, usize))> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((parse_cell(a)?, parse_cell(b)?))
}

/// Rows printed top (largest j) first, right-aligned to a common width.
fn render(rows: &[Vec<i64>]) -> String {
    let w = rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    let mut s = String::new();
    for r in rows.iter().rev() {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:>w$}")).collect();
        let _ = writeln!(s, "{}", cells.join(" "));
    }
    s
}

/// Grid layout for objects labelled `i.j`, a horizontal and a vertical grid for their line poset
/// (labels `(i.j,i'.j')`), and a flat listing for anything else. JSON rows are indexed `[j][i]`.
pub fn report_dimvec_grid(p: &Poset, d: &DimVector) -> GridReport {
    let cells: Option<Vec<(usize, usize)>> = p.labels().iter().map(|l| parse_cell(l)).collect();
    if let Some(cells) = cells.filter(|c| !c.is_empty()) {
        let m = cells.iter().map(|c| c.0).max().unwrap_or(0) + 1;
        let n = cells.iter().map(|c| c.1).max().unwrap_or(0) + 1;
        if m * n == p.len() {
            let mut rows = vec![vec![0i64; m]; n];
            for (x, &(i, j)) in cells.iter().enumerate() {
                rows[j][i] = d.get(x);
            }
            return GridReport { text: render(&rows), json: json!({ "kind": "grid", "rows": rows }) };
        }
    }
    let edges: Option<Vec<_>> = p.labels().iter().map(|l| parse_edge(l)).collect();
    if let Some(edges) = edges.filter(|e| !e.is_empty()) {
        let m = edges.iter().map(|e| e.1 .0).max().unwrap_or(0) + 1;
        let n = edges.iter().map(|e| e.1 .1).max().unwrap_or(0) + 1;
        let mut hor = vec![vec![0i64; m.saturating_sub(1)]; n];
        let mut ver = vec![vec![0i64; m]; n.saturating_sub(1)];
        let mut ok = edges.len() == (m - 1) * n + m * (n - 1);
        for (x, &((i, j), (i2, j2))) in edges.iter().enumerate() {
            if i2 == i + 1 && j2 == j {
                hor[j][i] = d.get(x);
            } else if i2 == i && j2 == j + 1 {
                ver[j][i] = d.get(x);
            } else {
                ok = false;
            }
        }
        if ok {
            let text = format!("horizontal:\n{}vertical:\n{}", render(&hor), render(&ver));
            return GridReport { text, json: json!({ "kind": "line-grid", "horizontal": hor, "vertical": ver }) };
        }
    }
    let values: BTreeMap<String, i64> = d.labeled(p).into_iter().collect();
    let w = p.labels().iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let mut text = String::new();
    for (l, v) in d.labeled(p) {
        let _ = writeln!(text, "{l:<w$}  {v}");
    }
    GridReport { text, json: json!({ "kind": "flat", "values": values }) }
}
