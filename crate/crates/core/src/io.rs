//! Model files and number formatting.
//!
//! A model file is a JSON object with `"type": "pair" | "atoms" | "embedding"`
//! and an optional `"eps"`. Numbers are accepted as JSON numbers, decimal
//! strings, or `[re, im]` pairs; they are written back as 17-significant-digit
//! decimal strings, which round-trip every `f64` exactly.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jointspec::{joint_spectrum_with, JointSpectrum, DEFAULT_DEDUP_TOL};
use crate::linalg::{ComplexMatrix, DEFAULT_EPS};
use crate::model::{atom_spectra, AtomKind, AtomModel, PairModel, QAtom, ShiftEmbedding};

/// Decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Pair(PairModel),
    Atoms(AtomModel),
    Embedding(ShiftEmbedding),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Pair(_) => "pair",
            Model::Atoms(_) => "atoms",
            Model::Embedding(_) => "embedding",
        }
    }

    /// `σ(|Q|, |E|)` of the model.
    pub fn joint_spectrum(&self, eps: f64) -> Result<JointSpectrum> {
        match self {
            Model::Pair(p) => joint_spectrum_with(p, eps, DEFAULT_DEDUP_TOL),
            Model::Atoms(m) => Ok(atom_spectra(m)?.0),
            Model::Embedding(e) => e.joint_spectrum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: Model,
    pub eps: Option<f64>,
}

impl ModelFile {
    pub fn new(model: Model) -> Self {
        ModelFile { model, eps: None }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Real {
    Num(f64),
    Text(String),
}

impl Real {
    fn value(&self) -> Result<f64> {
        match self {
            Real::Num(x) => Ok(*x),
            Real::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Schema(format!("invalid number `{s}`"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Cplx {
    Real(Real),
    Pair(Real, Real),
}

impl Cplx {
    fn value(&self) -> Result<Complex64> {
        match self {
            Cplx::Real(x) => Ok(Complex64::new(x.value()?, 0.0)),
            Cplx::Pair(a, b) => Ok(Complex64::new(a.value()?, b.value()?)),
        }
    }
}

#[derive(Deserialize)]
struct PairFile {
    a: Option<Vec<Real>>,
    b: Option<Vec<Real>>,
    #[serde(rename = "A")]
    a_mat: Option<Vec<Vec<Cplx>>>,
    #[serde(rename = "B")]
    b_mat: Option<Vec<Vec<Cplx>>>,
    eps: Option<Real>,
}

fn default_mult() -> usize {
    1
}

#[derive(Deserialize)]
struct AtomEntry {
    kind: AtomKind,
    s: Real,
    t: Real,
    #[serde(default = "default_mult")]
    mult: usize,
}

#[derive(Deserialize)]
struct AtomsFile {
    atoms: Vec<AtomEntry>,
    eps: Option<Real>,
}

#[derive(Deserialize)]
struct EmbeddingFile {
    levels: usize,
    width: usize,
    stride: usize,
    v_phase: Option<Cplx>,
    #[serde(rename = "E")]
    e: Vec<Vec<Cplx>>,
    #[serde(rename = "Q")]
    q: Vec<Vec<Cplx>>,
    eps: Option<Real>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Schema(format!("line {}, column {}: {e}", e.line(), e.column()))
}

fn reals(v: &[Real]) -> Result<Vec<f64>> {
    v.iter().map(Real::value).collect()
}

fn matrix(name: &str, rows: &[Vec<Cplx>]) -> Result<ComplexMatrix> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 {
        return Err(Error::Schema(format!("`{name}` must be a nonempty array of rows")));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Schema(format!("`{name}` has rows of unequal length")));
    }
    let mut m = ComplexMatrix::zeros(rows.len(), ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            m[(i, j)] = z.value()?;
        }
    }
    Ok(m)
}

fn opt_eps(eps: &Option<Real>) -> Result<Option<f64>> {
    eps.as_ref().map(Real::value).transpose()
}

/// Parses a model document. Syntax and field errors carry line and column.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let doc: Value = serde_json::from_str(text).map_err(json_error)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Schema("top level must be a JSON object".into()))?;
    let ty = match obj.get("type") {
        None if obj.contains_key("atoms") => "atoms",
        None => return Err(Error::Schema("missing `type` field".into())),
        Some(Value::String(s)) => s.as_str(),
        Some(_) => return Err(Error::Schema("`type` must be a string".into())),
    };
    match ty {
        "pair" => {
            let f: PairFile = serde_json::from_str(text).map_err(json_error)?;
            let eps = opt_eps(&f.eps)?;
            let pair = match (&f.a, &f.b, &f.a_mat, &f.b_mat) {
                (Some(a), Some(b), None, None) => PairModel::diagonal(reals(a)?, reals(b)?)?,
                (None, None, Some(a), Some(b)) => {
                    PairModel::matrices(matrix("A", a)?, matrix("B", b)?, eps.unwrap_or(DEFAULT_EPS))?
                }
                _ => {
                    return Err(Error::Schema(
                        "pair needs either diagonals `a`,`b` or matrices `A`,`B`".into(),
                    ))
                }
            };
            Ok(ModelFile { model: Model::Pair(pair), eps })
        }
        "atoms" => {
            let f: AtomsFile = serde_json::from_str(text).map_err(json_error)?;
            let atoms = f
                .atoms
                .iter()
                .map(|a| {
                    Ok(QAtom {
                        kind: a.kind,
                        s: a.s.value()?,
                        t: a.t.value()?,
                        mult: a.mult,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ModelFile {
                model: Model::Atoms(AtomModel::new(atoms)?),
                eps: opt_eps(&f.eps)?,
            })
        }
        "embedding" => {
            let f: EmbeddingFile = serde_json::from_str(text).map_err(json_error)?;
            let phase = match &f.v_phase {
                Some(z) => z.value()?,
                None => Complex64::new(1.0, 0.0),
            };
            let emb = ShiftEmbedding::new(f.levels, f.width, f.stride, phase, matrix("E", &f.e)?, matrix("Q", &f.q)?)?;
            Ok(ModelFile {
                model: Model::Embedding(emb),
                eps: opt_eps(&f.eps)?,
            })
        }
        other => Err(Error::Schema(format!("unknown model type `{other}`"))),
    }
}

fn num(x: f64) -> Value {
    Value::String(fmt17(x))
}

fn cnum(z: Complex64) -> Value {
    if z.im == 0.0 {
        num(z.re)
    } else {
        json!([fmt17(z.re), fmt17(z.im)])
    }
}

fn mat(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| cnum(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Serializes a model with every number as a 17-digit decimal string.
pub fn model_to_json(file: &ModelFile) -> String {
    let mut doc = match &file.model {
        Model::Pair(PairModel::Diagonal { a, b }) => json!({
            "type": "pair",
            "a": a.iter().copied().map(num).collect::<Vec<_>>(),
            "b": b.iter().copied().map(num).collect::<Vec<_>>(),
        }),
        Model::Pair(PairModel::Matrices { a, b }) => json!({
            "type": "pair",
            "A": mat(a),
            "B": mat(b),
        }),
        Model::Atoms(m) => json!({
            "type": "atoms",
            "atoms": m.atoms.iter().map(|a| json!({
                "kind": a.kind,
                "s": num(a.s),
                "t": num(a.t),
                "mult": a.mult,
            })).collect::<Vec<_>>(),
        }),
        Model::Embedding(e) => json!({
            "type": "embedding",
            "levels": e.levels(),
            "width": e.width(),
            "stride": e.stride(),
            "v_phase": cnum(e.v_phase()),
            "E": mat(e.e()),
            "Q": mat(e.q()),
        }),
    };
    if let Some(eps) = file.eps {
        doc["eps"] = num(eps);
    }
    let mut out = serde_json::to_string_pretty(&doc).expect("model documents serialize");
    out.push('\n');
    out
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}

pub fn save_model(path: impl AsRef<Path>, file: &ModelFile) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model_to_json(file))
        .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display())))
}
