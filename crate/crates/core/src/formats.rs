//! JSON file formats for matrices, states, superoperators and Choi matrices,
//! plus the canonical writer used for every emitted document.
//!
//! All matrices are stored row-major as separate `re` and `im` arrays:
//!
//! ```text
//! matrix     {"dims":[rows,cols],"re":[..],"im":[..]}
//! density    {"kind":"density","dims":[d,d],"re":[..],"im":[..]}
//! bipartite  {"kind":"bipartite","dimS":dS,"dimB":dB,"dims":[n,n],"re":[..],"im":[..]}
//! superop    {"kind":"superop","dim":d,"convention":"column-stacking","re":[..],"im":[..]}
//! choi       {"kind":"choi","dim":d,"convention":"column-stacking","re":[..],"im":[..]}
//! ```
//!
//! Superoperator and Choi payloads are `d^2 x d^2`.

use std::io;

use serde::Deserialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

use crate::correlations::{BipartiteState, DiscordPath, DiscordVerdict};
use crate::error::{Error, Result};
use crate::matlin::cmat::{CMat, C64};
use crate::qdp::superop::{CPVerdict, ChoiMatrix, Superoperator};
use crate::states::DensityMatrix;

pub const VEC_CONVENTION: &str = "column-stacking";
/// Largest accepted side length of a stored matrix.
pub const MAX_SIDE: usize = 4096;
/// Largest accepted `dim` of a stored superoperator (`dim^2` per side).
pub const MAX_MAP_DIM: usize = 64;
/// Entries beyond this magnitude are rejected; products of two such values
/// still fit in an `f64`.
pub const MAX_ENTRY: f64 = 1e150;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawFile {
    kind: Option<String>,
    dims: Option<(usize, usize)>,
    dim: Option<usize>,
    dim_s: Option<usize>,
    dim_b: Option<usize>,
    convention: Option<String>,
    re: Vec<f64>,
    im: Vec<f64>,
}

fn parse_raw(bytes: &[u8]) -> Result<RawFile> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn expect_kind(raw: &RawFile, kind: &str) -> Result<()> {
    match raw.kind.as_deref() {
        Some(k) if k == kind => Ok(()),
        Some(k) => Err(Error::Parse(format!("expected kind \"{kind}\", found \"{k}\""))),
        None => Err(Error::Parse(format!("missing \"kind\":\"{kind}\""))),
    }
}

fn assemble(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> Result<CMat> {
    if rows == 0 || cols == 0 || rows > MAX_SIDE || cols > MAX_SIDE {
        return Err(Error::Parse(format!("unsupported shape {rows}x{cols}")));
    }
    let n = rows * cols;
    if re.len() != n || im.len() != n {
        return Err(Error::Parse(format!(
            "{rows}x{cols} matrix needs {n} re and im entries, got {} and {}",
            re.len(),
            im.len()
        )));
    }
    if re.iter().chain(im).any(|x| x.abs() > MAX_ENTRY) {
        return Err(Error::Parse(format!("entry magnitude above {MAX_ENTRY:e}")));
    }
    let data = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
    CMat::from_vec(rows, cols, data).map_err(|e| Error::Parse(e.to_string()))
}

fn matrix_of(raw: &RawFile) -> Result<CMat> {
    let (rows, cols) = raw.dims.ok_or_else(|| Error::Parse("missing \"dims\"".into()))?;
    assemble(rows, cols, &raw.re, &raw.im)
}

fn map_matrix_of(raw: &RawFile) -> Result<(usize, CMat)> {
    if raw.convention.as_deref() != Some(VEC_CONVENTION) {
        return Err(Error::Parse(format!("\"convention\" must be \"{VEC_CONVENTION}\"")));
    }
    let d = raw.dim.ok_or_else(|| Error::Parse("missing \"dim\"".into()))?;
    if d == 0 || d > MAX_MAP_DIM {
        return Err(Error::Parse(format!("unsupported dim {d}")));
    }
    Ok((d, assemble(d * d, d * d, &raw.re, &raw.im)?))
}

pub fn parse_matrix(bytes: &[u8]) -> Result<CMat> {
    matrix_of(&parse_raw(bytes)?)
}

/// Parses and validates a density matrix; a failed state check is reported
/// as [`Error::InvalidState`] naming the violated condition.
pub fn parse_density(bytes: &[u8]) -> Result<DensityMatrix> {
    let raw = parse_raw(bytes)?;
    expect_kind(&raw, "density")?;
    DensityMatrix::new(matrix_of(&raw)?)
}

pub fn parse_bipartite(bytes: &[u8]) -> Result<BipartiteState> {
    let raw = parse_raw(bytes)?;
    expect_kind(&raw, "bipartite")?;
    let ds = raw.dim_s.ok_or_else(|| Error::Parse("missing \"dimS\"".into()))?;
    let db = raw.dim_b.ok_or_else(|| Error::Parse("missing \"dimB\"".into()))?;
    BipartiteState::new(matrix_of(&raw)?, ds, db)
}

pub fn parse_superop(bytes: &[u8]) -> Result<Superoperator> {
    let raw = parse_raw(bytes)?;
    expect_kind(&raw, "superop")?;
    let (d, m) = map_matrix_of(&raw)?;
    Superoperator::new(d, m)
}

pub fn parse_choi(bytes: &[u8]) -> Result<ChoiMatrix> {
    let raw = parse_raw(bytes)?;
    expect_kind(&raw, "choi")?;
    let (d, m) = map_matrix_of(&raw)?;
    ChoiMatrix::new(d, m)
}

fn parts(m: &CMat) -> (Vec<f64>, Vec<f64>) {
    m.as_slice().iter().map(|z| (z.re, z.im)).unzip()
}

pub fn matrix_json(m: &CMat) -> Value {
    let (re, im) = parts(m);
    json!({"dims": [m.rows(), m.cols()], "re": re, "im": im})
}

pub fn density_json(rho: &DensityMatrix) -> Value {
    let mut v = matrix_json(rho.mat());
    v["kind"] = json!("density");
    v
}

pub fn bipartite_json(rho: &BipartiteState) -> Value {
    let mut v = matrix_json(rho.mat());
    v["kind"] = json!("bipartite");
    v["dimS"] = json!(rho.dim_s());
    v["dimB"] = json!(rho.dim_b());
    v
}

fn map_json(kind: &str, dim: usize, m: &CMat) -> Value {
    let (re, im) = parts(m);
    json!({"kind": kind, "dim": dim, "convention": VEC_CONVENTION, "re": re, "im": im})
}

pub fn superop_json(l: &Superoperator) -> Value {
    map_json("superop", l.dim(), l.mat())
}

pub fn choi_json(c: &ChoiMatrix) -> Value {
    map_json("choi", c.dim(), c.mat())
}

pub fn cp_verdict_json(v: &CPVerdict) -> Value {
    serde_json::to_value(v).expect("plain struct")
}

/// `{"isZero","residual","path","witnessBasis"}`, the basis as a matrix
/// whose columns are the basis vectors.
pub fn discord_verdict_json(v: &DiscordVerdict) -> Value {
    let path = match v.path {
        DiscordPath::Nondegenerate => "nondegenerate",
        DiscordPath::Degenerate => "degenerate",
    };
    json!({
        "isZero": v.is_zero,
        "residual": v.residual,
        "path": path,
        "witnessBasis": matrix_json(v.witness_basis.mat()),
    })
}

/// Writes reals as `{:.16e}` (17 significant digits); non-finite values
/// become `null`.
struct SigFigFormatter;

impl Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Single-line JSON with sorted object keys and 17-significant-digit reals,
/// so identical values always produce identical bytes.
pub fn canonical_json(value: &Value) -> String {
    use serde::Serialize;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value.serialize(&mut ser).expect("Value serialization is infallible");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
