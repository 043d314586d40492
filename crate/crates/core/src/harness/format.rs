//! The DFN-1 text format.
//!
//! ```text
//! dfn-object v1 field=Q n=2 dim=2
//! 0 0
//! 1 0
//! ```
//!
//! Morphism files name their source and target object files on `src=` and
//! `dst=` lines; ses files name two morphism files on `i=` and `p=` lines.
//! Relative paths are resolved against the directory of the file that
//! mentions them.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::category::{DiffMorphism, DiffObject, ShortExactSeq};
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Matrix};

/// What kind of file a header announces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Object,
    Morphism,
    Ses,
}

/// A parsed header: the kind plus its `key=value` fields.
#[derive(Clone, Debug)]
pub struct Header {
    pub kind: FileKind,
    fields: HashMap<String, String>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl Header {
    pub fn parse(line: &str) -> Result<Header> {
        let mut tokens = line.split_whitespace();
        let kind = match tokens.next() {
            Some("dfn-object") => FileKind::Object,
            Some("dfn-morphism") => FileKind::Morphism,
            Some("dfn-ses") => FileKind::Ses,
            Some(other) => return Err(parse_err(format!("unknown header `{other}`"))),
            None => return Err(parse_err("empty file")),
        };
        match tokens.next() {
            Some("v1") => {}
            Some(v) => return Err(parse_err(format!("unsupported version `{v}`"))),
            None => return Err(parse_err("missing version")),
        }
        let mut fields = HashMap::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| parse_err(format!("bad header field `{tok}`")))?;
            if fields.insert(k.to_string(), v.to_string()).is_some() {
                return Err(parse_err(format!("repeated header field `{k}`")));
            }
        }
        Ok(Header { kind, fields })
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.fields
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| parse_err(format!("header lacks `{key}=`")))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let v = self.get(key)?;
        v.parse().map_err(|_| parse_err(format!("`{key}={v}` is not a count")))
    }

    pub fn field(&self) -> Result<FieldSpec> {
        self.get("field")?.parse()
    }

    pub fn n(&self) -> Result<usize> {
        self.usize("n")
    }
}

/// Non-blank lines with surrounding whitespace trimmed.
fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty())
}

fn parse_matrix<'a>(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    lines: &mut impl Iterator<Item = &'a str>,
) -> Result<Matrix> {
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| parse_err(format!("expected {rows} matrix rows, found {i}")))?;
        let row: Vec<_> = line.split_whitespace().collect();
        if row.len() != cols {
            return Err(parse_err(format!("row {} has {} entries, expected {cols}", i + 1, row.len())));
        }
        for tok in row {
            data.push(field.parse_scalar(tok)?);
        }
    }
    Matrix::from_vec(field, rows, cols, data)
}

fn expect_end<'a>(mut lines: impl Iterator<Item = &'a str>) -> Result<()> {
    match lines.next() {
        Some(extra) => Err(parse_err(format!("trailing content `{extra}`"))),
        None => Ok(()),
    }
}

fn write_matrix(out: &mut String, m: &Matrix) {
    let field = m.field();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| field.format_scalar(m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

pub fn object_to_string(x: &DiffObject) -> String {
    let mut out = format!("dfn-object v1 field={} n={} dim={}\n", field_tag(x.field()), x.n(), x.dim());
    write_matrix(&mut out, x.eps());
    out
}

/// `Q` or the decimal prime, as written in headers and on the command line.
pub fn field_tag(field: FieldSpec) -> String {
    match field.characteristic() {
        Some(p) => p.to_string(),
        None => "Q".to_string(),
    }
}

/// Parses the matrix of an object file without checking `eps^n = 0`.
pub fn parse_object_raw(text: &str) -> Result<(FieldSpec, usize, Matrix)> {
    let mut lines = content_lines(text);
    let header = Header::parse(lines.next().unwrap_or(""))?;
    if header.kind != FileKind::Object {
        return Err(parse_err("expected a dfn-object file"));
    }
    let field = header.field()?;
    let n = header.n()?;
    let d = header.usize("dim")?;
    let eps = parse_matrix(field, d, d, &mut lines)?;
    expect_end(lines)?;
    Ok((field, n, eps))
}

pub fn parse_object(text: &str) -> Result<DiffObject> {
    let (field, n, eps) = parse_object_raw(text)?;
    DiffObject::with_field(field, n, eps)
}

/// `src` and `dst` are written as given.
pub fn morphism_to_string(f: &DiffMorphism, src: &str, dst: &str) -> String {
    let m = f.matrix();
    let mut out = format!(
        "dfn-morphism v1 field={} n={} rows={} cols={}\nsrc={src}\ndst={dst}\n",
        field_tag(f.field()),
        f.n(),
        m.rows(),
        m.cols()
    );
    write_matrix(&mut out, m);
    out
}

fn path_line<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    line.and_then(|l| l.strip_prefix(key)?.strip_prefix('='))
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .ok_or_else(|| parse_err(format!("expected a `{key}=<path>` line")))
}

/// A morphism file before its objects are loaded.
pub struct RawMorphism {
    pub field: FieldSpec,
    pub n: usize,
    pub src: String,
    pub dst: String,
    pub matrix: Matrix,
}

pub fn parse_morphism_raw(text: &str) -> Result<RawMorphism> {
    let mut lines = content_lines(text);
    let header = Header::parse(lines.next().unwrap_or(""))?;
    if header.kind != FileKind::Morphism {
        return Err(parse_err("expected a dfn-morphism file"));
    }
    let field = header.field()?;
    let n = header.n()?;
    let rows = header.usize("rows")?;
    let cols = header.usize("cols")?;
    let src = path_line(lines.next(), "src")?.to_string();
    let dst = path_line(lines.next(), "dst")?.to_string();
    let matrix = parse_matrix(field, rows, cols, &mut lines)?;
    expect_end(lines)?;
    Ok(RawMorphism { field, n, src, dst, matrix })
}

pub fn ses_to_string(i: &str, p: &str) -> String {
    format!("dfn-ses v1\ni={i}\np={p}\n")
}

pub fn parse_ses_raw(text: &str) -> Result<(String, String)> {
    let mut lines = content_lines(text);
    let header = Header::parse(lines.next().unwrap_or(""))?;
    if header.kind != FileKind::Ses {
        return Err(parse_err("expected a dfn-ses file"));
    }
    let i = path_line(lines.next(), "i")?.to_string();
    let p = path_line(lines.next(), "p")?.to_string();
    expect_end(lines)?;
    Ok((i, p))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

/// `rel` resolved against the directory holding `file`.
pub fn resolve(file: &Path, rel: &str) -> PathBuf {
    let rel = Path::new(rel);
    if rel.is_absolute() {
        return rel.to_path_buf();
    }
    match file.parent() {
        Some(dir) => dir.join(rel),
        None => rel.to_path_buf(),
    }
}

pub fn load_object(path: &Path) -> Result<DiffObject> {
    parse_object(&read_file(path)?)
}

pub fn load_morphism(path: &Path) -> Result<DiffMorphism> {
    let raw = parse_morphism_raw(&read_file(path)?)?;
    let src = load_object(&resolve(path, &raw.src))?;
    let dst = load_object(&resolve(path, &raw.dst))?;
    check_header(&raw, &src, &dst)?;
    DiffMorphism::new(&src, &dst, raw.matrix)
}

pub(crate) fn check_header(raw: &RawMorphism, src: &DiffObject, dst: &DiffObject) -> Result<()> {
    for obj in [src, dst] {
        if obj.field() != raw.field {
            return Err(Error::FieldMismatch(raw.field.to_string(), obj.field().to_string()));
        }
        if obj.n() != raw.n {
            return Err(Error::DegreeMismatch(raw.n, obj.n()));
        }
    }
    Ok(())
}

pub fn load_ses(path: &Path) -> Result<ShortExactSeq> {
    let (i, p) = parse_ses_raw(&read_file(path)?)?;
    let i = load_morphism(&resolve(path, &i))?;
    let p = load_morphism(&resolve(path, &p))?;
    ShortExactSeq::new(i, p)
}

pub fn save_object(path: &Path, x: &DiffObject) -> Result<()> {
    write_file(path, &object_to_string(x))
}

/// Writes `f` to `path`, and its source and target next to it as
/// `<stem>.src.dfn` and `<stem>.dst.dfn`.
pub fn save_morphism_with_objects(path: &Path, f: &DiffMorphism) -> Result<()> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| parse_err(format!("bad output path {}", path.display())))?;
    let src = format!("{stem}.src.dfn");
    let dst = format!("{stem}.dst.dfn");
    save_object(&resolve(path, &src), f.src())?;
    save_object(&resolve(path, &dst), f.dst())?;
    write_file(path, &morphism_to_string(f, &src, &dst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::jordan_block;

    #[test]
    fn object_round_trip() {
        let q = FieldSpec::rationals();
        let eps = Matrix::from_fn(q, 2, 2, |i, j| {
            if i == 1 && j == 0 { q.parse_scalar("-3/4").unwrap() } else { q.zero() }
        });
        let x = DiffObject::new(2, eps).unwrap();
        let text = object_to_string(&x);
        assert_eq!(text, "dfn-object v1 field=Q n=2 dim=2\n0 0\n-3/4 0\n");
        assert_eq!(parse_object(&text).unwrap(), x);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_object("dfn-object v1 field=5 n=2 dim=2\n0 0\n").is_err());
        assert!(parse_object("dfn-object v1 field=6 n=2 dim=1\n0\n").is_err());
        assert!(parse_object("dfn-object v2 field=5 n=2 dim=1\n0\n").is_err());
        assert!(parse_object("dfn-object v1 field=5 n=2 dim=1\n0 1\n").is_err());
        assert!(parse_object("dfn-object v1 field=5 n=2 dim=1\n0\n0\n").is_err());
        assert!(matches!(
            parse_object("dfn-object v1 field=5 n=2 dim=1\n1\n"),
            Err(Error::NilpotencyViolated { .. })
        ));
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f = FieldSpec::prime(5).unwrap();
        let j2 = jordan_block(f, 2, 3).unwrap();
        let j3 = jordan_block(f, 3, 3).unwrap();
        let m = Matrix::from_i64_rows(f, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let g = DiffMorphism::new(&j2, &j3, m).unwrap();
        let path = dir.path().join("g.dfn");
        save_morphism_with_objects(&path, &g).unwrap();
        let back = load_morphism(&path).unwrap();
        assert_eq!(back.matrix(), g.matrix());
        assert_eq!(back.src(), &j2);
    }
}
