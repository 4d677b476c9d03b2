//! Plain text code files. The header line is `q n k d count`; each further
//! line holds one codeword as its k*n RREF digits separated by spaces.
//! Component metadata goes to a JSON sidecar `<file>.meta.json`.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::construct::{ArtifactMeta, CodeArtifact, PackedStore};
use crate::gf::Field;
use crate::subspace::rref_data;

#[derive(Debug, Error)]
pub enum CodeFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("bad header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("header announces {expected} codewords, found {found}")]
    Count { expected: usize, found: usize },
    #[error("line {0}: codeword is not in reduced row echelon form")]
    NotCanonical(usize),
    #[error("metadata: {0}")]
    Meta(String),
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn write_code_to<W: Write>(w: &mut W, art: &CodeArtifact) -> io::Result<()> {
    writeln!(w, "{} {} {} {} {}", art.field().q(), art.n(), art.k(), art.declared_distance(), art.len())?;
    let mut digits = vec![0u8; art.n() * art.k()];
    let mut line = String::with_capacity(digits.len() * 3);
    for i in 0..art.len() {
        art.store().get_into(i, &mut digits);
        line.clear();
        for (j, d) in digits.iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&d.to_string());
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes the code file and its sidecar.
pub fn write_code(path: &Path, art: &CodeArtifact) -> Result<(), CodeFileError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_code_to(&mut w, art)?;
    w.flush()?;
    let meta = serde_json::to_string_pretty(&art.meta()).map_err(|e| CodeFileError::Meta(e.to_string()))?;
    std::fs::write(sidecar_path(path), meta + "\n")?;
    Ok(())
}

fn parse_num<T: std::str::FromStr>(s: Option<&str>, what: &str) -> Result<T, CodeFileError> {
    s.and_then(|x| x.parse().ok()).ok_or_else(|| CodeFileError::Header(format!("missing or invalid {what}")))
}

pub fn read_code_from<R: BufRead>(r: R, meta: Option<ArtifactMeta>) -> Result<CodeArtifact, CodeFileError> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| CodeFileError::Header("empty file".into()))??;
    let mut it = header.split_whitespace();
    let q: u32 = parse_num(it.next(), "q")?;
    let n: usize = parse_num(it.next(), "n")?;
    let k: usize = parse_num(it.next(), "k")?;
    let d: u32 = parse_num(it.next(), "d")?;
    let count: usize = parse_num(it.next(), "count")?;
    if it.next().is_some() {
        return Err(CodeFileError::Header("trailing fields".into()));
    }
    let field = Field::of_order(q).map_err(|e| CodeFileError::Header(e.to_string()))?;
    if k > n {
        return Err(CodeFileError::Header(format!("k={k} exceeds n={n}")));
    }
    let mut store = PackedStore::new(q, n * k);
    let mut digits = Vec::with_capacity(n * k);
    let mut found = 0;
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let lno = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        digits.clear();
        for tok in line.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| CodeFileError::Line { line: lno, msg: format!("bad digit {tok:?}") })?;
            if v >= q {
                return Err(CodeFileError::Line { line: lno, msg: format!("digit {v} outside GF({q})") });
            }
            digits.push(v as u8);
        }
        if digits.len() != n * k {
            return Err(CodeFileError::Line { line: lno, msg: format!("expected {} digits, got {}", n * k, digits.len()) });
        }
        let (red, piv) = rref_data(&field, k, n, &digits);
        if piv.len() != k || red != digits {
            return Err(CodeFileError::NotCanonical(lno));
        }
        store.push(&digits);
        found += 1;
    }
    if found != count {
        return Err(CodeFileError::Count { expected: count, found });
    }
    CodeArtifact::from_parts(&field, n, k, d, store, meta).map_err(|e| CodeFileError::Meta(e.to_string()))
}

/// Reads a code file, picking up its sidecar when present.
pub fn read_code(path: &Path) -> Result<CodeArtifact, CodeFileError> {
    let side = sidecar_path(path);
    let meta = if side.exists() {
        let text = std::fs::read_to_string(&side)?;
        Some(serde_json::from_str(&text).map_err(|e| CodeFileError::Meta(e.to_string()))?)
    } else {
        None
    };
    read_code_from(BufReader::new(File::open(path)?), meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{multilevel_construct, skeleton_6_4_3};

    fn bytes(art: &CodeArtifact) -> Vec<u8> {
        let mut out = Vec::new();
        write_code_to(&mut out, art).unwrap();
        out
    }

    #[test]
    fn round_trip_keeps_codewords_and_components() {
        let f = Field::of_order(2).unwrap();
        let art = multilevel_construct(&skeleton_6_4_3(), &f, 0).unwrap().0;
        let text = bytes(&art);
        let back = read_code_from(&text[..], Some(art.meta())).unwrap();
        assert_eq!(back.len(), 71);
        assert_eq!(back.store(), art.store());
        assert_eq!(back.components(), art.components());
        assert_eq!(bytes(&back), text);
    }

    #[test]
    fn empty_and_malformed_files() {
        let empty = read_code_from(&b"3 5 2 4 0\n"[..], None).unwrap();
        assert_eq!(empty.len(), 0);
        assert!(matches!(read_code_from(&b"2 3 1 2 2\n1 0 0\n"[..], None), Err(CodeFileError::Count { .. })));
        assert!(read_code_from(&b"2 3 1 2 1\n0 1 1\n"[..], None).is_ok());
        assert!(matches!(read_code_from(&b"2 3 1 2 1\n0 0 0\n"[..], None), Err(CodeFileError::NotCanonical(2))));
        assert!(matches!(read_code_from(&b"2 4 2 2 1\n1 1 0 0 0 1 0 0\n"[..], None), Err(CodeFileError::NotCanonical(2))));
        assert!(matches!(read_code_from(&b"2 3 1 2 1\n0 2 1\n"[..], None), Err(CodeFileError::Line { .. })));
        assert!(matches!(read_code_from(&b"6 3 1 2 0\n"[..], None), Err(CodeFileError::Header(_))));
    }
}
