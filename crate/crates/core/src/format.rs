//! The matrix text format shared by program, challenge and secret files:
//! optional `# key=value` header lines, then one line of `0`/`1` characters
//! per row, every line newline-terminated.
//!
//! ```text
//! # theta=1/8
//! 1000
//! 1100
//! ```
//!
//! A matrix with no rows carries its width in an `n` header.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Header lines plus the matrix body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub headers: Vec<(String, String)>,
    pub matrix: BitMatrix,
}

impl MatrixFile {
    pub fn new(matrix: BitMatrix) -> Self {
        Self {
            headers: Vec::new(),
            matrix,
        }
    }

    pub fn with_header(mut self, key: &str, value: impl ToString) -> Self {
        self.headers.push((key.to_string(), value.to_string()));
        self
    }

    pub fn header(&self, key: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut headers = Vec::new();
        let mut rows: Vec<BitVector> = Vec::new();
        let mut width: Option<usize> = None;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if let Some(rest) = line.strip_prefix('#') {
                if !rows.is_empty() {
                    return Err(Error::parse(lineno, "header after matrix rows"));
                }
                let (k, v) = parse_header(rest)
                    .ok_or_else(|| Error::parse(lineno, format!("malformed header {line:?}")))?;
                headers.push((k, v));
                continue;
            }
            let row: BitVector = line
                .parse()
                .map_err(|_| Error::parse(lineno, "row contains characters other than 0 and 1"))?;
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(Error::parse(
                        lineno,
                        format!("row has {} columns, expected {w}", row.len()),
                    ))
                }
                _ => {}
            }
            rows.push(row);
        }
        let declared = headers
            .iter()
            .find(|(k, _)| k == "n")
            .map(|(_, v)| {
                v.parse::<usize>()
                    .map_err(|_| Error::parse(0, format!("bad n header {v:?}")))
            })
            .transpose()?;
        let cols = match (width, declared) {
            (Some(w), Some(d)) if w != d => {
                return Err(Error::parse(0, format!("rows have {w} columns but n={d}")))
            }
            (Some(w), _) => w,
            (None, Some(d)) => d,
            (None, None) => 0,
        };
        headers.retain(|(k, _)| k != "n");
        Ok(Self {
            headers,
            matrix: BitMatrix::from_rows(cols, rows)?,
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.headers {
            out.push_str(&format!("# {k}={v}\n"));
        }
        if self.matrix.row_count() == 0 {
            out.push_str(&format!("# n={}\n", self.matrix.cols()));
        }
        for r in self.matrix.rows() {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

fn parse_header(rest: &str) -> Option<(String, String)> {
    let (k, v) = rest.trim().split_once('=')?;
    let (k, v) = (k.trim(), v.trim());
    let valid =
        !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !v.is_empty();
    valid.then(|| (k.to_string(), v.to_string()))
}

/// One `0`/`1` line per vector; every vector must have length `width` when
/// a width is given.
pub fn parse_vectors(text: &str, width: Option<usize>) -> Result<Vec<BitVector>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let v: BitVector = line
            .parse()
            .map_err(|_| Error::parse(idx + 1, "sample contains characters other than 0 and 1"))?;
        let expected = width.or_else(|| out.first().map(BitVector::len));
        if let Some(w) = expected {
            if v.len() != w {
                return Err(Error::parse(
                    idx + 1,
                    format!("sample has length {}, expected {w}", v.len()),
                ));
            }
        }
        out.push(v);
    }
    Ok(out)
}

pub fn serialize_vectors(vectors: &[BitVector]) -> String {
    let mut out = String::new();
    for v in vectors {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}
