//! Matrix Market exchange format.
//!
//! Binary matrices are written as `coordinate pattern general`, dense ones as
//! `array real general` (column-major values, as the format prescribes).
//! Indices are 1-based in files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{BinaryMatrix, DenseMatrix, Matrix};
use crate::{Error, Result};

const PATTERN_HEADER: &str = "%%MatrixMarket matrix coordinate pattern general";
const ARRAY_HEADER: &str = "%%MatrixMarket matrix array real general";

/// Serializes a matrix to Matrix Market text.
pub fn to_matrix_market(matrix: &Matrix) -> String {
    let mut out = String::new();
    match matrix {
        Matrix::Binary(m) => {
            writeln!(out, "{PATTERN_HEADER}").unwrap();
            writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz()).unwrap();
            for (j, col) in m.columns().iter().enumerate() {
                for &i in col {
                    writeln!(out, "{} {}", i + 1, j + 1).unwrap();
                }
            }
        }
        Matrix::Dense(m) => {
            writeln!(out, "{ARRAY_HEADER}").unwrap();
            writeln!(out, "{} {}", m.rows(), m.cols()).unwrap();
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    // `{:?}` prints the shortest representation that round-trips.
                    writeln!(out, "{:?}", m.get(i, j)).unwrap();
                }
            }
        }
    }
    out
}

pub fn export_matrix(matrix: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_matrix_market(matrix)).map_err(|e| Error::io(path, e))
}

pub fn import_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_market(&text, path)
}

/// Writes a vector as one value per line, in round-trip precision.
pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(v.len() * 20);
    for x in v {
        writeln!(out, "{x:?}").unwrap();
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Reads one value per line; blank lines and lines starting with `%` or `#`
/// are skipped.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut v = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') || t.starts_with('#') {
            continue;
        }
        let x: f64 = t.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: format!("not a number: '{t}'"),
        })?;
        v.push(x);
    }
    Ok(v)
}

/// Parses Matrix Market text; `origin` is only used in diagnostics.
pub fn parse_matrix_market(text: &str, origin: &Path) -> Result<Matrix> {
    let err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(1, format!("bad header `{header}`")));
    }
    let dense = match (tokens[2].as_str(), tokens[3].as_str(), tokens[4].as_str()) {
        ("coordinate", "pattern", "general") => false,
        ("array", "real", "general") => true,
        _ => {
            return Err(err(
                1,
                format!("unsupported format `{header}` (need coordinate pattern general or array real general)"),
            ))
        }
    };
    let mut body = lines.filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'));
    let (size_no, size_line) = body
        .next()
        .ok_or_else(|| err(1, "missing size line".into()))?;
    let sizes = size_line
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| err(size_no, format!("bad size line: {e}")))?;

    if dense {
        let [rows, cols] = sizes[..] else {
            return Err(err(size_no, "array size line needs `rows cols`".into()));
        };
        let mut col_major = Vec::with_capacity(rows * cols);
        for (no, line) in body {
            let v: f64 = line
                .trim()
                .parse()
                .map_err(|e| err(no, format!("bad value `{}`: {e}", line.trim())))?;
            if !v.is_finite() {
                return Err(err(no, "non-finite value".into()));
            }
            col_major.push(v);
        }
        if col_major.len() != rows * cols {
            return Err(err(
                size_no,
                format!("expected {} values, found {}", rows * cols, col_major.len()),
            ));
        }
        let mut data = vec![0.0; rows * cols];
        for j in 0..cols {
            for i in 0..rows {
                data[i * cols + j] = col_major[j * rows + i];
            }
        }
        return Ok(Matrix::Dense(DenseMatrix::new(rows, cols, data)?));
    }

    let [rows, cols, nnz] = sizes[..] else {
        return Err(err(size_no, "coordinate size line needs `rows cols nnz`".into()));
    };
    if rows == 0 || cols == 0 {
        return Err(err(size_no, "empty matrix".into()));
    }
    let mut columns = vec![Vec::new(); cols];
    let mut count = 0;
    for (no, line) in body {
        let idx = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| err(no, format!("bad entry: {e}")))?;
        let [i, j] = idx[..] else {
            return Err(err(no, format!("expected `row col`, got `{line}`")));
        };
        if i == 0 || i > rows || j == 0 || j > cols {
            return Err(err(no, format!("entry ({i}, {j}) out of range {rows} x {cols}")));
        }
        let col: &mut Vec<usize> = &mut columns[j - 1];
        if col.contains(&(i - 1)) {
            return Err(err(no, format!("duplicate entry ({i}, {j})")));
        }
        col.push(i - 1);
        count += 1;
    }
    if count != nnz {
        return Err(err(size_no, format!("declared {nnz} entries, found {count}")));
    }
    Ok(Matrix::Binary(BinaryMatrix::from_columns(rows, columns)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{construct_array_matrix, construct_gaussian_matrix};

    #[test]
    fn binary_round_trip_and_layout() {
        let h = construct_array_matrix(3, 2).unwrap();
        let text = to_matrix_market(&h.clone().into());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "%%MatrixMarket matrix coordinate pattern general");
        assert_eq!(lines[1], "6 9 18");
        assert_eq!(lines.len() - 2, 18);
        let back = parse_matrix_market(&text, Path::new("mem")).unwrap();
        assert_eq!(back, Matrix::Binary(h));
    }

    #[test]
    fn dense_round_trip_is_exact() {
        let g = construct_gaussian_matrix(5, 7, 9).unwrap();
        let text = to_matrix_market(&g.clone().into());
        assert!(text.starts_with("%%MatrixMarket matrix array real general\n5 7\n"));
        let back = parse_matrix_market(&text, Path::new("mem")).unwrap();
        assert_eq!(back, Matrix::Dense(g));
    }

    #[test]
    fn duplicate_entry_reports_line() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n% c\n2 2 2\n1 1\n1 1\n";
        match parse_matrix_market(text, Path::new("dup.mtx")) {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("duplicate"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            "",
            "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1.0\n",
            "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n3 1\n",
            "%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 1\n",
            "%%MatrixMarket matrix array real general\n2 1\n1.0\n",
            "%%MatrixMarket matrix array real general\n1 1\nabc\n",
        ];
        for text in cases {
            assert!(parse_matrix_market(text, Path::new("bad")).is_err(), "{text:?}");
        }
    }
}
