//! Plain-text matrix and vector files.
//!
//! Matrix: a `ROWS COLS` header line followed by `ROWS` lines of `COLS`
//! integers. Vector: a single line of `num/den` or integer tokens. Lines
//! starting with `#` and blank lines are ignored; reported line numbers are
//! 1-based positions in the original text.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Matrix, RatVec};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(hline, "header must be `ROWS COLS`"))?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(hline, "header must be `ROWS COLS`"));
    };
    if rows == 0 || cols == 0 {
        return Err(parse_err(hline, "matrix dimensions must be positive"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(hline + r + 1, format!("expected {rows} rows, found {r}")))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != cols {
            return Err(parse_err(ln, format!("expected {cols} entries, found {}", toks.len())));
        }
        for t in toks {
            data.push(
                t.parse::<T>()
                    .map_err(|_| parse_err(ln, format!("`{t}` is not an integer")))?,
            );
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content after the last row"));
    }
    Matrix::new(rows, cols, data)
}

pub fn parse_rat_vector<T: Scalar>(text: &str) -> Result<RatVec<T>> {
    let mut lines = content_lines(text);
    let (ln, l) = lines.next().ok_or_else(|| parse_err(1, "empty vector file"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(parse_err(extra, "vector must be a single line"));
    }
    let v: RatVec<T> = l.parse().map_err(|e| match e {
        Error::Parse { message, .. } => parse_err(ln, message),
        other => other,
    })?;
    if v.dim() == 0 {
        return Err(parse_err(ln, "empty vector"));
    }
    Ok(v)
}

pub fn parse_int_vector<T: Scalar>(text: &str) -> Result<Vec<T>> {
    let v = parse_rat_vector::<T>(text)?;
    v.to_integers().ok_or_else(|| parse_err(1, "expected integer entries"))
}

pub fn format_int_vector<T: Scalar>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn parses_with_comments() {
        let text = "# lattice basis\n2 2\n2 4\n# middle\n1 3\n";
        let m: Matrix<BigInt> = parse_matrix(text).unwrap();
        assert_eq!(m, Matrix::from_i64(&[[2, 4], [1, 3]]).unwrap());
    }

    #[test]
    fn wrong_token_count_reports_line() {
        let text = "2 2\n1 2 3\n4 5\n";
        match parse_matrix::<BigInt>(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn other_failures() {
        assert!(parse_matrix::<i64>("").is_err());
        assert!(parse_matrix::<i64>("2\n1 2\n").is_err());
        assert!(parse_matrix::<i64>("1 2\n1 x\n").is_err());
        assert!(parse_matrix::<i64>("2 1\n1\n").is_err());
        assert!(parse_matrix::<i64>("1 1\n1\n2\n").is_err());
        assert!(parse_matrix::<i64>("0 1\n").is_err());
    }

    #[test]
    fn big_entries_survive() {
        let text = "1 1\n123456789012345678901234567890\n";
        let m: Matrix<BigInt> = parse_matrix(text).unwrap();
        assert_eq!(parse_matrix::<BigInt>(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn vectors() {
        let v: RatVec<BigInt> = parse_rat_vector("# r\n1/2 -3\n").unwrap();
        assert_eq!(v.to_string(), "1/2 -3");
        assert!(parse_int_vector::<BigInt>("1/2 3").is_err());
        assert_eq!(parse_int_vector::<i64>("4 -5").unwrap(), vec![4, -5]);
        assert!(parse_rat_vector::<i64>("1\n2\n").is_err());
    }
}
