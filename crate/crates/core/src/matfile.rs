//! Plain-text matrix files.
//!
//! ```text
//! 2 2 complex
//! 0+0i 1+0i
//! 0+1i 0+0i
//! ```
//!
//! A header `rows cols kind` (`kind` is `real`, `complex` or `sign`) is
//! followed by `rows` lines of `cols` whitespace-separated entries. Complex
//! entries are written `a+bi` / `a-bi` without spaces; sign entries are
//! exactly `-1` or `1`. Blank lines are ignored, so several blocks may follow
//! one another in a file.
//!
//! Reals are printed with the shortest representation that parses back to
//! the same bits, so every kind round-trips exactly.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::densecore::{ComplexMatrix, RealMatrix};
use crate::error::{Error, Result};
use crate::fit::FitModel;
use crate::signrank::SignMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFile {
    Real(RealMatrix),
    Complex(ComplexMatrix),
    Sign(SignMatrix),
}

impl MatrixFile {
    pub fn kind(&self) -> &'static str {
        match self {
            MatrixFile::Real(_) => "real",
            MatrixFile::Complex(_) => "complex",
            MatrixFile::Sign(_) => "sign",
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            MatrixFile::Real(m) => (m.rows(), m.cols()),
            MatrixFile::Complex(m) => (m.rows(), m.cols()),
            MatrixFile::Sign(m) => (m.rows(), m.cols()),
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            MatrixFile::Real(m) => write_real(m),
            MatrixFile::Complex(m) => write_complex(m),
            MatrixFile::Sign(m) => write_sign(m),
        }
    }
}

/// Shortest round-trip decimal form; exponent notation outside `[1e-5, 1e16)`.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
}

fn write_rows<T: Copy>(
    rows: usize,
    cols: usize,
    kind: &str,
    get: impl Fn(usize, usize) -> T,
    fmt: impl Fn(T) -> String,
) -> String {
    let mut out = format!("{rows} {cols} {kind}\n");
    for i in 0..rows {
        for j in 0..cols {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&fmt(get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn write_real(m: &RealMatrix) -> String {
    write_rows(m.rows(), m.cols(), "real", |i, j| m[(i, j)], format_real)
}

pub fn write_complex(m: &ComplexMatrix) -> String {
    write_rows(
        m.rows(),
        m.cols(),
        "complex",
        |i, j| m[(i, j)],
        format_complex,
    )
}

pub fn write_sign(m: &SignMatrix) -> String {
    write_rows(
        m.rows(),
        m.cols(),
        "sign",
        |i, j| m.get(i, j),
        |v| v.to_string(),
    )
}

/// Model file: the embedding block `E` (n×m) followed by `w` as a 1×m block.
pub fn write_model(model: &FitModel) -> String {
    let mut out = write_complex(&model.e);
    let w = ComplexMatrix::new(1, model.m(), model.w.clone()).expect("finite weights");
    let _ = write!(out, "{}", write_complex(&w));
    out
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Whitespace-separated tokens with 1-based column positions.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..k]));
                start = None;
            }
            (false, None) => start = Some(k),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_real_token(tok: &str) -> Option<f64> {
    tok.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_complex_token(tok: &str) -> Option<Complex64> {
    let body = tok.strip_suffix('i')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re = parse_real_token(&body[..split])?;
    let im_text = &body[split..];
    // "a+-b" and similar double signs are malformed
    if im_text.len() < 2 || matches!(im_text.as_bytes()[1], b'+' | b'-') {
        return None;
    }
    let im = parse_real_token(im_text)?;
    Some(Complex64::new(re, im))
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .map(|(k, l)| (k + 1, l))
            .find(|(_, l)| !l.trim().is_empty())
    }
}

fn parse_block(lines: &mut Lines<'_>) -> Result<Option<MatrixFile>> {
    let Some((hline, header)) = lines.next_content() else {
        return Ok(None);
    };
    let toks = tokens(header);
    if toks.len() != 3 {
        return Err(perr(hline, 1, "header must be `rows cols kind`"));
    }
    let dim = |(col, t): (usize, &str)| -> Result<usize> {
        match t.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(perr(
                hline,
                col,
                format!("expected a positive integer, found `{t}`"),
            )),
        }
    };
    let rows = dim(toks[0])?;
    let cols = dim(toks[1])?;
    let (kcol, kind) = toks[2];
    if !matches!(kind, "real" | "complex" | "sign") {
        return Err(perr(hline, kcol, format!("unknown kind `{kind}`")));
    }

    let mut reals = Vec::new();
    let mut cplx = Vec::new();
    let mut signs = Vec::new();
    for r in 0..rows {
        let Some((ln, text)) = lines.next_content() else {
            return Err(perr(hline, 1, format!("expected {rows} rows, found {r}")));
        };
        let toks = tokens(text);
        if toks.len() != cols {
            return Err(perr(
                ln,
                1,
                format!("expected {cols} entries, found {}", toks.len()),
            ));
        }
        for (col, t) in toks {
            match kind {
                "real" => reals.push(
                    parse_real_token(t).ok_or_else(|| perr(ln, col, format!("bad real `{t}`")))?,
                ),
                "complex" => cplx.push(
                    parse_complex_token(t)
                        .ok_or_else(|| perr(ln, col, format!("bad complex `{t}`")))?,
                ),
                _ => signs.push(match t {
                    "1" => 1,
                    "-1" => -1,
                    _ => {
                        return Err(perr(
                            ln,
                            col,
                            format!("sign entry must be -1 or 1, found `{t}`"),
                        ))
                    }
                }),
            }
        }
    }
    let m = match kind {
        "real" => MatrixFile::Real(RealMatrix::new(rows, cols, reals)?),
        "complex" => MatrixFile::Complex(ComplexMatrix::new(rows, cols, cplx)?),
        _ => MatrixFile::Sign(SignMatrix::new(rows, cols, signs)?),
    };
    Ok(Some(m))
}

/// Parses every block in `text`.
pub fn parse_all(text: &str) -> Result<Vec<MatrixFile>> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let mut out = Vec::new();
    while let Some(m) = parse_block(&mut lines)? {
        out.push(m);
    }
    Ok(out)
}

/// Parses a file holding exactly one matrix.
pub fn parse(text: &str) -> Result<MatrixFile> {
    let mut blocks = parse_all(text)?;
    match blocks.len() {
        0 => Err(perr(1, 1, "empty input")),
        1 => Ok(blocks.pop().expect("one block")),
        _ => Err(perr(
            1,
            1,
            format!("expected one matrix, found {}", blocks.len()),
        )),
    }
}

/// Reads a model file written by [`write_model`].
pub fn parse_model(text: &str) -> Result<FitModel> {
    let blocks = parse_all(text)?;
    match blocks.as_slice() {
        [MatrixFile::Complex(e), MatrixFile::Complex(w)] if w.rows() == 1 => {
            FitModel::new(e.clone(), w.data().to_vec())
        }
        _ => Err(perr(
            1,
            1,
            "model file needs a complex E block followed by a 1xm complex w block",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lift_fixture_text() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(write_complex(&m), "2 2 complex\n0+0i 1+0i\n0+1i 0+0i\n");
    }

    #[test]
    fn complex_tokens() {
        assert_eq!(
            parse_complex_token("1.5-2i"),
            Some(Complex64::new(1.5, -2.0))
        );
        assert_eq!(
            parse_complex_token("-1e-5+3E+2i"),
            Some(Complex64::new(-1e-5, 300.0))
        );
        assert_eq!(
            parse_complex_token("-0-0i").map(|z| z.im.is_sign_negative()),
            Some(true)
        );
        for bad in ["1+2", "i", "1i", "1+-2i", "nan+0i", "1+infi", "abc"] {
            assert_eq!(parse_complex_token(bad), None, "{bad}");
        }
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(-2.5), "-2.5");
        assert_eq!(format_real(1e-20), "1e-20");
        assert_eq!(format_real(3e300), "3e300");
        assert_eq!(format_complex(Complex64::new(1.5, -2.0)), "1.5-2i");
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse("2 2 real\n0 1\n0 x\n") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (3, 3)),
            other => panic!("{other:?}"),
        }
        match parse("2 2 matrix\n") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (1, 5)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("2 2 real\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("1 2 real\n0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse("0 2 real\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1 1 sign\n0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1 1 real\ninf\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn sign_and_model_files() {
        let y = parse("2 2 sign\n-1 -1\n1 1\n").unwrap();
        assert_eq!(
            y,
            MatrixFile::Sign(SignMatrix::new(2, 2, vec![-1, -1, 1, 1]).unwrap())
        );
        assert_eq!(y.serialize(), "2 2 sign\n-1 -1\n1 1\n");

        let model = FitModel::new(
            ComplexMatrix::new(
                2,
                1,
                vec![Complex64::new(0.1, -0.2), Complex64::new(3.0, 0.0)],
            )
            .unwrap(),
            vec![Complex64::new(-1.0, 0.5)],
        )
        .unwrap();
        let text = write_model(&model);
        assert_eq!(text, "2 1 complex\n0.1-0.2i\n3+0i\n1 1 complex\n-1+0.5i\n");
        assert_eq!(parse_model(&text).unwrap(), model);
        assert!(parse_model("1 1 real\n1\n").is_err());
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![
            any::<f64>().prop_filter("finite", |x| x.is_finite()),
            -1e3f64..1e3,
        ]
    }

    proptest! {
        #[test]
        fn real_round_trip_bit_exact(rows in 1usize..4, cols in 1usize..4, seed in prop::collection::vec(finite(), 16)) {
            let m = RealMatrix::new(rows, cols, seed[..rows * cols].to_vec()).unwrap();
            let back = parse(&write_real(&m)).unwrap();
            let MatrixFile::Real(back) = back else { panic!("kind changed") };
            for (a, b) in m.data().iter().zip(back.data()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }

        #[test]
        fn complex_round_trip_bit_exact(re in finite(), im in finite()) {
            let m = ComplexMatrix::new(1, 1, vec![Complex64::new(re, im)]).unwrap();
            let MatrixFile::Complex(back) = parse(&write_complex(&m)).unwrap() else { panic!("kind changed") };
            prop_assert_eq!(back[(0, 0)].re.to_bits(), re.to_bits());
            prop_assert_eq!(back[(0, 0)].im.to_bits(), im.to_bits());
        }
    }
}
