//! Plain-text matrix format.
//!
//! ```text
//! rows cols
//! a11 a12 ...
//! ...
//! ```
//!
//! Entries are written with 17 significant digits, which round-trips every
//! finite `f64`.

use super::matrix::Matrix;
use super::LinalgError;

/// Formats `x` like C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    const DIGITS: i32 = 17;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= DIGITS {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl Matrix {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows(), self.cols());
        for i in 0..self.rows() {
            let line: Vec<String> = self.row(i).iter().map(|&x| format_g17(x)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Errors carry the 1-based line number.
    pub fn from_text(text: &str) -> Result<Matrix, LinalgError> {
        let parse_err = |line: usize, msg: String| LinalgError::Parse { line, msg };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing header line".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(parse_err(hline, format!("expected \"rows cols\", got {header:?}")));
        }
        let parse_dim = |s: &str| -> Result<usize, LinalgError> {
            match s.parse::<usize>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(parse_err(hline, format!("invalid dimension {s:?}"))),
            }
        };
        let rows = parse_dim(dims[0])?;
        let cols = parse_dim(dims[1])?;

        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(hline + r + 1, format!("missing row {}", r + 1)))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != cols {
                return Err(parse_err(
                    lineno,
                    format!("expected {cols} entries, found {}", fields.len()),
                ));
            }
            for f in fields {
                let x: f64 = f
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("invalid number {f:?}")))?;
                if !x.is_finite() {
                    return Err(parse_err(lineno, format!("non-finite entry {f:?}")));
                }
                data.push(x);
            }
        }
        if let Some((lineno, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(parse_err(lineno, format!("unexpected trailing content {extra:?}")));
        }
        Matrix::new(rows, cols, data)
    }
}
