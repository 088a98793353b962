//! Matrices, fractional weights, colorings and certified brackets.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, parse_rational, scaled_integer, to_pq, Rational};

/// Dense row-major `m x n` matrix of exact rationals, `m >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::Input("a matrix needs at least one row".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {n}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Matrix::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Matrix::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `A v` for a rational vector of length `n`.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect())
    }

    /// Entries as machine integers, if every entry is an integer fitting `i64`.
    pub fn to_i64(&self) -> Result<Vec<i64>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if !v.is_integer() {
                    return Err(Error::Input(format!(
                        "entry ({}, {}) = {} is not an integer",
                        k / self.cols + 1,
                        k % self.cols + 1,
                        to_pq(v)
                    )));
                }
                v.to_integer().to_i64().ok_or_else(|| {
                    Error::Input(format!(
                        "entry ({}, {}) does not fit in 64 bits",
                        k / self.cols + 1,
                        k % self.cols + 1
                    ))
                })
            })
            .collect()
    }

    /// Integer form `A = B / denom` with the smallest positive `denom`.
    pub fn scaled(&self) -> (Vec<BigInt>, BigInt) {
        let denom = common_denominator(&self.entries);
        let ints = self
            .entries
            .iter()
            .map(|v| scaled_integer(v, &denom))
            .collect();
        (ints, denom)
    }

    /// Text form: `m n` header then one line of lowest-terms `p/q` tokens
    /// per row.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(to_pq).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Parses the matrix text format. Blank lines and lines starting with `#`
/// are ignored; with `n = 0` the row lines may be omitted.
pub fn parse_matrix(text: &[u8]) -> Result<Matrix> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let (line, column) = position_of_byte(text, e.valid_up_to());
        Error::parse(line, column, "input is not valid UTF-8")
    })?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('#'));

    let (header_line, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::parse(1, 1, "missing `m n` header"))?;
    let header_tokens = tokens(header);
    if header_tokens.len() != 2 {
        return Err(Error::parse(
            header_line,
            1,
            format!("header must be `m n`, found {} tokens", header_tokens.len()),
        ));
    }
    let count = |(col, tok): (usize, &str)| -> Result<usize> {
        if !tok.bytes().all(|b| b.is_ascii_digit()) || tok.len() > 18 {
            return Err(Error::parse(header_line, col, format!("bad count {tok:?}")));
        }
        tok.parse()
            .map_err(|_| Error::parse(header_line, col, format!("bad count {tok:?}")))
    };
    let m = count(header_tokens[0])?;
    let n = count(header_tokens[1])?;
    if m == 0 {
        return Err(Error::parse(header_line, header_tokens[0].0, "a matrix needs at least one row"));
    }

    let mut entries = Vec::with_capacity(m.saturating_mul(n).min(1 << 20));
    let mut row = 0;
    let mut last_line = header_line;
    for (lineno, line) in lines {
        last_line = lineno;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        if row == m {
            return Err(Error::parse(
                lineno,
                toks.first().map_or(1, |t| t.0),
                format!("unexpected content after {m} rows"),
            ));
        }
        row += 1;
        if toks.len() != n {
            return Err(Error::parse(
                lineno,
                1,
                format!("matrix row {row}: expected {n} entries, found {}", toks.len()),
            ));
        }
        for (col, tok) in toks {
            let v = parse_rational(tok, lineno, col).map_err(|e| match e {
                Error::Parse {
                    line,
                    column,
                    message,
                } => Error::parse(line, column, format!("matrix row {row}: {message}")),
                other => other,
            })?;
            entries.push(v);
        }
    }
    if row < m && n > 0 {
        return Err(Error::parse(
            last_line + 1,
            1,
            format!("expected {m} rows, found {row}"),
        ));
    }
    if n == 0 {
        return Matrix::new(m, 0, Vec::new());
    }
    Matrix::new(m, n, entries)
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, (byte_pos, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((idx + 1, byte_pos)),
            (true, Some((col, b))) => {
                out.push((col, &line[b..byte_pos]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((col, b)) = start {
        out.push((col, &line[b..]));
    }
    out
}

fn position_of_byte(bytes: &[u8], offset: usize) -> (usize, usize) {
    let before = &bytes[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = offset - before.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

/// Fractional point `w` of the unit cube.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(Vec<Rational>);

impl Weight {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        let one = Rational::one();
        if let Some(k) = coords
            .iter()
            .position(|c| c.is_negative() || *c > one)
        {
            return Err(Error::Input(format!(
                "weight coordinate {} = {} lies outside [0, 1]",
                k + 1,
                to_pq(&coords[k])
            )));
        }
        Ok(Weight(coords))
    }

    /// `t` in every coordinate.
    pub fn constant(n: usize, t: Rational) -> Result<Self> {
        Weight::new(vec![t; n])
    }

    /// Comma- or whitespace-separated rational tokens.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coords = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let mut col = 1;
            for piece in line.split([',', ' ', '\t']) {
                if !piece.is_empty() {
                    coords.push(parse_rational(piece, lineno + 1, col)?);
                }
                col += piece.chars().count() + 1;
            }
        }
        Weight::new(coords)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl From<&Coloring> for Weight {
    fn from(x: &Coloring) -> Self {
        Weight(
            x.bits()
                .iter()
                .map(|&b| if b { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    }
}

/// Binary point `x` of `{0, 1}^n`. Orders lexicographically with `0 < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(Vec<bool>);

impl Coloring {
    pub fn new(bits: Vec<bool>) -> Self {
        Coloring(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Coloring(vec![false; n])
    }

    /// Bit `j` of the coloring is bit `n - 1 - j` of `mask`, so increasing
    /// masks enumerate colorings in lexicographic order.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Coloring((0..n).map(|j| (mask >> (n - 1 - j)) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        Weight::from(self).into_inner()
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LowerProvenance {
    OperatorNorm,
    GridSample,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UpperProvenance {
    OperatorNorm,
    GridLipschitz,
    Exact,
}

impl LowerProvenance {
    pub fn as_str(self) -> &'static str {
        match self {
            LowerProvenance::OperatorNorm => "operator_norm",
            LowerProvenance::GridSample => "grid_sample",
            LowerProvenance::Exact => "exact",
        }
    }
}

impl UpperProvenance {
    pub fn as_str(self) -> &'static str {
        match self {
            UpperProvenance::OperatorNorm => "operator_norm",
            UpperProvenance::GridLipschitz => "grid_lipschitz",
            UpperProvenance::Exact => "exact",
        }
    }
}

/// Certified interval `[lower, upper]` containing a linear discrepancy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lower: Rational,
    pub upper: Rational,
    pub lower_provenance: LowerProvenance,
    pub upper_provenance: UpperProvenance,
}

impl Bracket {
    pub fn new(
        lower: Rational,
        upper: Rational,
        lower_provenance: LowerProvenance,
        upper_provenance: UpperProvenance,
    ) -> Result<Self> {
        if lower > upper {
            return Err(Error::Input(format!(
                "bracket lower {} exceeds upper {}",
                to_pq(&lower),
                to_pq(&upper)
            )));
        }
        if lower_provenance == LowerProvenance::Exact
            && upper_provenance == UpperProvenance::Exact
            && lower != upper
        {
            return Err(Error::Input("exact bracket must be a single point".into()));
        }
        Ok(Bracket {
            lower,
            upper,
            lower_provenance,
            upper_provenance,
        })
    }

    pub fn exact(value: Rational) -> Self {
        Bracket {
            lower: value.clone(),
            upper: value,
            lower_provenance: LowerProvenance::Exact,
            upper_provenance: UpperProvenance::Exact,
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lower <= v && v <= &self.upper
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }
}

/// `max_i |r_i . (w - x)|`, the rounding error of `x` against `w`.
pub fn eval_residual(a: &Matrix, w: &Weight, x: &Coloring) -> Result<Rational> {
    if w.len() != a.cols() || x.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "matrix has {} columns, weight has {}, coloring has {}",
            a.cols(),
            w.len(),
            x.len()
        )));
    }
    let diff: Vec<Rational> = w
        .coords()
        .iter()
        .zip(x.bits())
        .map(|(wi, &xi)| if xi { wi - Rational::one() } else { wi.clone() })
        .collect();
    Ok(a
        .apply(&diff)?
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero))
}

/// `||A||_{inf -> inf}`: the largest row l1 norm.
pub fn operator_inf_norm(a: &Matrix) -> Rational {
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .fold(Rational::zero(), |acc, v| acc + v.abs())
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn w(v: &[(i64, i64)]) -> Weight {
        Weight::new(v.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
    }

    fn x(bits: &[u8]) -> Coloring {
        Coloring::new(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn residual_examples() {
        assert_eq!(
            eval_residual(&m(&[&[1]]), &w(&[(1, 2)]), &x(&[0])).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            eval_residual(&m(&[&[1, 1, 1]]), &w(&[(1, 2); 3]), &x(&[1, 1, 0])).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            eval_residual(&m(&[&[1, -2], &[3, 4]]), &w(&[(1, 1), (1, 1)]), &x(&[0, 0])).unwrap(),
            int(7)
        );
    }

    #[test]
    fn residual_dimension_mismatch() {
        let err = eval_residual(&m(&[&[1, 2]]), &w(&[(1, 2)]), &x(&[0])).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
        let err = eval_residual(&m(&[&[1]]), &w(&[(1, 2)]), &x(&[0, 1])).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn residual_with_no_columns_is_zero() {
        let a = Matrix::zeros(2, 0).unwrap();
        let r = eval_residual(&a, &Weight::new(vec![]).unwrap(), &Coloring::zeros(0)).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_inf_norm(&m(&[&[1, -2], &[3, 4]])), int(7));
        assert_eq!(operator_inf_norm(&m(&[&[0, 0, 0]])), int(0));
        assert_eq!(operator_inf_norm(&m(&[&[1, 1, 1]])), int(3));
    }

    #[test]
    fn parse_examples() {
        let a = parse_matrix(b"1 2\n1/2 -3\n").unwrap();
        assert_eq!(a, Matrix::from_rows(vec![vec![ratio(1, 2), int(-3)]]).unwrap());
        let a = parse_matrix(b"2 1\n1\n0\n").unwrap();
        assert_eq!(a, m(&[&[1], &[0]]));
        match parse_matrix(b"1 1\nabc\n") {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (2, 1));
                assert!(message.contains("row 1"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejections() {
        let cases: &[(&[u8], usize)] = &[
            (b"", 1),
            (b"1\n1\n", 1),
            (b"0 2\n", 1),
            (b"x 2\n1 2\n", 1),
            (b"2 2\n1 2\n3\n", 3),
            (b"1 2\n1 2 3\n", 2),
            (b"1 1\n1\n2\n", 3),
            (b"2 1\n1\n", 3),
            (b"1 2\n1 NaN\n", 2),
            (b"1 2\n1 inf\n", 2),
        ];
        for (text, line) in cases {
            match parse_matrix(text) {
                Err(Error::Parse { line: l, .. }) => {
                    assert_eq!(l, *line, "{:?}", String::from_utf8_lossy(text))
                }
                other => panic!("{:?} gave {other:?}", String::from_utf8_lossy(text)),
            }
        }
        assert!(parse_matrix(b"1 1\n\xff\n").is_err());
    }

    #[test]
    fn parse_column_positions() {
        match parse_matrix(b"1 3\n1  2/3 q\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 8)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_comments_blank_lines_and_decimals() {
        let a = parse_matrix(b"# comment\n2 2\n\n0.5 1\n# more\n-1.25 3/9\n").unwrap();
        assert_eq!(
            a,
            Matrix::from_rows(vec![vec![ratio(1, 2), int(1)], vec![ratio(-5, 4), ratio(1, 3)]])
                .unwrap()
        );
        let empty = parse_matrix(b"3 0\n").unwrap();
        assert_eq!((empty.rows(), empty.cols()), (3, 0));
    }

    #[test]
    fn serialize_is_canonical() {
        let a = Matrix::from_rows(vec![vec![ratio(2, 4), int(-3)], vec![int(0), ratio(7, 3)]])
            .unwrap();
        assert_eq!(a.serialize(), "2 2\n1/2 -3/1\n0/1 7/3\n");
        assert_eq!(parse_matrix(a.serialize().as_bytes()).unwrap(), a);
    }

    #[test]
    fn weight_validation_and_parsing() {
        assert!(Weight::new(vec![ratio(3, 2)]).is_err());
        assert!(Weight::new(vec![int(-1)]).is_err());
        let w = Weight::parse("1/2, 0.25,1").unwrap();
        assert_eq!(w.coords(), &[ratio(1, 2), ratio(1, 4), int(1)]);
        assert!(Weight::parse("1/2,x").is_err());
    }

    #[test]
    fn coloring_mask_order_is_lexicographic() {
        let all: Vec<Coloring> = (0..8).map(|k| Coloring::from_mask(k, 3)).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(Coloring::from_mask(0b100, 3).to_string(), "100");
    }

    #[test]
    fn bracket_invariants() {
        assert!(Bracket::new(
            int(2),
            int(1),
            LowerProvenance::GridSample,
            UpperProvenance::GridLipschitz
        )
        .is_err());
        assert!(Bracket::new(int(1), int(2), LowerProvenance::Exact, UpperProvenance::Exact).is_err());
        let b = Bracket::exact(ratio(1, 2));
        assert!(b.contains(&ratio(1, 2)));
        assert!(b.width().is_zero());
    }

    #[test]
    fn scaled_form() {
        let a = Matrix::from_rows(vec![vec![ratio(1, 2), ratio(-1, 3), int(2)]]).unwrap();
        let (ints, d) = a.scaled();
        assert_eq!(d, BigInt::from(6));
        assert_eq!(ints, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(12)]);
    }
}
