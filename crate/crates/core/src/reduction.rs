//! Test-corpus generators from the hardness side: monotone NAE-3SAT
//! incidence matrices and subset-sum probes.
//!
//! For a monotone 3-CNF with incidence matrix `A`, every row of
//! `A (1/2 - x)` is `+-1/2` or `+-3/2`, so `lindisc(A, 1/2)` is `1/2` when
//! some assignment splits every clause and `3/2` otherwise.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{reduce_chunks, split_bits, Limits};
use crate::matrix::{Matrix, Weight};
use crate::rational::{parse_rational, to_pq, Rational};

/// A 3-CNF whose literals are all positive. Variables are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCnf {
    num_vars: usize,
    clauses: Vec<[usize; 3]>,
}

impl MonotoneCnf {
    pub fn new(num_vars: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        for (k, c) in clauses.iter().enumerate() {
            if c.iter().any(|&v| v == 0 || v > num_vars) {
                return Err(Error::Input(format!(
                    "clause {} = {c:?} mentions a variable outside 1..={num_vars}",
                    k + 1
                )));
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::Input(format!(
                    "clause {} = {c:?} repeats a variable",
                    k + 1
                )));
            }
        }
        Ok(MonotoneCnf { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// Text form: `n m`, then one line of three variable indices per
    /// clause. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing `n m` header"))?;
        let nums = |lineno: usize, line: &str| -> Result<Vec<usize>> {
            let mut col = 1;
            let mut out = Vec::new();
            for piece in line.split(' ') {
                if !piece.is_empty() {
                    let v = piece.trim().parse::<usize>().map_err(|_| {
                        Error::parse(lineno, col, format!("bad integer {piece:?}"))
                    })?;
                    out.push(v);
                }
                col += piece.chars().count() + 1;
            }
            Ok(out)
        };
        let h = nums(hl, header)?;
        if h.len() != 2 {
            return Err(Error::parse(hl, 1, "header must be `n m`"));
        }
        let (n, m) = (h[0], h[1]);
        let mut clauses = Vec::with_capacity(m.min(1 << 16));
        for (lineno, line) in lines {
            if clauses.len() == m {
                return Err(Error::parse(lineno, 1, format!("more than {m} clauses")));
            }
            let v = nums(lineno, line)?;
            if v.len() != 3 {
                return Err(Error::parse(
                    lineno,
                    1,
                    format!("a clause needs 3 variables, found {}", v.len()),
                ));
            }
            clauses.push([v[0], v[1], v[2]]);
        }
        if clauses.len() != m {
            return Err(Error::parse(
                text.lines().count() + 1,
                1,
                format!("expected {m} clauses, found {}", clauses.len()),
            ));
        }
        MonotoneCnf::new(n, clauses)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {}\n", c[0], c[1], c[2]));
        }
        out
    }

    /// Variable `j` is bit `n - j` of an assignment mask.
    fn clause_masks(&self) -> Vec<u64> {
        self.clauses
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | 1 << (self.num_vars - v)))
            .collect()
    }
}

/// `A_{i,j} = 1` iff variable `j` occurs in clause `i`.
pub fn incidence_matrix(c: &MonotoneCnf) -> Result<Matrix> {
    if c.clauses.is_empty() {
        return Err(Error::Input("a formula without clauses has no incidence matrix".into()));
    }
    let n = c.num_vars;
    let mut entries = vec![Rational::zero(); c.clauses.len() * n];
    for (i, clause) in c.clauses.iter().enumerate() {
        for &v in clause {
            entries[i * n + v - 1] = Rational::one();
        }
    }
    Matrix::new(c.clauses.len(), n, entries)
}

/// First assignment, in lexicographic order with `false < true` and
/// variable 1 most significant, that puts a true and a false literal in
/// every clause.
pub fn nae_satisfiable(c: &MonotoneCnf, limits: &Limits) -> Result<Option<Vec<bool>>> {
    let n = c.num_vars;
    if n > limits.sat_cap as usize {
        return Err(Error::refusal(
            "assignment enumeration width n",
            n as u128,
            limits.sat_cap as u128,
        ));
    }
    let masks = c.clause_masks();
    let prefix = split_bits(n as u32);
    let suffix = n as u32 - prefix;
    let splits = |a: u64| masks.iter().all(|&m| a & m != 0 && a & m != m);
    let first = reduce_chunks(
        limits.execution,
        1 << prefix,
        |chunk| {
            let base = (chunk as u64) << suffix;
            (0..1u64 << suffix).map(|low| base | low).find(|&a| splits(a))
        },
        |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        },
    )
    .flatten();
    Ok(first.map(|a| (1..=n).map(|v| a >> (n - v) & 1 == 1).collect()))
}

/// Uniform monotone 3-CNF: each clause is three distinct variables drawn
/// without replacement, sorted.
pub fn random_monotone_cnf(num_vars: usize, num_clauses: usize, rng: &mut ChaCha8Rng) -> Result<MonotoneCnf> {
    if num_vars < 3 {
        return Err(Error::Input(format!(
            "{num_vars} variables cannot form a 3-clause"
        )));
    }
    let clauses = (0..num_clauses)
        .map(|_| {
            let mut c = [0usize; 3];
            for (slot, v) in c.iter_mut().zip(sample(rng, num_vars, 3).iter()) {
                *slot = v + 1;
            }
            c.sort_unstable();
            c
        })
        .collect();
    MonotoneCnf::new(num_vars, clauses)
}

/// Draws random formulas from `seed` until one is NAE-unsatisfiable.
/// Returns the attempt index and the formula.
pub fn search_nae_unsat(
    num_vars: usize,
    num_clauses: usize,
    seed: u64,
    max_attempts: usize,
    limits: &Limits,
) -> Result<Option<(usize, MonotoneCnf)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..max_attempts {
        let c = random_monotone_cnf(num_vars, num_clauses, &mut rng)?;
        if nae_satisfiable(&c, limits)?.is_none() {
            return Ok(Some((attempt, c)));
        }
    }
    Ok(None)
}

/// Positive integers and a fraction `t in [0, 1]`; the probe asks whether
/// `t * sum(values)` is a subset sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    values: Vec<BigInt>,
    t: Rational,
}

impl SubsetSumInstance {
    pub fn new(values: Vec<BigInt>, t: Rational) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("subset-sum instance needs at least one value".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_positive()) {
            return Err(Error::Input(format!("subset-sum values must be positive, got {v}")));
        }
        if t.is_negative() || t > Rational::one() {
            return Err(Error::Input(format!("t = {} lies outside [0, 1]", to_pq(&t))));
        }
        Ok(SubsetSumInstance { values, t })
    }

    /// Comma-separated values and a rational `t`.
    pub fn parse(values: &str, t: &str) -> Result<Self> {
        let mut parsed = Vec::new();
        let mut col = 1;
        for piece in values.split(',') {
            let tok = piece.trim();
            let v = parse_rational(tok, 1, col)?;
            if !v.is_integer() {
                return Err(Error::parse(1, col, format!("value {tok:?} is not an integer")));
            }
            parsed.push(v.to_integer());
            col += piece.chars().count() + 1;
        }
        SubsetSumInstance::new(parsed, parse_rational(t.trim(), 1, 1)?)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn target(&self) -> Rational {
        &self.t * Rational::from_integer(self.values.iter().sum())
    }
}

/// The row matrix `[values]` and the constant weight `t 1`:
/// `lindisc(A, t 1) = 0` iff the target is a subset sum.
pub fn subset_sum_weight(s: &SubsetSumInstance) -> Result<(Matrix, Weight)> {
    let row: Vec<Rational> = s.values.iter().cloned().map(Rational::from_integer).collect();
    let n = row.len();
    Ok((Matrix::new(1, n, row)?, Weight::constant(n, s.t.clone())?))
}
