//! Linear discrepancy of a single row.
//!
//! For a row `a`, `2 lindisc(a)` is the widest gap between consecutive
//! subset sums. Adding entries in decreasing magnitude order, a new entry
//! of magnitude `m` turns a widest gap `l` into `max(m, l - m)`, and the
//! signs of the entries do not matter. [`lindisc_onerow`] folds that
//! recursion; [`round_onerow`] narrows a bracket of subset sums around
//! `a . w` the same way.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Limits;
use crate::matrix::{Coloring, Matrix, Weight};
use crate::rational::{half, Rational};

/// Sorted subset sums of a row and their widest consecutive gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapProfile {
    pub sums: Vec<Rational>,
    pub max_gap: Rational,
    /// First `j` with `sums[j + 1] - sums[j] == max_gap`; `None` when there
    /// is a single sum.
    pub witness_pair: Option<usize>,
}

fn single_row(a: &Matrix) -> Result<&[Rational]> {
    if a.rows() != 1 {
        return Err(Error::Input(format!(
            "expected a single-row matrix, got {} rows",
            a.rows()
        )));
    }
    Ok(a.row(0))
}

/// Column indices ordered by decreasing magnitude, ties in input order.
fn by_decreasing_magnitude(row: &[Rational]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..row.len()).collect();
    idx.sort_by(|&i, &j| row[j].abs().cmp(&row[i].abs()));
    idx
}

/// Exact `lindisc` of a `1 x n` matrix in `O(n log n)` rational operations.
pub fn lindisc_onerow(a: &Matrix) -> Result<Rational> {
    let row = single_row(a)?;
    let mut mags: Vec<Rational> = row
        .iter()
        .filter(|v| !v.is_zero())
        .map(Signed::abs)
        .collect();
    if mags.is_empty() {
        return Ok(Rational::zero());
    }
    mags.sort_by(|x, y| y.cmp(x));
    let mut gap = mags[0].clone();
    for m in &mags[1..] {
        let rest = &gap - m;
        gap = if *m >= rest { m.clone() } else { rest };
    }
    Ok(gap * half())
}

/// Widest subset-sum gap of every prefix of the magnitude-sorted row:
/// entry `k` is the gap after the `k + 1` largest entries.
pub fn gap_recursion(a: &Matrix) -> Result<Vec<Rational>> {
    let row = single_row(a)?;
    let mut out: Vec<Rational> = Vec::with_capacity(row.len());
    for j in by_decreasing_magnitude(row) {
        let m = row[j].abs();
        let next = match out.last() {
            None => m,
            Some(prev) => {
                let rest = prev - &m;
                if m >= rest {
                    m
                } else {
                    rest
                }
            }
        };
        out.push(next);
    }
    Ok(out)
}

/// Enumerates all `2^n` subset sums. Exponential; refuses `n` above
/// `limits.enumeration_cap`.
pub fn gap_profile_bruteforce(a: &Matrix, limits: &Limits) -> Result<GapProfile> {
    let row = single_row(a)?;
    let n = row.len();
    if n > limits.enumeration_cap as usize {
        return Err(Error::refusal(
            "subset-sum enumeration width n",
            n as u128,
            limits.enumeration_cap as u128,
        ));
    }
    let (ints, denom) = a.scaled();
    let mut sums: Vec<BigInt> = vec![BigInt::zero()];
    sums.reserve((1usize << n) - 1);
    for v in &ints {
        let shifted: Vec<BigInt> = sums.iter().map(|s| s + v).collect();
        sums.extend(shifted);
    }
    sums.sort();
    let mut max_gap = BigInt::zero();
    let mut witness_pair = None;
    for (j, pair) in sums.windows(2).enumerate() {
        let g = &pair[1] - &pair[0];
        if witness_pair.is_none() || g > max_gap {
            max_gap = g;
            witness_pair = Some(j);
        }
    }
    let to_rational = |v: BigInt| Rational::new(v, denom.clone());
    Ok(GapProfile {
        sums: sums.into_iter().map(to_rational).collect(),
        max_gap: to_rational(max_gap),
        witness_pair,
    })
}

/// Rounds `w` to a coloring `x` with `|a . (w - x)| <= lindisc(a)`.
///
/// Keeps subset sums `u <= a . w <= v`, starting from the sums of the
/// negative and of the positive entries, and consumes entries by decreasing
/// magnitude: if `u + |a_k|` overshoots the target it becomes a candidate
/// for `v`, otherwise `u` absorbs it. Zero columns get `x_i = round(w_i)`.
/// Returns the closer endpoint, `v` on ties.
pub fn round_onerow(a: &Matrix, w: &Weight) -> Result<Coloring> {
    let row = single_row(a)?;
    let n = row.len();
    if w.len() != n {
        return Err(Error::Dimension(format!(
            "weight has {} coordinates, row has {n} entries",
            w.len()
        )));
    }
    let target: Rational = row
        .iter()
        .zip(w.coords())
        .fold(Rational::zero(), |acc, (ai, wi)| acc + ai * wi);

    let mut base = vec![false; n];
    for (j, ai) in row.iter().enumerate() {
        if ai.is_zero() {
            base[j] = w.coords()[j] >= half();
        } else if ai.is_negative() {
            base[j] = true;
        }
    }
    let order: Vec<usize> = by_decreasing_magnitude(row)
        .into_iter()
        .filter(|&j| !row[j].is_zero())
        .collect();

    let mut u: Rational = row.iter().filter(|v| v.is_negative()).sum();
    let mut v: Rational = row.iter().filter(|v| v.is_positive()).sum();
    // `u`'s coloring is `base` with the first `toggled.len()` consumed
    // columns flipped; `v`'s is a prefix of that list plus at most one
    // extra flip, or the all-positive coloring before any update.
    let mut toggled: Vec<usize> = Vec::with_capacity(order.len());
    let mut v_coloring: Option<(usize, usize)> = None;

    let materialize_u = |toggled: &[usize]| {
        let mut bits = base.clone();
        for &j in toggled {
            bits[j] = !bits[j];
        }
        Coloring::new(bits)
    };
    let materialize_v = |v_coloring: Option<(usize, usize)>, toggled: &[usize]| match v_coloring {
        None => {
            let mut bits = base.clone();
            for &j in &order {
                bits[j] = row[j].is_positive();
            }
            Coloring::new(bits)
        }
        Some((prefix, extra)) => {
            let mut bits = base.clone();
            for &j in &toggled[..prefix] {
                bits[j] = !bits[j];
            }
            bits[extra] = !bits[extra];
            Coloring::new(bits)
        }
    };

    if target == v {
        return Ok(materialize_v(None, &toggled));
    }
    for &k in &order {
        let stepped = &u + row[k].abs();
        if stepped > target {
            if stepped <= v {
                v = stepped;
                v_coloring = Some((toggled.len(), k));
            }
        } else {
            u = stepped;
            toggled.push(k);
            if u == target {
                return Ok(materialize_u(&toggled));
            }
        }
    }
    debug_assert!(u <= target && target <= v);
    if &target - &u < &v - &target {
        Ok(materialize_u(&toggled))
    } else {
        Ok(materialize_v(v_coloring, &toggled))
    }
}

/// `a . x` for a single row, used by the tests and the CLI report.
pub fn subset_sum(a: &Matrix, x: &Coloring) -> Result<Rational> {
    let row = single_row(a)?;
    if x.len() != row.len() {
        return Err(Error::Dimension(format!(
            "coloring has {} bits, row has {} entries",
            x.len(),
            row.len()
        )));
    }
    Ok(row
        .iter()
        .zip(x.bits())
        .filter(|(_, &b)| b)
        .map(|(v, _)| v.clone())
        .sum())
}

/// Midpoint of the widest gap, i.e. the image `a . w` of a deep hole.
pub fn deep_hole_image(profile: &GapProfile) -> Rational {
    match profile.witness_pair {
        Some(j) => (&profile.sums[j] + &profile.sums[j + 1]) * half(),
        None => profile.sums[0].clone(),
    }
}
