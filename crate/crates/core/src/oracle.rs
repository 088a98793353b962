//! Verification oracles: exact `lindisc(A, w)` by enumerating every
//! coloring, and a certified bracket for `lindisc(A)` from a grid sweep.
//!
//! Neither routine shares code with the exact solvers in `onerow` and
//! `lowdim`; they are the reference those solvers are checked against.

use std::collections::HashMap;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exec::{map_slice, reduce_chunks, split_bits, Execution, Limits};
use crate::matrix::{
    operator_inf_norm, Bracket, Coloring, LowerProvenance, Matrix, UpperProvenance, Weight,
};
use crate::rational::{common_denominator, half, scaled_integer, to_pq, Rational};

/// A weight together with its exact best-rounding error and a coloring
/// attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeepHoleReport {
    pub w: Weight,
    /// `lindisc(A, w) = min_x ||A (w - x)||_inf`.
    pub value: Rational,
    pub minimizer: Coloring,
}

/// Signed accumulator usable for the coloring sweep: `i128` when the
/// magnitudes allow it, `BigInt` otherwise.
trait Acc:
    Clone + Ord + Signed + Send + Sync + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self>
{
}

impl<T> Acc for T where
    T: Clone + Ord + Signed + Send + Sync + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>
{
}

fn check_enumeration(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.enumeration_cap as usize {
        return Err(Error::refusal(
            "coloring enumeration width n",
            n as u128,
            limits.enumeration_cap as u128,
        ));
    }
    Ok(())
}

/// Minimum over all `x` of `max_i |target_i - (C x)_i|`, where `cols[j]` is
/// column `j` of `C`. Ties go to the lexicographically smallest coloring;
/// the coloring is returned as a mask in [`Coloring::from_mask`] layout.
fn min_over_colorings<T: Acc>(cols: &[Vec<T>], target: &[T], exec: Execution) -> (T, u64) {
    let n = cols.len();
    let prefix_bits = split_bits(n as u32) as usize;
    let suffix_bits = n - prefix_bits;
    let residual = |sums: &[T]| -> T {
        target
            .iter()
            .zip(sums)
            .map(|(t, s)| {
                let mut d = t.clone();
                d -= s;
                d.abs()
            })
            .max()
            .unwrap_or_else(T::zero)
    };
    let chunk = |c: usize| -> (T, u64) {
        let mut sums = vec![T::zero(); target.len()];
        for (j, col) in cols.iter().enumerate().take(prefix_bits) {
            if (c >> (prefix_bits - 1 - j)) & 1 == 1 {
                for (s, v) in sums.iter_mut().zip(col) {
                    *s += v;
                }
            }
        }
        let high = (c as u64) << suffix_bits;
        let mut best = (residual(&sums), high);
        let mut gray = 0u64;
        for i in 1u64..(1u64 << suffix_bits) {
            let bit = i.trailing_zeros() as usize;
            gray ^= 1 << bit;
            let col = &cols[n - 1 - bit];
            if gray >> bit & 1 == 1 {
                for (s, v) in sums.iter_mut().zip(col) {
                    *s += v;
                }
            } else {
                for (s, v) in sums.iter_mut().zip(col) {
                    *s -= v;
                }
            }
            let r = residual(&sums);
            let mask = high | gray;
            if r < best.0 || (r == best.0 && mask < best.1) {
                best = (r, mask);
            }
        }
        best
    };
    reduce_chunks(exec, 1 << prefix_bits, chunk, |a, b| if b < a { b } else { a })
        .expect("at least one chunk")
}

/// Exact `lindisc(A, w)` by enumerating all `2^n` colorings.
pub fn lindisc_at(a: &Matrix, w: &Weight, limits: &Limits) -> Result<DeepHoleReport> {
    let n = a.cols();
    if w.len() != n {
        return Err(Error::Dimension(format!(
            "weight has {} coordinates, matrix has {n} columns",
            w.len()
        )));
    }
    check_enumeration(n, limits)?;
    let target = a.apply(w.coords())?;
    let scale = common_denominator(a.entries().iter().chain(&target));
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            (0..a.rows())
                .map(|i| scaled_integer(a.get(i, j), &scale))
                .collect()
        })
        .collect();
    let target: Vec<BigInt> = target.iter().map(|t| scaled_integer(t, &scale)).collect();

    let bound: BigInt = (0..a.rows())
        .map(|i| target[i].abs() + cols.iter().map(|c| c[i].abs()).sum::<BigInt>())
        .max()
        .unwrap_or_default();
    let (value, mask) = if bound.bits() < 126 {
        let narrow = |v: &BigInt| v.to_i128().expect("bounded above");
        let cols: Vec<Vec<i128>> = cols.iter().map(|c| c.iter().map(narrow).collect()).collect();
        let target: Vec<i128> = target.iter().map(narrow).collect();
        let (v, m) = min_over_colorings(&cols, &target, limits.execution);
        (BigInt::from(v), m)
    } else {
        min_over_colorings(&cols, &target, limits.execution)
    };
    Ok(DeepHoleReport {
        w: w.clone(),
        value: Rational::new(value, scale),
        minimizer: Coloring::from_mask(mask, n),
    })
}

/// Lipschitz-certified bracket for `lindisc(A)` from a grid sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBracket {
    pub bracket: Bracket,
    /// Best grid point; its value is `bracket.lower`.
    pub witness: DeepHoleReport,
    /// Number of distinct images `A w` over the grid.
    pub distinct_images: usize,
}

/// Parses a grid resolution, which must be `1/k` for an integer `k >= 1`.
pub fn grid_steps(h: &Rational) -> Result<u64> {
    if !h.numer().is_one() || !h.is_positive() {
        return Err(Error::Input(format!(
            "grid resolution must be 1/k for an integer k >= 1, got {}",
            to_pq(h)
        )));
    }
    h.denom()
        .to_u64()
        .filter(|&k| k <= u32::MAX as u64)
        .ok_or_else(|| Error::Input("grid resolution denominator is too large".into()))
}

fn grid_point_count(k: u64, n: usize) -> u128 {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(k as u128 + 1);
    }
    total
}

/// One level of the sweep over `g in {0..k}^n`: images `B g` restricted to
/// columns `j..n`, each with the smallest leading `g_j` that reaches it and
/// the index of its remainder in the next level.
struct Level {
    images: Vec<Vec<i64>>,
    steps: Vec<(u32, usize)>,
}

/// Sweeps `w in (hZ)^n cap [0, 1]^n` and returns
/// `[max_grid lindisc(A, w), that + ||A||_{inf->inf} h / 2]`.
///
/// Grid points with the same image `A w` share their value, so the sweep
/// runs over distinct images; ties keep the lexicographically smallest `w`.
pub fn lindisc_grid_bracket(a: &Matrix, h: &Rational, limits: &Limits) -> Result<GridBracket> {
    let k = grid_steps(h)?;
    let n = a.cols();
    let m = a.rows();
    check_enumeration(n, limits)?;
    let points = grid_point_count(k, n);
    if points > limits.grid_points_cap {
        let mut feasible = k;
        while feasible > 0 && grid_point_count(feasible, n) > limits.grid_points_cap {
            feasible /= 2;
        }
        while grid_point_count(feasible + 1, n) <= limits.grid_points_cap {
            feasible += 1;
        }
        return Err(Error::Refusal {
            what: format!("grid size (k + 1)^n for h = 1/{k}"),
            requested: points,
            cap: limits.grid_points_cap,
            suggestion: Some(if feasible >= 1 {
                format!("finest feasible resolution is h = 1/{feasible}")
            } else {
                "no grid fits the budget".into()
            }),
        });
    }

    let (ints, denom) = a.scaled();
    let row_weight: BigInt = (0..m)
        .map(|i| (0..n).map(|j| ints[i * n + j].abs()).sum::<BigInt>())
        .max()
        .unwrap_or_default();
    let magnitude_bits = (row_weight * BigInt::from(k)).bits();
    if magnitude_bits > 60 {
        return Err(Error::refusal(
            "scaled matrix magnitude (bits) for the grid sweep",
            magnitude_bits as u128,
            60,
        ));
    }
    let b: Vec<i64> = ints
        .iter()
        .map(|v| v.to_i64().expect("bounded above"))
        .collect();
    let column = |j: usize| -> Vec<i64> { (0..m).map(|i| b[i * n + j]).collect() };

    let ki = k as i64;
    let mut sites: Vec<Vec<i64>> = (0..1u64 << n)
        .map(|mask| {
            let x = Coloring::from_mask(mask, n);
            (0..m)
                .map(|i| {
                    (0..n)
                        .filter(|&j| x.bits()[j])
                        .map(|j| b[i * n + j])
                        .sum::<i64>()
                        * ki
                })
                .collect()
        })
        .collect();
    sites.sort_unstable();
    sites.dedup();

    let mut levels: Vec<Level> = Vec::with_capacity(n + 1);
    levels.push(Level {
        images: vec![vec![0; m]],
        steps: vec![(0, 0)],
    });
    for j in (0..n).rev() {
        let col = column(j);
        let prev = levels.last().expect("seeded");
        let mut next: HashMap<Vec<i64>, (u32, usize)> = HashMap::new();
        for (idx, img) in prev.images.iter().enumerate() {
            for t in 0..=k as u32 {
                let y: Vec<i64> = img
                    .iter()
                    .zip(&col)
                    .map(|(v, c)| v + t as i64 * c)
                    .collect();
                next.entry(y)
                    .and_modify(|e| {
                        if t < e.0 {
                            *e = (t, idx);
                        }
                    })
                    .or_insert((t, idx));
            }
            if next.len() > limits.grid_images_cap {
                return Err(Error::refusal(
                    "distinct grid images",
                    next.len() as u128,
                    limits.grid_images_cap as u128,
                ));
            }
        }
        let mut entries: Vec<(Vec<i64>, (u32, usize))> = next.into_iter().collect();
        entries.sort_unstable();
        let (images, steps) = entries.into_iter().unzip();
        levels.push(Level { images, steps });
    }

    let top = levels.last().expect("seeded");
    let values: Vec<i64> = map_slice(limits.execution, &top.images, |y| {
        sites
            .iter()
            .map(|s| {
                y.iter()
                    .zip(s)
                    .map(|(yi, si)| (yi - si).abs())
                    .max()
                    .unwrap_or(0)
            })
            .min()
            .expect("origin is always a site")
    });
    let grid_of = |mut idx: usize| -> Vec<u32> {
        let mut g = Vec::with_capacity(n);
        for level in levels[1..].iter().rev() {
            let (t, parent) = level.steps[idx];
            g.push(t);
            idx = parent;
        }
        g
    };
    let best_value = *values.iter().max().expect("at least one image");
    let best_g = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == best_value)
        .map(|(idx, _)| grid_of(idx))
        .min()
        .expect("maximum is attained");

    let lower = Rational::new(BigInt::from(best_value), denom * BigInt::from(k));
    let upper = &lower + operator_inf_norm(a) * h * half();
    let w = Weight::new(
        best_g
            .iter()
            .map(|&t| Rational::new(BigInt::from(t), BigInt::from(k)))
            .collect(),
    )?;
    let witness = lindisc_at(a, &w, limits)?;
    debug_assert_eq!(witness.value, lower);
    Ok(GridBracket {
        bracket: Bracket::new(
            lower,
            upper,
            LowerProvenance::GridSample,
            UpperProvenance::GridLipschitz,
        )?,
        witness,
        distinct_images: top.images.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::matrix::eval_residual;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn weight(v: &[(i64, i64)]) -> Weight {
        Weight::new(v.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
    }

    /// Plain rational enumeration, no scaling, no Gray code.
    fn naive_at(a: &Matrix, w: &Weight) -> (Rational, Coloring) {
        let n = a.cols();
        (0..1u64 << n)
            .map(|mask| {
                let x = Coloring::from_mask(mask, n);
                (eval_residual(a, w, &x).unwrap(), x)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn at_examples() {
        let l = Limits::default();
        let a = mat(&[&[1, -2], &[3, 4]]);
        let r = lindisc_at(&a, &weight(&[(1, 1), (0, 1)]), &l).unwrap();
        assert_eq!(r.value, int(0));
        assert_eq!(r.minimizer.bits(), &[true, false]);

        let r = lindisc_at(&mat(&[&[1, 1, 1]]), &weight(&[(1, 2); 3]), &l).unwrap();
        assert_eq!(r.value, ratio(1, 2));

        let r = lindisc_at(&mat(&[&[3, 1]]), &weight(&[(1, 2); 2]), &l).unwrap();
        assert_eq!(r.value, int(1));
        // sums 1 and 3 tie; (0, 1) precedes (1, 0)
        assert_eq!(r.minimizer.bits(), &[false, true]);
    }

    #[test]
    fn at_refuses_and_checks_dimensions() {
        let limits = Limits {
            enumeration_cap: 2,
            ..Limits::default()
        };
        let a = mat(&[&[1, 1, 1]]);
        assert!(lindisc_at(&a, &weight(&[(1, 2); 3]), &limits)
            .unwrap_err()
            .is_refusal());
        assert!(matches!(
            lindisc_at(&a, &weight(&[(1, 2)]), &Limits::default()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn at_handles_huge_entries() {
        let big = Rational::new(BigInt::from(10).pow(50) + 1, BigInt::from(3));
        let a = Matrix::from_rows(vec![vec![big.clone(), ratio(1, 7)], vec![int(1), big]]).unwrap();
        let w = weight(&[(1, 3), (2, 5)]);
        let r = lindisc_at(&a, &w, &Limits::default()).unwrap();
        let (v, x) = naive_at(&a, &w);
        assert_eq!((r.value, r.minimizer), (v, x));
    }

    #[test]
    fn grid_examples() {
        let l = Limits::default();
        let g = lindisc_grid_bracket(&mat(&[&[1]]), &ratio(1, 2), &l).unwrap();
        assert_eq!((g.bracket.lower.clone(), g.bracket.upper.clone()), (ratio(1, 2), ratio(3, 4)));
        assert_eq!(g.witness.w.coords(), &[ratio(1, 2)]);

        let g = lindisc_grid_bracket(&Matrix::zeros(2, 3).unwrap(), &ratio(1, 3), &l).unwrap();
        assert_eq!((g.bracket.lower.clone(), g.bracket.upper.clone()), (int(0), int(0)));
        assert_eq!(g.witness.w.coords(), &[int(0), int(0), int(0)]);

        let g = lindisc_grid_bracket(&mat(&[&[1, 0], &[0, 1]]), &ratio(1, 2), &l).unwrap();
        assert_eq!(g.bracket.lower, ratio(1, 2));
        assert_eq!(g.bracket.upper, ratio(3, 4));
        assert_eq!(g.witness.w.coords(), &[int(0), ratio(1, 2)]);
        assert_eq!(g.witness.value, ratio(1, 2));
        assert_eq!(g.bracket.lower_provenance, LowerProvenance::GridSample);
        assert_eq!(g.bracket.upper_provenance, UpperProvenance::GridLipschitz);
    }

    #[test]
    fn grid_validates_resolution() {
        let l = Limits::default();
        let a = mat(&[&[1]]);
        for bad in [ratio(2, 3), int(2), ratio(-1, 2), int(0)] {
            assert!(matches!(
                lindisc_grid_bracket(&a, &bad, &l),
                Err(Error::Input(_))
            ));
        }
        assert!(lindisc_grid_bracket(&a, &int(1), &l).is_ok());
    }

    #[test]
    fn grid_refusal_suggests_resolution() {
        let limits = Limits {
            grid_points_cap: 100,
            ..Limits::default()
        };
        match lindisc_grid_bracket(&mat(&[&[1, 2]]), &ratio(1, 32), &limits) {
            Err(Error::Refusal { suggestion, .. }) => {
                assert_eq!(suggestion.as_deref(), Some("finest feasible resolution is h = 1/9"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_matches_pointwise_sweep() {
        let a = Matrix::from_rows(vec![
            vec![ratio(1, 2), int(-1), ratio(2, 3)],
            vec![int(1), ratio(1, 3), int(0)],
        ])
        .unwrap();
        let k = 3;
        let g = lindisc_grid_bracket(&a, &ratio(1, k), &Limits::default()).unwrap();
        let mut best: Option<(Rational, Vec<Rational>)> = None;
        for idx in 0..(k + 1).pow(3) {
            let coords: Vec<Rational> = [idx / 16, idx / 4 % 4, idx % 4]
                .iter()
                .map(|&t| ratio(t, k))
                .collect();
            let w = Weight::new(coords.clone()).unwrap();
            let (v, _) = naive_at(&a, &w);
            if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                best = Some((v, coords));
            }
        }
        let (v, coords) = best.unwrap();
        assert_eq!(g.bracket.lower, v);
        assert_eq!(g.witness.w.coords(), coords.as_slice());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let a = mat(&[&[3, -1, 2, 2, 1, -3, 1, 1, 2, 1, 1, 1, 3, 1], &[1, 2, -2, 1, 0, 1, 1, 3, 1, 1, 2, 2, 1, 1]]);
        let w = Weight::constant(14, ratio(2, 5)).unwrap();
        let par = lindisc_at(&a, &w, &Limits::default()).unwrap();
        let seq = lindisc_at(&a, &w, &Limits::default().sequential()).unwrap();
        assert_eq!(par, seq);
        let a = mat(&[&[3, -1, 2], &[1, 2, -2]]);
        let par = lindisc_grid_bracket(&a, &ratio(1, 6), &Limits::default()).unwrap();
        let seq = lindisc_grid_bracket(&a, &ratio(1, 6), &Limits::default().sequential()).unwrap();
        assert_eq!(par, seq);
    }

    proptest! {
        #[test]
        fn at_matches_naive(
            entries in prop::collection::vec((-9i64..=9, 1i64..=4), 2 * 7),
            n in 0usize..=7,
            ws in prop::collection::vec((0i64..=6, 1i64..=6), 7),
        ) {
            let rows: Vec<Vec<Rational>> = (0..2)
                .map(|i| (0..n).map(|j| { let (p, q) = entries[i * 7 + j]; ratio(p, q) }).collect())
                .collect();
            let a = Matrix::from_rows(rows).unwrap();
            let w = Weight::new(ws[..n].iter().map(|&(p, q)| ratio(p.min(q), q)).collect()).unwrap();
            let r = lindisc_at(&a, &w, &Limits::default()).unwrap();
            let (v, x) = naive_at(&a, &w);
            prop_assert_eq!(&r.value, &v);
            prop_assert_eq!(&r.minimizer, &x);
            prop_assert_eq!(eval_residual(&a, &w, &r.minimizer).unwrap(), r.value);
        }

        #[test]
        fn integral_weight_is_its_own_minimizer(mask in 0u64..64, entries in prop::collection::vec(-5i64..=5, 6)) {
            let a = Matrix::from_i64_rows(&[&entries]).unwrap();
            let x = Coloring::from_mask(mask, 6);
            let r = lindisc_at(&a, &Weight::from(&x), &Limits::default()).unwrap();
            prop_assert!(r.value.is_zero());
        }
    }
}
