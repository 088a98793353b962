//! Exact linear discrepancy of integer matrices with one or two rows.
//!
//! The zonotope `A [0,1]^n` is the convex hull of the lattice sites
//! `{A x}`, so `lindisc(A)` is the radius of the largest empty l-inf ball
//! centred in that hull. The sites come from a subset-sum style dynamic
//! program over the lattice box `[-n delta, n delta]^d`.

mod geom;
mod leb;
mod reach;

pub use geom::{Hull2D, QPoint};
pub use leb::{candidate_centers, candidate_lines, hull_2d, leb_linf_2d, CandidateLine, LebResult};
pub use reach::{reachable_points, SiteSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::Limits;
use crate::matrix::{Coloring, Matrix, Weight};
use crate::onerow::lindisc_onerow;
use crate::oracle::DeepHoleReport;
use crate::rational::{half, Rational};

/// Exact discrepancy together with the ball that certifies it and a
/// weight `w` whose image `A w` is the ball's centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowDimResult {
    pub leb: LebResult,
    pub deep_hole: DeepHoleReport,
}

impl LowDimResult {
    pub fn radius(&self) -> &Rational {
        &self.leb.radius
    }
}

/// `lindisc(A)` for an integer matrix with `d in {1, 2}` rows.
pub fn lindisc_lowdim(a: &Matrix, limits: &Limits) -> Result<LowDimResult> {
    match a.rows() {
        1 => lindisc_row(a, limits),
        2 => lindisc_planar(a, limits),
        rows => Err(Error::UnsupportedDimension { rows }),
    }
}

fn lindisc_row(a: &Matrix, limits: &Limits) -> Result<LowDimResult> {
    let sites = reachable_points(a, limits)?;
    let value = lindisc_onerow(a)?;
    let pts: Vec<i64> = sites.sites().iter().map(|p| p[0]).collect();
    let widest = pts
        .windows(2)
        .enumerate()
        .fold(None::<(usize, i64)>, |best, (j, w)| {
            let g = w[1] - w[0];
            match best {
                Some((_, bg)) if bg >= g => best,
                _ => Some((j, g)),
            }
        });
    let (leb, w, minimizer) = match widest {
        None => {
            let x = sites.coloring_of(&[pts[0]]).expect("origin is a site");
            (
                LebResult {
                    center: vec![Rational::from_integer(pts[0].into())],
                    radius: Rational::zero(),
                    nearest_sites: vec![vec![pts[0]]],
                },
                Weight::from(&x),
                x,
            )
        }
        Some((j, gap)) => {
            let (lo, hi) = (pts[j], pts[j + 1]);
            let x_lo = sites.coloring_of(&[lo]).expect("site");
            let x_hi = sites.coloring_of(&[hi]).expect("site");
            debug_assert_eq!(Rational::from_integer(gap.into()) * half(), value);
            let w = combine(&[(half(), &x_lo), (half(), &x_hi)])?;
            (
                LebResult {
                    center: vec![Rational::new((lo + hi).into(), 2.into())],
                    radius: value.clone(),
                    nearest_sites: vec![vec![lo], vec![hi]],
                },
                w,
                x_lo,
            )
        }
    };
    let value = leb.radius.clone();
    Ok(LowDimResult {
        leb,
        deep_hole: DeepHoleReport {
            w,
            value,
            minimizer,
        },
    })
}

fn lindisc_planar(a: &Matrix, limits: &Limits) -> Result<LowDimResult> {
    let sites = reachable_points(a, limits)?;
    let leb = leb_linf_2d(&sites, limits)?;
    let hull = hull_2d(&sites)?;
    let coloring = |v: [i64; 2]| sites.coloring_of(&v).expect("hull vertices are sites");
    let terms: Vec<(Rational, Coloring)> = convex_combination(&hull, &leb.center)
        .into_iter()
        .map(|(lambda, v)| (lambda, coloring(v)))
        .collect();
    let refs: Vec<(Rational, &Coloring)> = terms.iter().map(|(l, x)| (l.clone(), x)).collect();
    let w = combine(&refs)?;
    let minimizer = sites
        .coloring_of(&leb.nearest_sites[0])
        .expect("nearest sites are sites");
    Ok(LowDimResult {
        deep_hole: DeepHoleReport {
            w,
            value: leb.radius.clone(),
            minimizer,
        },
        leb,
    })
}

/// `sum_k lambda_k x_k` for convex weights `lambda`.
fn combine(terms: &[(Rational, &Coloring)]) -> Result<Weight> {
    let n = terms.first().map_or(0, |(_, x)| x.len());
    let mut w = vec![Rational::zero(); n];
    for (lambda, x) in terms {
        for (wi, &bit) in w.iter_mut().zip(x.bits()) {
            if bit {
                *wi += lambda;
            }
        }
    }
    Weight::new(w)
}

fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Writes a point of the hull as a convex combination of at most three
/// hull vertices (a fan triangle, the segment, or the single point).
fn convex_combination(hull: &Hull2D, c: &[Rational]) -> Vec<(Rational, [i64; 2])> {
    let vs = hull.vertices();
    let sub = |p: [i64; 2], q: [i64; 2]| [rat(p[0] - q[0]), rat(p[1] - q[1])];
    let cross = |u: &[Rational; 2], v: &[Rational; 2]| &u[0] * &v[1] - &u[1] * &v[0];
    match vs.len() {
        1 => vec![(Rational::one(), vs[0])],
        2 => {
            let e = sub(vs[1], vs[0]);
            let d = [&c[0] - rat(vs[0][0]), &c[1] - rat(vs[0][1])];
            let t = (&d[0] * &e[0] + &d[1] * &e[1]) / (&e[0] * &e[0] + &e[1] * &e[1]);
            vec![(Rational::one() - &t, vs[0]), (t, vs[1])]
        }
        _ => {
            let d = [&c[0] - rat(vs[0][0]), &c[1] - rat(vs[0][1])];
            for i in 1..vs.len() - 1 {
                let (e1, e2) = (sub(vs[i], vs[0]), sub(vs[i + 1], vs[0]));
                let det = cross(&e1, &e2);
                let alpha = cross(&d, &e2) / &det;
                let beta = cross(&e1, &d) / &det;
                if alpha >= Rational::zero()
                    && beta >= Rational::zero()
                    && &alpha + &beta <= Rational::one()
                {
                    let rest = Rational::one() - &alpha - &beta;
                    return vec![(rest, vs[0]), (alpha, vs[i]), (beta, vs[i + 1])];
                }
            }
            unreachable!("centre lies outside its hull")
        }
    }
}
