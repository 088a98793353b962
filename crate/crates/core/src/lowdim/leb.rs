//! Largest empty Chebyshev ball centred in the convex hull of a planar
//! site set.
//!
//! `f(c) = min_s ||c - s||_inf` is piecewise linear. Its pieces change
//! only across lines `sigma x_i - tau x_j = sigma u_i - tau v_j` for sites
//! `u, v` (the l-inf bisector hyperplanes, including `u = v`, which gives
//! the kinks of a single distance cone). On every cell of that arrangement
//! clipped to the hull `f` is linear, so its maximum over the hull is
//! attained at a line/line crossing, a line/edge crossing, or a hull
//! vertex. Those candidates are enumerated exactly and `f` is evaluated at
//! each; no perturbation of degenerate inputs is needed.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exec::{map_slice, Limits};
use crate::rational::Rational;

use super::geom::{Hull2D, QPoint};
use super::reach::SiteSet;

/// The line `a x_1 + b x_2 = c` with `gcd(a, b, c) = 1` and the first
/// non-zero coefficient positive. Directions are always one of `x_1`,
/// `x_2`, `x_1 - x_2`, `x_1 + x_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateLine {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl CandidateLine {
    /// `x_axis = 0` for `x_1 = c`, `1` for `x_2 = c`; `2 x_i = sum`.
    fn axis_midline(axis: usize, sum: i64) -> Self {
        let (coef, c) = if sum % 2 == 0 { (1, sum / 2) } else { (2, sum) };
        if axis == 0 {
            CandidateLine { a: coef, b: 0, c }
        } else {
            CandidateLine { a: 0, b: coef, c }
        }
    }

    pub fn contains(&self, p: &QPoint) -> bool {
        self.a as i128 * p.x + self.b as i128 * p.y == self.c as i128 * p.q
    }

    fn family(&self) -> usize {
        match (self.a, self.b) {
            (_, 0) => 0,
            (0, _) => 1,
            (1, -1) => 2,
            _ => 3,
        }
    }

    fn intersect(&self, other: &CandidateLine) -> Option<QPoint> {
        let (a1, b1, c1) = (self.a as i128, self.b as i128, self.c as i128);
        let (a2, b2, c2) = (other.a as i128, other.b as i128, other.c as i128);
        let det = a1 * b2 - a2 * b1;
        if det == 0 {
            return None;
        }
        Some(QPoint::new(c1 * b2 - c2 * b1, a1 * c2 - a2 * c1, det))
    }

    /// The supporting line of a hull edge, unnormalized.
    fn through(p: [i64; 2], r: [i64; 2]) -> CandidateLine {
        let (a, b) = (r[1] - p[1], p[0] - r[0]);
        CandidateLine {
            a,
            b,
            c: a * p[0] + b * p[1],
        }
    }
}

/// Maximizer of `min_s ||c - s||_inf` over `c` in the hull of the sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LebResult {
    pub center: Vec<Rational>,
    pub radius: Rational,
    /// Sites at distance exactly `radius` from `center`, lexicographic.
    pub nearest_sites: Vec<Vec<i64>>,
}

fn planar(s: &SiteSet) -> Result<Vec<[i64; 2]>> {
    if s.dim() != 2 {
        return Err(Error::Input(format!(
            "planar operation on a {}-dimensional site set",
            s.dim()
        )));
    }
    Ok(s.sites().iter().map(|p| [p[0], p[1]]).collect())
}

pub fn hull_2d(s: &SiteSet) -> Result<Hull2D> {
    Ok(Hull2D::of_points(&planar(s)?))
}

fn sumset(xs: &BTreeSet<i64>, ys: &BTreeSet<i64>, sign: i64) -> BTreeSet<i64> {
    xs.iter()
        .flat_map(|x| ys.iter().map(move |y| x + sign * y))
        .collect()
}

/// Every bisector-facet line generated by an ordered pair of sites,
/// deduplicated and sorted.
pub fn candidate_lines(s: &SiteSet) -> Result<Vec<CandidateLine>> {
    let pts = planar(s)?;
    let first: BTreeSet<i64> = pts.iter().map(|p| p[0]).collect();
    let second: BTreeSet<i64> = pts.iter().map(|p| p[1]).collect();
    let mut lines = BTreeSet::new();
    // i = j, sigma != tau: 2 x_i = u_i + v_i
    for sum in sumset(&first, &first, 1) {
        lines.insert(CandidateLine::axis_midline(0, sum));
    }
    for sum in sumset(&second, &second, 1) {
        lines.insert(CandidateLine::axis_midline(1, sum));
    }
    // i != j: x_1 - x_2 = u_1 - v_2 (sigma = tau) and x_1 + x_2 = u_1 + v_2
    for c in sumset(&first, &second, -1) {
        lines.insert(CandidateLine { a: 1, b: -1, c });
    }
    for c in sumset(&first, &second, 1) {
        lines.insert(CandidateLine { a: 1, b: 1, c });
    }
    Ok(lines.into_iter().collect())
}

/// `q` times the Chebyshev distance from `p` to its nearest site, by
/// searching square rings of lattice cells outward from `floor(p)`.
pub(crate) fn nearest_scaled_distance(s: &SiteSet, p: &QPoint) -> i128 {
    let base = [p.x.div_euclid(p.q) as i64, p.y.div_euclid(p.q) as i64];
    let max_ring = 2 * s.bound() + 2;
    let mut best: Option<i128> = None;
    let probe = |cell: [i64; 2], best: &mut Option<i128>| {
        if s.contains(&cell) {
            let d = p.scaled_distance(cell);
            if best.is_none_or(|b| d < b) {
                *best = Some(d);
            }
        }
    };
    for ring in 0..=max_ring {
        // every cell in ring `r` is farther than `r - 1` from `p`
        if best.is_some_and(|b| b <= (ring as i128 - 1) * p.q) {
            break;
        }
        if ring == 0 {
            probe(base, &mut best);
            continue;
        }
        for d in -ring..=ring {
            probe([base[0] + d, base[1] - ring], &mut best);
            probe([base[0] + d, base[1] + ring], &mut best);
        }
        for d in (-ring + 1)..ring {
            probe([base[0] - ring, base[1] + d], &mut best);
            probe([base[0] + ring, base[1] + d], &mut best);
        }
    }
    best.expect("site sets are never empty")
}

/// Sites at scaled distance exactly `scaled` from `p`.
fn sites_at(s: &SiteSet, p: &QPoint, scaled: i128) -> Vec<[i64; 2]> {
    let lo = |v: i128| (v - scaled).div_euclid(p.q) as i64;
    let hi = |v: i128| (v + scaled).div_euclid(p.q) as i64 + 1;
    let mut out = Vec::new();
    for x in lo(p.x)..=hi(p.x) {
        for y in lo(p.y)..=hi(p.y) {
            if s.contains(&[x, y]) && p.scaled_distance([x, y]) == scaled {
                out.push([x, y]);
            }
        }
    }
    out
}

/// Every point at which the maximum of the nearest-site distance over the
/// hull can occur.
pub fn candidate_centers(s: &SiteSet) -> Result<Vec<QPoint>> {
    let hull = hull_2d(s)?;
    let lines = candidate_lines(s)?;
    let mut found: HashSet<QPoint> = hull.vertices().iter().map(|&v| QPoint::lattice(v)).collect();
    if hull.vertices().len() >= 2 {
        let mut families: [Vec<CandidateLine>; 4] = Default::default();
        for l in &lines {
            families[l.family()].push(*l);
        }
        if hull.is_polygon() {
            for f1 in 0..4 {
                for f2 in f1 + 1..4 {
                    for l1 in &families[f1] {
                        for l2 in &families[f2] {
                            if let Some(p) = l1.intersect(l2) {
                                if hull.contains(&p) {
                                    found.insert(p);
                                }
                            }
                        }
                    }
                }
            }
        }
        for (a, b) in hull.edges() {
            let edge = CandidateLine::through(a, b);
            for l in &lines {
                if let Some(p) = l.intersect(&edge) {
                    if Hull2D::on_edge(&p, a, b) {
                        found.insert(p);
                    }
                }
            }
        }
    }
    let mut out: Vec<QPoint> = found.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Largest empty l-inf ball centred in the hull of a planar site set.
///
/// Among centres of equal radius the one touching the most sites wins,
/// then the lexicographically smallest.
pub fn leb_linf_2d(s: &SiteSet, limits: &Limits) -> Result<LebResult> {
    let pts = planar(s)?;
    if pts.len() < 2 {
        return Ok(LebResult {
            center: pts[0].iter().map(|&v| Rational::from_integer(v.into())).collect(),
            radius: Rational::from_integer(0.into()),
            nearest_sites: vec![pts[0].to_vec()],
        });
    }
    let candidates = candidate_centers(s)?;
    let scores = map_slice(limits.execution, &candidates, |p| nearest_scaled_distance(s, p));
    // radius d / q, compared exactly
    let beats = |(p1, d1): (&QPoint, i128), (p2, d2): (&QPoint, i128)| d1 * p2.q > d2 * p1.q;
    let mut best = (&candidates[0], scores[0]);
    for (p, &d) in candidates.iter().zip(&scores).skip(1) {
        if beats((p, d), best) {
            best = (p, d);
        }
    }
    let tied: Vec<(&QPoint, i128)> = candidates
        .iter()
        .zip(scores.iter().copied())
        .filter(|&(p, d)| d * best.0.q == best.1 * p.q)
        .collect();
    let (center, scaled) = tied
        .iter()
        .map(|&(p, d)| (sites_at(s, p, d).len(), p, d))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(a.1)))
        .map(|(_, p, d)| (*p, d))
        .expect("at least one candidate");
    Ok(LebResult {
        center: center.coords().to_vec(),
        radius: Rational::new(BigInt::from(scaled), BigInt::from(center.q)),
        nearest_sites: sites_at(s, &center, scaled)
            .into_iter()
            .map(|p| p.to_vec())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn sites(v: &[[i64; 2]]) -> SiteSet {
        SiteSet::from_points(2, &v.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn line(a: i64, b: i64, c: i64) -> CandidateLine {
        CandidateLine { a, b, c }
    }

    /// Dense sampling oracle: maximum of the nearest-site distance over hull
    /// points on the `1/k` grid, by direct minimum over all sites.
    fn sampled_max(pts: &[[i64; 2]], k: i128) -> Rational {
        let hull = Hull2D::of_points(pts);
        let (lo, hi) = (
            pts.iter().flatten().min().copied().unwrap() as i128 * k,
            pts.iter().flatten().max().copied().unwrap() as i128 * k,
        );
        let mut best = Rational::from_integer(0.into());
        for x in lo..=hi {
            for y in lo..=hi {
                let p = QPoint::new(x, y, k);
                if !hull.contains(&p) {
                    continue;
                }
                let d = pts.iter().map(|&s| p.scaled_distance(s)).min().unwrap();
                let r = Rational::new(d.into(), p.q.into());
                if r > best {
                    best = r;
                }
            }
        }
        best
    }

    #[test]
    fn midline_and_diagonal_examples() {
        let l = candidate_lines(&sites(&[[0, 0], [1, 0]])).unwrap();
        assert!(l.contains(&line(2, 0, 1)));

        let l = candidate_lines(&sites(&[[0, 0], [1, 1]])).unwrap();
        assert!(l.contains(&line(1, -1, 0)));
        assert!(l.contains(&line(1, 1, 1)));

        let l = candidate_lines(&sites(&[[2, 5]])).unwrap();
        assert_eq!(
            l,
            vec![line(0, 1, 5), line(1, -1, -3), line(1, 0, 2), line(1, 1, 7)]
        );
    }

    #[test]
    fn lines_are_normalized_bisector_directions() {
        let s = sites(&[[0, 0], [3, 1], [-2, 4], [1, -1], [5, 5]]);
        for l in candidate_lines(&s).unwrap() {
            assert!(
                matches!((l.a, l.b), (1, 0) | (2, 0) | (0, 1) | (0, 2) | (1, -1) | (1, 1)),
                "{l:?}"
            );
            if l.a == 2 || l.b == 2 {
                assert!(l.c % 2 != 0);
            }
        }
    }

    #[test]
    fn leb_examples() {
        let l = Limits::default();
        let r = leb_linf_2d(&sites(&[[0, 0], [1, 0], [0, 1], [1, 1]]), &l).unwrap();
        assert_eq!(r.center, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(r.radius, ratio(1, 2));
        assert_eq!(r.nearest_sites.len(), 4);

        let r = leb_linf_2d(&sites(&[[0, 0], [4, 0]]), &l).unwrap();
        assert_eq!(r.center, vec![int(2), int(0)]);
        assert_eq!(r.radius, int(2));

        let r = leb_linf_2d(&sites(&[[0, 0], [1, 1], [1, -1], [2, 0]]), &l).unwrap();
        assert_eq!(r.center, vec![int(1), int(0)]);
        assert_eq!(r.radius, int(1));
        assert_eq!(sampled_max(&[[0, 0], [1, 1], [1, -1], [2, 0]], 8), int(1));

        let r = leb_linf_2d(&sites(&[[3, -2]]), &l).unwrap();
        assert_eq!((r.center, r.radius), (vec![int(3), int(-2)], int(0)));
    }

    #[test]
    fn rejects_non_planar_sets() {
        let s = SiteSet::from_points(1, &[vec![0], vec![3]]).unwrap();
        assert!(leb_linf_2d(&s, &Limits::default()).is_err());
        assert!(candidate_lines(&s).is_err());
    }

    #[test]
    fn ring_search_matches_full_scan() {
        let pts = [[0, 0], [5, 1], [-3, 4], [2, -6], [7, 7]];
        let s = sites(&pts);
        for x in -20..=20 {
            for y in -20..=20 {
                let p = QPoint::new(x, y, 3);
                let full = pts.iter().map(|&q| p.scaled_distance(q)).min().unwrap();
                assert_eq!(nearest_scaled_distance(&s, &p), full, "{p:?}");
            }
        }
    }

    #[test]
    fn matches_sampling_on_irregular_sets() {
        let sets: [&[[i64; 2]]; 4] = [
            &[[0, 0], [5, 1], [-3, 4], [2, -6], [7, 7]],
            &[[0, 0], [3, 0], [0, 2], [5, 3], [1, 1]],
            &[[0, 0], [2, 2], [4, 4], [1, 3]],
            &[[0, 0], [1, 3], [3, 1], [4, 4], [2, 2], [6, 0]],
        ];
        for pts in sets {
            let r = leb_linf_2d(&sites(pts), &Limits::default()).unwrap();
            let sampled = sampled_max(pts, 12);
            assert!(sampled <= r.radius, "{pts:?}: sampled {sampled} > {}", r.radius);
            // sampling on a 1/12 grid loses at most 1/12 of Lipschitz-1 value
            assert!(r.radius <= &sampled + ratio(1, 12), "{pts:?}");
        }
    }
}
