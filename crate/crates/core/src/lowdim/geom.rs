//! Exact planar primitives: rational points with a shared denominator and
//! convex hulls of lattice points.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::rational::Rational;

/// The point `(x / q, y / q)` with `q > 0` and `gcd(x, y, q) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub x: i128,
    pub y: i128,
    pub q: i128,
}

impl QPoint {
    pub fn new(mut x: i128, mut y: i128, mut q: i128) -> Self {
        assert!(q != 0, "zero denominator");
        if q < 0 {
            x = -x;
            y = -y;
            q = -q;
        }
        let g = x.gcd(&y).gcd(&q);
        QPoint {
            x: x / g,
            y: y / g,
            q: q / g,
        }
    }

    pub fn lattice(p: [i64; 2]) -> Self {
        QPoint {
            x: p[0] as i128,
            y: p[1] as i128,
            q: 1,
        }
    }

    pub fn coords(&self) -> [Rational; 2] {
        let q = BigInt::from(self.q);
        [
            Rational::new(BigInt::from(self.x), q.clone()),
            Rational::new(BigInt::from(self.y), q),
        ]
    }

    /// `q` times the Chebyshev distance to a lattice point.
    pub fn scaled_distance(&self, s: [i64; 2]) -> i128 {
        let dx = (self.x - self.q * s[0] as i128).abs();
        let dy = (self.y - self.q * s[1] as i128).abs();
        dx.max(dy)
    }

    /// `q` times the cross product `(b - a) x (self - a)`.
    fn scaled_cross(&self, a: [i64; 2], b: [i64; 2]) -> i128 {
        let (ex, ey) = ((b[0] - a[0]) as i128, (b[1] - a[1]) as i128);
        ex * (self.y - self.q * a[1] as i128) - ey * (self.x - self.q * a[0] as i128)
    }
}

impl Ord for QPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.x * other.q)
            .cmp(&(other.x * self.q))
            .then((self.y * other.q).cmp(&(other.y * self.q)))
    }
}

impl PartialOrd for QPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Convex hull of planar lattice points, counter-clockwise from the
/// lexicographically smallest vertex, without collinear vertices. A point
/// set spanning a segment yields its two endpoints; a single point yields
/// itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull2D {
    vertices: Vec<[i64; 2]>,
}

impl Hull2D {
    /// Andrew's monotone chain.
    pub fn of_points(points: &[[i64; 2]]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if pts.len() <= 1 {
            return Hull2D { vertices: pts };
        }
        let mut lower: Vec<[i64; 2]> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<[i64; 2]> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() == 2 && lower[0] == lower[1] {
            lower.pop();
        }
        Hull2D { vertices: lower }
    }

    pub fn vertices(&self) -> &[[i64; 2]] {
        &self.vertices
    }

    /// Boundary segments; a segment hull has exactly one.
    pub fn edges(&self) -> Vec<([i64; 2], [i64; 2])> {
        match self.vertices.len() {
            0 | 1 => Vec::new(),
            2 => vec![(self.vertices[0], self.vertices[1])],
            k => (0..k)
                .map(|i| (self.vertices[i], self.vertices[(i + 1) % k]))
                .collect(),
        }
    }

    pub fn is_polygon(&self) -> bool {
        self.vertices.len() >= 3
    }

    /// Closed-set membership.
    pub fn contains(&self, p: &QPoint) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => *p == QPoint::lattice(self.vertices[0]),
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                if p.scaled_cross(a, b) != 0 {
                    return false;
                }
                let (ex, ey) = ((b[0] - a[0]) as i128, (b[1] - a[1]) as i128);
                let dot = ex * (p.x - p.q * a[0] as i128) + ey * (p.y - p.q * a[1] as i128);
                dot >= 0 && dot <= p.q * (ex * ex + ey * ey)
            }
            _ => self
                .edges()
                .iter()
                .all(|&(a, b)| p.scaled_cross(a, b) >= 0),
        }
    }

    /// Whether `p` lies on the boundary segment from `a` to `b`.
    pub fn on_edge(p: &QPoint, a: [i64; 2], b: [i64; 2]) -> bool {
        Hull2D::of_points(&[a, b]).contains(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_examples() {
        let square = Hull2D::of_points(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        assert_eq!(square.vertices(), &[[0, 0], [1, 0], [1, 1], [0, 1]]);

        let seg = Hull2D::of_points(&[[0, 0], [1, 0], [3, 0], [4, 0]]);
        assert_eq!(seg.vertices(), &[[0, 0], [4, 0]]);
        assert_eq!(seg.edges().len(), 1);

        let diamond = Hull2D::of_points(&[[0, 0], [1, 1], [1, -1], [2, 0]]);
        assert_eq!(diamond.vertices(), &[[0, 0], [1, -1], [2, 0], [1, 1]]);

        assert_eq!(Hull2D::of_points(&[[2, 3], [2, 3]]).vertices(), &[[2, 3]]);
    }

    #[test]
    fn drops_collinear_boundary_points() {
        let h = Hull2D::of_points(&[[0, 0], [1, 0], [2, 0], [2, 1], [2, 2], [1, 1], [0, 2], [0, 1]]);
        assert_eq!(h.vertices(), &[[0, 0], [2, 0], [2, 2], [0, 2]]);
    }

    #[test]
    fn membership() {
        let diamond = Hull2D::of_points(&[[0, 0], [1, 1], [1, -1], [2, 0]]);
        assert!(diamond.contains(&QPoint::new(1, 0, 1)));
        assert!(diamond.contains(&QPoint::new(1, 1, 2)));
        assert!(diamond.contains(&QPoint::new(1, 1, 1)));
        assert!(!diamond.contains(&QPoint::new(1, 2, 2)));
        assert!(!diamond.contains(&QPoint::new(3, 3, 2)));
        let seg = Hull2D::of_points(&[[0, 0], [4, 0]]);
        assert!(seg.contains(&QPoint::new(5, 0, 2)));
        assert!(!seg.contains(&QPoint::new(9, 0, 2)));
        assert!(!seg.contains(&QPoint::new(1, 1, 2)));
        let dot = Hull2D::of_points(&[[1, 1]]);
        assert!(dot.contains(&QPoint::new(2, 2, 2)));
        assert!(!dot.contains(&QPoint::new(1, 1, 2)));
    }

    #[test]
    fn qpoint_normalizes_and_orders() {
        assert_eq!(QPoint::new(2, 4, -6), QPoint { x: -1, y: -2, q: 3 });
        assert!(QPoint::new(0, 1, 2) < QPoint::new(1, 0, 2));
        assert!(QPoint::new(1, 0, 2) < QPoint::new(1, 1, 2));
        assert_eq!(QPoint::new(3, 1, 2).scaled_distance([0, 0]), 3);
    }
}
