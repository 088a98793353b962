//! Subset-sum reachability over the integer lattice box `[-n delta, n delta]^d`.

use crate::error::{Error, Result};
use crate::exec::Limits;
use crate::matrix::{Coloring, Matrix};

const UNREACHED: u32 = u32::MAX;

/// The images `{A x : x in {0,1}^n}` of an integer matrix, with enough
/// bookkeeping to recover a coloring for every site.
#[derive(Clone, Debug)]
pub struct SiteSet {
    dim: usize,
    bound: i64,
    side: i64,
    /// Per lattice cell: the smallest `i` such that the cell is a sum of a
    /// subset of the first `i` columns, or `UNREACHED`.
    first_step: Vec<u32>,
    /// Flat-index offset of each column; `None` for explicit point sets.
    offsets: Option<Vec<i64>>,
    sites: Vec<Vec<i64>>,
}

impl SiteSet {
    /// Sites given directly, without generating columns; `coloring_of`
    /// returns `None` for every point.
    pub fn from_points(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        if dim == 0 || points.is_empty() {
            return Err(Error::Input("a site set needs a dimension and at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Dimension(format!("point {p:?} is not {dim}-dimensional")));
        }
        let bound = points.iter().flatten().map(|v| v.abs()).max().unwrap_or(0);
        let mut set = SiteSet::empty(dim, bound, None, u64::MAX)?;
        for p in points {
            let idx = set.index(p).expect("inside bound");
            set.first_step[idx] = 0;
        }
        set.collect_sites();
        Ok(set)
    }

    fn empty(dim: usize, bound: i64, offsets: Option<Vec<i64>>, cell_cap: u64) -> Result<Self> {
        let side = 2 * bound + 1;
        let cells = (side as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if cells > cell_cap as u128 {
            return Err(Error::refusal("lattice box cells (2 n delta + 1)^d", cells, cell_cap as u128));
        }
        Ok(SiteSet {
            dim,
            bound,
            side,
            first_step: vec![UNREACHED; cells as usize],
            offsets,
            sites: Vec::new(),
        })
    }

    fn collect_sites(&mut self) {
        self.sites = self
            .first_step
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != UNREACHED)
            .map(|(idx, _)| self.point(idx))
            .collect();
    }

    fn index(&self, p: &[i64]) -> Option<usize> {
        let mut idx: i64 = 0;
        for &v in p {
            if v.abs() > self.bound {
                return None;
            }
            idx = idx * self.side + v + self.bound;
        }
        Some(idx as usize)
    }

    fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut p = vec![0; self.dim];
        for k in (0..self.dim).rev() {
            p[k] = (idx as i64 % self.side) - self.bound;
            idx /= self.side as usize;
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Half-width `n delta` of the lattice box.
    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Distinct sites in lexicographic order.
    pub fn sites(&self) -> &[Vec<i64>] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.dim
            && self
                .index(p)
                .is_some_and(|idx| self.first_step[idx] != UNREACHED)
    }

    /// A coloring `x` with `A x = p`, found by walking the first-step
    /// table back to the origin.
    pub fn coloring_of(&self, p: &[i64]) -> Option<Coloring> {
        let offsets = self.offsets.as_ref()?;
        let mut idx = self.index(p)?;
        if self.first_step[idx] == UNREACHED {
            return None;
        }
        let mut bits = vec![false; offsets.len()];
        while self.first_step[idx] > 0 {
            let step = self.first_step[idx] as usize;
            bits[step - 1] = true;
            idx = (idx as i64 - offsets[step - 1]) as usize;
        }
        Some(Coloring::new(bits))
    }
}

/// All subset sums `A x` of an integer matrix, by dynamic programming over
/// the columns: `R_0 = {0}`, `R_i = R_{i-1} cup (R_{i-1} + a_i)`.
pub fn reachable_points(a: &Matrix, limits: &Limits) -> Result<SiteSet> {
    let entries = a.to_i64()?;
    let (d, n) = (a.rows(), a.cols());
    let delta = entries.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let bound = (n as u128) * (delta as u128);
    if bound > (i64::MAX / 4) as u128 {
        return Err(Error::refusal("lattice half-width n delta", bound, (i64::MAX / 4) as u128));
    }
    let bound = bound as i64;
    let side = 2 * bound + 1;
    let mut strides = vec![1i64; d];
    for k in (0..d.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1].saturating_mul(side);
    }
    let offsets: Vec<i64> = (0..n)
        .map(|j| (0..d).map(|i| entries[i * n + j] * strides[i]).sum())
        .collect();
    let mut set = SiteSet::empty(d, bound, Some(offsets.clone()), limits.lattice_cells_cap)?;

    let origin = set.index(&vec![0; d]).expect("origin inside box");
    set.first_step[origin] = 0;
    let mut reached = vec![origin];
    for step in 1..=n {
        let off = offsets[step - 1];
        for k in 0..reached.len() {
            let q = (reached[k] as i64 + off) as usize;
            if set.first_step[q] == UNREACHED {
                set.first_step[q] = step as u32;
                reached.push(q);
            }
        }
    }
    set.collect_sites();
    Ok(set)
}
