//! Enumeration caps and the data-parallel execution switch.
//!
//! With the `parallel` feature (default) sweeps run on the rayon pool;
//! without it, or with [`Execution::Sequential`], the same closures run
//! on the calling thread. Every reduction used through this module is
//! associative with a total tie-break, so both paths return identical
//! results.

use std::env;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel loops are driven.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Sequential,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub const ENUM_CAP_VAR: &str = "LINDISC_ENUM_CAP";
pub const SAT_CAP_VAR: &str = "LINDISC_SAT_CAP";
pub const GRID_CAP_VAR: &str = "LINDISC_GRID_CAP";
pub const CELL_CAP_VAR: &str = "LINDISC_CELL_CAP";

/// Caps that keep exponential procedures from blowing up silently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for which `2^n` colorings are enumerated.
    pub enumeration_cap: u32,
    /// Largest variable count for brute-force NAE satisfiability.
    pub sat_cap: u32,
    /// Largest number of grid points `(k + 1)^n` in a grid sweep.
    pub grid_points_cap: u128,
    /// Largest number of distinct images `A w` kept during a grid sweep.
    pub grid_images_cap: usize,
    /// Largest lattice box `(2 n delta + 1)^d` for the reachability table.
    pub lattice_cells_cap: u64,
    pub execution: Execution,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_cap: 20,
            sat_cap: 24,
            grid_points_cap: 1 << 36,
            grid_images_cap: 1 << 24,
            lattice_cells_cap: 1 << 26,
            execution: Execution::default(),
        }
    }
}

impl Limits {
    /// Defaults overridden by the `LINDISC_*_CAP` environment variables.
    /// Unparsable values are ignored.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = read_var(ENUM_CAP_VAR) {
            limits.enumeration_cap = v.min(63) as u32;
        }
        if let Some(v) = read_var(SAT_CAP_VAR) {
            limits.sat_cap = v.min(63) as u32;
        }
        if let Some(v) = read_var(GRID_CAP_VAR) {
            limits.grid_points_cap = v as u128;
        }
        if let Some(v) = read_var(CELL_CAP_VAR) {
            limits.lattice_cells_cap = v;
        }
        limits
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }
}

fn read_var(name: &str) -> Option<u64> {
    env::var(name).ok()?.trim().parse().ok()
}

/// Maps `f` over `0..chunks` and folds the results with `combine`.
pub(crate) fn reduce_chunks<T, F, C>(exec: Execution, chunks: usize, f: F, combine: C) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    C: Fn(T, T) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..chunks).into_par_iter().map(f).reduce_with(combine),
        _ => (0..chunks).map(f).reduce(combine),
    }
}

/// Order-preserving map over a slice.
pub(crate) fn map_slice<I, T, F>(exec: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Number of leading bits used to split a `2^bits` enumeration into chunks.
pub(crate) fn split_bits(bits: u32) -> u32 {
    match bits {
        0..=10 => 0,
        _ => (bits - 10).min(8),
    }
}
