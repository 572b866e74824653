use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

pub const DEFAULT_DIMENSION_CAP: usize = 200_000;

/// Which light-cone component a basis describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    /// right-moving, depends on `u`
    Phi,
    /// left-moving, depends on `v`
    Psi,
}

/// All occupation vectors with at most `n_max` quanta, in lexicographic
/// order of `(n_1, .., n_M)`. The vacuum is index 0.
#[derive(Clone, Debug)]
pub struct FockBasis {
    grid: FrequencyGrid,
    n_max: usize,
    occ: Vec<u8>,
    totals: Vec<u8>,
    sector: Option<Sector>,
    // completions[r][b] = number of occupation vectors on r modes with at most b quanta
    completions: Vec<Vec<usize>>,
}

impl FockBasis {
    pub fn new(grid: &FrequencyGrid, n_max: usize) -> Result<Self> {
        Self::with_cap(grid, n_max, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(grid: &FrequencyGrid, n_max: usize, cap: usize) -> Result<Self> {
        if n_max > u8::MAX as usize {
            return Err(Error::DimensionCap {
                dimension: usize::MAX,
                cap,
            });
        }
        let m = grid.modes();
        let completions = completion_table(m, n_max);
        let dimension = completions[m][n_max];
        if dimension > cap {
            return Err(Error::DimensionCap { dimension, cap });
        }
        let mut occ = Vec::with_capacity(dimension * m);
        let mut totals = Vec::with_capacity(dimension);
        let mut cur = vec![0u8; m];
        enumerate(&mut cur, 0, n_max, &mut occ, &mut totals);
        debug_assert_eq!(totals.len(), dimension);
        Ok(Self {
            grid: grid.clone(),
            n_max,
            occ,
            totals,
            sector: None,
            completions,
        })
    }

    pub fn with_sector(mut self, sector: Sector) -> Self {
        self.sector = Some(sector);
        self
    }

    pub fn sector(&self) -> Option<Sector> {
        self.sector
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn modes(&self) -> usize {
        self.grid.modes()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dimension(&self) -> usize {
        self.totals.len()
    }

    pub fn occupation(&self, i: usize) -> &[u8] {
        let m = self.modes();
        &self.occ[i * m..(i + 1) * m]
    }

    /// Total number of quanta in basis state `i`.
    pub fn total(&self, i: usize) -> usize {
        self.totals[i] as usize
    }

    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        let m = self.modes();
        if occ.len() != m {
            return None;
        }
        let total: usize = occ.iter().map(|&n| n as usize).sum();
        if total > self.n_max {
            return None;
        }
        // states before `occ`: for each mode, those agreeing on the prefix
        // and carrying fewer quanta at this mode
        let mut idx = 0;
        let mut budget = self.n_max;
        for (k, &n) in occ.iter().enumerate() {
            let rest = m - k - 1;
            for v in 0..n as usize {
                idx += self.completions[rest][budget - v];
            }
            budget -= n as usize;
        }
        Some(idx)
    }

    /// Index of the state with one quantum in mode `j`.
    pub fn one_particle(&self, j: usize) -> Option<usize> {
        let mut occ = vec![0u8; self.modes()];
        occ[j] = 1;
        self.index_of(&occ)
    }

    pub fn indices_with_total(&self, n: usize) -> Vec<usize> {
        (0..self.dimension()).filter(|&i| self.total(i) == n).collect()
    }

    pub fn indices_up_to(&self, n: usize) -> Vec<usize> {
        (0..self.dimension()).filter(|&i| self.total(i) <= n).collect()
    }

    pub fn same_space(&self, other: &FockBasis) -> bool {
        self.grid.same_lattice(&other.grid) && self.n_max == other.n_max
    }
}

fn completion_table(m: usize, n_max: usize) -> Vec<Vec<usize>> {
    // at most b quanta on r modes: C(r + b, b)
    let mut t = vec![vec![1usize; n_max + 1]; m + 1];
    for r in 1..=m {
        for b in 1..=n_max {
            t[r][b] = t[r - 1][b].saturating_add(t[r][b - 1]);
        }
    }
    t
}

fn enumerate(cur: &mut [u8], k: usize, budget: usize, occ: &mut Vec<u8>, totals: &mut Vec<u8>) {
    if k == cur.len() {
        occ.extend_from_slice(cur);
        totals.push(cur.iter().sum());
        return;
    }
    for v in 0..=budget {
        cur[k] = v as u8;
        enumerate(cur, k + 1, budget - v, occ, totals);
    }
    cur[k] = 0;
}
