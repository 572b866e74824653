//! Quadratic-form commutators against brute-force commutators of the
//! realized sparse operators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::fock::ops::realize;
use crate::fock::FockBasis;
use crate::grid::FrequencyGrid;
use crate::quadform::QuadraticForm;

#[derive(Clone, Debug)]
pub struct OracleSample {
    pub modes: usize,
    pub n_max: usize,
    pub with_pairs: bool,
    /// largest entrywise mismatch over the comparable block
    pub max_diff: f64,
    pub compared: usize,
}

/// Entrywise `|realize([q1, q2]) - [realize(q1), realize(q2)]|` on the
/// entries whose intermediate sums stay inside the cap: with pair terms the
/// product of two forms reaches two quanta above `min(n_row, n_col)`.
pub fn compare_pair(q1: &QuadraticForm, q2: &QuadraticForm, basis: &FockBasis) -> Result<(f64, usize)> {
    let layer = realize(&q1.commutator(q2)?, basis)?.matrix;
    let r1 = realize(q1, basis)?.matrix;
    let r2 = realize(q2, basis)?.matrix;
    let brute = r1.commutator(&r2);
    let pairs = q1.pair_norm() > 0.0 || q2.pair_norm() > 0.0;
    let cap = basis.n_max();
    let ok = |i: usize| !pairs || basis.total(i) + 2 <= cap;
    let diff = layer.sub(&brute);
    let dense = diff.to_dense();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for r in 0..basis.dimension() {
        for c in 0..basis.dimension() {
            if ok(r) || ok(c) {
                compared += 1;
                worst = worst.max(dense[(r, c)].norm());
            }
        }
    }
    Ok((worst, compared))
}

/// `samples` seeded random pairs over `modes <= max_modes` (at least the
/// grid minimum) and `1 <= n_max <= max_n`.
pub fn oracle_equivalence(samples: usize, max_modes: usize, max_n: usize, seed: u64) -> Result<Vec<OracleSample>> {
    let min_modes = crate::grid::MIN_MODES;
    let max_modes = max_modes.max(min_modes);
    let plans: Vec<(usize, usize, bool, f64, u64)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|i| {
                let modes = rng.gen_range(min_modes..=max_modes);
                let n_max = 1 + i % max_n.max(1);
                let with_pairs = n_max >= 2 && rng.gen_bool(0.75);
                let d_omega = [0.25, 0.5, 1.0][rng.gen_range(0..3)];
                (modes, n_max, with_pairs, d_omega, rng.gen())
            })
            .collect()
    };
    plans
        .into_par_iter()
        .map(|(modes, n_max, with_pairs, d_omega, s)| {
            let g = FrequencyGrid::new(modes, d_omega)?;
            let basis = FockBasis::new(&g, n_max)?;
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let q1 = QuadraticForm::random(&g, &mut rng, with_pairs);
            let q2 = QuadraticForm::random(&g, &mut rng, with_pairs);
            let (max_diff, compared) = compare_pair(&q1, &q2, &basis)?;
            Ok(OracleSample {
                modes,
                n_max,
                with_pairs,
                max_diff,
                compared,
            })
        })
        .collect()
}
