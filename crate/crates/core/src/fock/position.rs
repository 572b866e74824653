//! Newton-Wigner position built from the frequency stencil.
//!
//! With `D_A = (D - D^T) / 2` the integrated position is `m = a^+ K a`,
//! `K = -i D_A`, and its density is
//! `m_w[j] = (1/d_nu) (i/2) sum_k D_A[j,k] (a_k^+ a_j - a_j^+ a_k)`,
//! so that `m = sum_j d_nu m_w[j]` holds exactly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::FockBasis;
use super::ops::{realize_monomials, FockOperator, Ladder, Monomial};
use crate::error::{Error, Result};
use crate::grid::DerivativeStencil;

/// `K = -i D_A`, a hermitian kernel.
pub fn position_kernel(d: &DerivativeStencil) -> DMatrix<Complex64> {
    d.antisymmetric().map(|x| Complex64::new(0.0, -x))
}

fn require_interior(d: &DerivativeStencil, j: usize) -> Result<()> {
    let r = d.interior();
    if !r.contains(&j) {
        return Err(Error::BoundaryMode {
            mode: j,
            start: r.start,
            end: r.end,
        });
    }
    Ok(())
}

pub fn m_total_monomials(d: &DerivativeStencil) -> Vec<Monomial> {
    let k = position_kernel(d);
    let m = d.modes();
    let mut terms = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if k[(a, b)].norm() != 0.0 {
                terms.push(Monomial::new(k[(a, b)], vec![Ladder::Raise(a), Ladder::Lower(b)]));
            }
        }
    }
    terms
}

/// Integrated position `m`.
pub fn m_total(basis: &FockBasis, d: &DerivativeStencil) -> FockOperator {
    FockOperator::new(realize_monomials(basis, &m_total_monomials(d)), "m", true)
}

pub fn m_density_monomials(d: &DerivativeStencil, j: usize, d_nu: f64) -> Vec<Monomial> {
    let da = d.antisymmetric();
    let half_i = Complex64::new(0.0, 0.5 / d_nu);
    let mut terms = Vec::new();
    for k in 0..d.modes() {
        let w = da[(j, k)];
        if w == 0.0 {
            continue;
        }
        terms.push(Monomial::new(half_i * w, vec![Ladder::Raise(k), Ladder::Lower(j)]));
        terms.push(Monomial::new(-half_i * w, vec![Ladder::Raise(j), Ladder::Lower(k)]));
    }
    terms
}

/// Position density `m_w[j]`; `j` must lie in the stencil interior.
pub fn m_density(basis: &FockBasis, d: &DerivativeStencil, j: usize) -> Result<FockOperator> {
    require_interior(d, j)?;
    let terms = m_density_monomials(d, j, basis.grid().d_nu());
    Ok(FockOperator::new(
        realize_monomials(basis, &terms),
        format!("m_w[{j}]"),
        true,
    ))
}

/// Normal-ordered product `:m n_w[j]: = (1/d_nu) sum K_kl a_k^+ a_j^+ a_l a_j`.
/// It annihilates every state with fewer than two quanta.
pub fn m_number_normal(basis: &FockBasis, d: &DerivativeStencil, j: usize) -> FockOperator {
    let k = position_kernel(d);
    let s = 1.0 / basis.grid().d_nu();
    let mut terms = Vec::new();
    for a in 0..d.modes() {
        for b in 0..d.modes() {
            if k[(a, b)].norm() != 0.0 {
                terms.push(Monomial::new(
                    k[(a, b)] * s,
                    vec![Ladder::Raise(a), Ladder::Raise(j), Ladder::Lower(b), Ladder::Lower(j)],
                ));
            }
        }
    }
    FockOperator::new(realize_monomials(basis, &terms), format!(":m n_w[{j}]:"), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ops::{mode_operators, number_density, FieldState};
    use crate::grid::FrequencyGrid;
    use crate::sparse::CsrMatrix;

    fn setup(m: usize, n: usize, p: usize) -> (FockBasis, DerivativeStencil) {
        let g = FrequencyGrid::new(m, 0.4).unwrap();
        (FockBasis::new(&g, n).unwrap(), DerivativeStencil::new(&g, p).unwrap())
    }

    #[test]
    fn densities_sum_to_total() {
        let (b, d) = setup(8, 2, 2);
        let total = m_total(&b, &d).matrix;
        // boundary densities are built directly from the monomials
        let mut sum = CsrMatrix::zeros(b.dimension(), b.dimension());
        for j in 0..8 {
            let terms = m_density_monomials(&d, j, b.grid().d_nu());
            sum = sum.add(&realize_monomials(&b, &terms).scale(Complex64::new(b.grid().d_nu(), 0.0)));
        }
        assert!(sum.sub(&total).max_abs() < 1e-12);
        assert!(m_density(&b, &d, 0).is_err());
        assert!(m_density(&b, &d, 4).unwrap().hermiticity_ok());
        assert!(m_total(&b, &d).hermiticity_ok());
    }

    #[test]
    fn vacuum_position_vanishes() {
        let (b, d) = setup(6, 2, 2);
        let vac = FieldState::vacuum(&b);
        assert_eq!(vac.expectation(&m_total(&b, &d).matrix).norm(), 0.0);
    }

    #[test]
    fn position_shifts_annihilators() {
        for p in [2, 4] {
            let (b, d) = setup(10, 2, p);
            let m = m_total(&b, &d).matrix;
            let ops = mode_operators(&b);
            let da = d.antisymmetric();
            for j in 0..10 {
                let lhs = m.commutator(&ops.lower[j]);
                let mut rhs = CsrMatrix::zeros(b.dimension(), b.dimension());
                for l in 0..10 {
                    if da[(j, l)] != 0.0 {
                        rhs = rhs.add(&ops.lower[l].scale(Complex64::new(0.0, da[(j, l)])));
                    }
                }
                assert!(lhs.sub(&rhs).max_abs() < 1e-12, "p {p} j {j}");
            }
        }
    }

    #[test]
    fn anticommutator_splits_into_density_and_quartic() {
        let (b, d) = setup(4, 3, 2);
        let m = m_total(&b, &d).matrix;
        for j in d.interior() {
            let n = number_density(&b, j).matrix;
            let lhs = m.anticommutator(&n).scale(Complex64::new(0.5, 0.0));
            let rhs = m_density(&b, &d, j)
                .unwrap()
                .matrix
                .add(&m_number_normal(&b, &d, j).matrix);
            assert!(lhs.sub(&rhs).max_abs() < 1e-12 * lhs.max_abs(), "j {j}");
            let q = m_number_normal(&b, &d, j).matrix;
            let low = b.indices_up_to(1);
            assert_eq!(q.mask(|i| low.contains(&i), |_| true).nnz(), 0);
            assert_eq!(q.mask(|_| true, |k| low.contains(&k)).nnz(), 0);
        }
    }
}
