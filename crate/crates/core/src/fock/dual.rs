//! Both light-cone components on the tensor product `phi (x) psi`.

use num_complex::Complex64;

use super::basis::{FockBasis, Sector};
use super::checks::{smoothing_kernel, Residual};
use super::ops::{realize, realize_monomials, FockOperator, Ladder, Monomial};
use super::position::m_total;
use crate::error::{Error, Result};
use crate::grid::DerivativeStencil;
use crate::quadform::t_omega;
use crate::sparse::CsrMatrix;

/// Energy, momentum and the light-cone time/space positions.
#[derive(Clone, Debug)]
pub struct DualSector {
    pub dim_phi: usize,
    pub dim_psi: usize,
    /// `T_0^phi (x) 1 + 1 (x) T_0^psi`
    pub energy: FockOperator,
    /// `T_0^phi (x) 1 - 1 (x) T_0^psi`
    pub momentum: FockOperator,
    /// `(U + V) / 2` with `U = m^phi (x) 1`, `V = 1 (x) m^psi`
    pub tau: FockOperator,
    /// `(V - U) / 2`
    pub xi: FockOperator,
    /// `a^+ S a` on each sector, summed: the smoothed total number that
    /// appears in `[E, tau]` and `[P, xi]`
    pub smoothed_number: CsrMatrix,
    /// `n^phi (x) 1 + 1 (x) n^psi`
    pub total_number: CsrMatrix,
}

fn check_pair(phi: &FockBasis, psi: &FockBasis) -> Result<()> {
    if !phi.same_space(psi) {
        return Err(Error::SectorMismatch("the two sectors need the same grid and cap".into()));
    }
    match (phi.sector(), psi.sector()) {
        (Some(Sector::Phi), Some(Sector::Psi)) | (None, None) => Ok(()),
        _ => Err(Error::SectorMismatch("expected a (phi, psi) pair of bases".into())),
    }
}

fn kron_pair(a: &CsrMatrix, b: &CsrMatrix) -> (CsrMatrix, CsrMatrix) {
    (
        a.kron(&CsrMatrix::identity(b.nrows())),
        CsrMatrix::identity(a.nrows()).kron(b),
    )
}

pub fn dual_sector_operators(phi: &FockBasis, psi: &FockBasis, d: &DerivativeStencil) -> Result<DualSector> {
    check_pair(phi, psi)?;
    let g = phi.grid();
    let half = Complex64::new(0.5, 0.0);
    let t0 = t_omega(g, 0);
    let (ephi, epsi) = kron_pair(&realize(&t0, phi)?.matrix, &realize(&t0, psi)?.matrix);
    let (u, v) = kron_pair(&m_total(phi, d).matrix, &m_total(psi, d).matrix);

    let s = smoothing_kernel(d, &g.omegas());
    let mut terms = Vec::new();
    for j in 0..s.nrows() {
        for l in 0..s.ncols() {
            if s[(j, l)] != 0.0 {
                terms.push(Monomial::new(Complex64::new(s[(j, l)], 0.0), vec![Ladder::Raise(j), Ladder::Lower(l)]));
            }
        }
    }
    let (sphi, spsi) = kron_pair(&realize_monomials(phi, &terms), &realize_monomials(psi, &terms));

    let count = |b: &FockBasis| {
        CsrMatrix::from_diagonal(
            &(0..b.dimension())
                .map(|i| Complex64::new(b.total(i) as f64, 0.0))
                .collect::<Vec<_>>(),
        )
    };
    let (nphi, npsi) = kron_pair(&count(phi), &count(psi));

    Ok(DualSector {
        dim_phi: phi.dimension(),
        dim_psi: psi.dimension(),
        energy: FockOperator::new(ephi.add(&epsi), "E", true),
        momentum: FockOperator::new(ephi.sub(&epsi), "P", true),
        tau: FockOperator::new(u.add(&v).scale(half), "tau", true),
        xi: FockOperator::new(v.sub(&u).scale(half), "xi", true),
        smoothed_number: sphi.add(&spsi),
        total_number: nphi.add(&npsi),
    })
}

impl DualSector {
    /// Index of `|a> (x) |b>` in the product basis.
    pub fn product_index(&self, phi_index: usize, psi_index: usize) -> usize {
        phi_index * self.dim_psi + psi_index
    }

    /// `[E, tau] - (i hbar / 2) a^+ S a` and `[P, xi] + (i hbar / 2) a^+ S a`.
    pub fn canonical_residuals(&self, hbar: f64) -> (Residual, Residual) {
        let rhs = self.smoothed_number.scale(Complex64::new(0.0, 0.5 * hbar));
        let et = self.energy.matrix.commutator(&self.tau.matrix);
        let px = self.momentum.matrix.commutator(&self.xi.matrix);
        (
            Residual {
                residual: et.sub(&rhs).max_abs(),
                scale: rhs.max_abs(),
            },
            Residual {
                residual: px.add(&rhs).max_abs(),
                scale: rhs.max_abs(),
            },
        )
    }
}
