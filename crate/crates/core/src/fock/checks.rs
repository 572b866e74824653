//! Numerical content of the Fock-space identities: exact residuals and
//! packet-level profiles for refinement sweeps.
//!
//! Every function returns raw numbers; pass/fail gates live with the caller.

use num_complex::Complex64;

use super::basis::FockBasis;
use super::ops::{
    mode_operators, number, number_density, realize, realize_monomials, total_number, FieldState,
    Ladder, Monomial,
};
use super::packet::OnePacket;
use super::position::{m_density, m_number_normal, m_total};
use crate::error::{Error, Result};
use crate::grid::DerivativeStencil;
use crate::quadform::{t_k, t_omega};
use crate::sparse::CsrMatrix;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A residual together with the scale it should be compared against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub residual: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual
        } else {
            self.residual / self.scale
        }
    }

    fn worst(self, other: Residual) -> Residual {
        if other.relative() > self.relative() {
            other
        } else {
            self
        }
    }
}

const NONE: Residual = Residual {
    residual: 0.0,
    scale: 0.0,
};

/// `|[T_k, n]|_F` against `|T_k|_F |n|_F`.
pub fn generator_number_commutator(basis: &FockBasis, k: usize) -> Result<Residual> {
    let t = realize(&t_k(basis.grid(), k)?, basis)?.matrix;
    let n = total_number(basis).matrix;
    Ok(Residual {
        residual: t.commutator(&n).frobenius_norm(),
        scale: t.frobenius_norm() * n.frobenius_norm(),
    })
}

/// Norm of the two-quantum part of `T_k |vac>` against `|T_k|_F`.
pub fn vacuum_pair_component(basis: &FockBasis, k: usize) -> Result<Residual> {
    if basis.n_max() < 2 {
        return Err(Error::SectorMismatch("two-quantum sector needs n_max >= 2".into()));
    }
    let t = realize(&t_k(basis.grid(), k)?, basis)?.matrix;
    let s = FieldState::vacuum(basis).apply(&t);
    Ok(Residual {
        residual: s.sector_norm(basis, 2),
        scale: t.frobenius_norm(),
    })
}

/// `max_j |[T_0, n_w[j]]|`.
pub fn energy_density_commutator(basis: &FockBasis) -> Result<Residual> {
    let t = realize(&t_omega(basis.grid(), 0), basis)?.matrix;
    let mut r = NONE;
    for j in 0..basis.modes() {
        let n = number_density(basis, j).matrix;
        r = r.worst(Residual {
            residual: t.commutator(&n).max_abs(),
            scale: t.max_abs() * n.max_abs(),
        });
    }
    Ok(r)
}

/// `max_(j,k) |[n_w[j], n_w[k]]|`.
pub fn density_commutators(basis: &FockBasis) -> Residual {
    let ns: Vec<CsrMatrix> = (0..basis.modes()).map(|j| number_density(basis, j).matrix).collect();
    let mut r = NONE;
    for a in &ns {
        for b in &ns {
            r = r.worst(Residual {
                residual: a.commutator(b).max_abs(),
                scale: a.max_abs() * b.max_abs(),
            });
        }
    }
    r
}

/// `max_j |[m, a_j] - i sum_l D[j,l] a_l|`. With `antisymmetric` the full
/// antisymmetric part is used on every row; otherwise the stencil itself,
/// on the deep-interior rows where the two coincide.
pub fn position_ladder(basis: &FockBasis, d: &DerivativeStencil, antisymmetric: bool) -> Residual {
    let m = m_total(basis, d).matrix;
    let ops = mode_operators(basis);
    let da = d.antisymmetric();
    let rows: Vec<usize> = if antisymmetric {
        (0..basis.modes()).collect()
    } else {
        d.deep_interior().collect()
    };
    let mut r = NONE;
    for j in rows {
        let mut rhs = CsrMatrix::zeros(basis.dimension(), basis.dimension());
        for l in 0..basis.modes() {
            let w = if antisymmetric { da[(j, l)] } else { d.entry(j, l) };
            if w != 0.0 {
                rhs = rhs.add(&ops.lower[l].scale(Complex64::new(0.0, w)));
            }
        }
        let lhs = m.commutator(&ops.lower[j]);
        r = r.worst(Residual {
            residual: lhs.sub(&rhs).max_abs(),
            scale: rhs.max_abs(),
        });
    }
    r
}

/// Smoothing kernel `S[j,l] = (w_l - w_j) D_A[j,l]` with
/// `[T_0, m] = i hbar a^+ S a` exactly.
pub fn smoothing_kernel(d: &DerivativeStencil, omegas: &[f64]) -> nalgebra::DMatrix<f64> {
    let da = d.antisymmetric();
    nalgebra::DMatrix::from_fn(da.nrows(), da.ncols(), |j, l| (omegas[l] - omegas[j]) * da[(j, l)])
}

fn bilinear(basis: &FockBasis, kernel: &nalgebra::DMatrix<f64>, scale: f64) -> CsrMatrix {
    let mut terms = Vec::new();
    for j in 0..kernel.nrows() {
        for l in 0..kernel.ncols() {
            if kernel[(j, l)] != 0.0 {
                terms.push(Monomial::new(c(kernel[(j, l)] * scale), vec![Ladder::Raise(j), Ladder::Lower(l)]));
            }
        }
    }
    realize_monomials(basis, &terms)
}

/// `[T_0, m]` against `i hbar a^+ S a` (exact discrete identity).
pub fn energy_position_smoothed(basis: &FockBasis, d: &DerivativeStencil) -> Result<Residual> {
    let g = basis.grid();
    let t0 = realize(&t_omega(g, 0), basis)?.matrix;
    let lhs = t0.commutator(&m_total(basis, d).matrix);
    let s = smoothing_kernel(d, &g.omegas());
    let rhs = bilinear(basis, &s, 1.0).scale(Complex64::new(0.0, g.hbar()));
    Ok(Residual {
        residual: lhs.sub(&rhs).max_abs(),
        scale: rhs.max_abs(),
    })
}

/// `[T_0, m]` against the literal `i hbar n`, on the one-quantum states
/// built from interior modes.
pub fn energy_position_literal(basis: &FockBasis, d: &DerivativeStencil) -> Result<Residual> {
    if basis.n_max() < 1 {
        return Err(Error::SectorMismatch("needs the one-quantum sector".into()));
    }
    let g = basis.grid();
    let t0 = realize(&t_omega(g, 0), basis)?.matrix;
    let lhs = t0.commutator(&m_total(basis, d).matrix);
    let rhs = total_number(basis).matrix.scale(Complex64::new(0.0, g.hbar()));
    let idx: Vec<usize> = d
        .interior()
        .map(|j| basis.one_particle(j).expect("one quantum fits"))
        .collect();
    let diff = lhs.sub(&rhs).restrict(&idx);
    Ok(Residual {
        residual: diff.max_abs(),
        scale: g.hbar(),
    })
}

/// `1/2 {m, n_w[j]} - m_w[j] - :m n_w[j]:` over interior `j`, plus the
/// largest entry of `:m n_w[j]:` touching states with at most one quantum.
pub fn anticommutator_split(basis: &FockBasis, d: &DerivativeStencil) -> Result<(Residual, f64)> {
    let m = m_total(basis, d).matrix;
    let low = basis.indices_up_to(1);
    let mut low_mask = vec![false; basis.dimension()];
    low.iter().for_each(|&i| low_mask[i] = true);
    let mut r = NONE;
    let mut leak: f64 = 0.0;
    for j in d.interior() {
        let n = number_density(basis, j).matrix;
        let lhs = m.anticommutator(&n).scale(c(0.5));
        let quartic = m_number_normal(basis, d, j).matrix;
        let rhs = m_density(basis, d, j)?.matrix.add(&quartic);
        r = r.worst(Residual {
            residual: lhs.sub(&rhs).max_abs(),
            scale: lhs.max_abs(),
        });
        leak = leak
            .max(quartic.mask(|i| low_mask[i], |_| true).max_abs())
            .max(quartic.mask(|_| true, |k| low_mask[k]).max_abs());
    }
    Ok((r, leak))
}

/// `m_w[j]` against `sqrt(n_w[j]) m sqrt(n_w[j])` on the one-quantum sector.
pub fn density_sandwich(basis: &FockBasis, d: &DerivativeStencil) -> Result<Residual> {
    if basis.n_max() < 1 {
        return Err(Error::SectorMismatch("needs the one-quantum sector".into()));
    }
    let g = basis.grid();
    let m = m_total(basis, d).matrix;
    let one = basis.indices_with_total(1);
    let mut r = NONE;
    for j in d.interior() {
        let sq: Vec<Complex64> = (0..basis.dimension())
            .map(|i| c((basis.occupation(i)[j] as f64 / g.d_nu()).sqrt()))
            .collect();
        let sq = CsrMatrix::from_diagonal(&sq);
        let sandwich = sq.matmul(&m).matmul(&sq);
        let md = m_density(basis, d, j)?.matrix;
        r = r.worst(Residual {
            residual: md.sub(&sandwich).restrict(&one).max_abs(),
            scale: md.restrict(&one).max_abs(),
        });
    }
    Ok(r)
}

/// `[m_w[j], n_w[k]]` assembled from the canonical relations:
/// `(i / 2 d_nu^2) sum_l D_A[j,l] (delta_jk - delta_lk) (a_l^+ a_j + a_j^+ a_l)`.
pub fn mn_closed_form(basis: &FockBasis, d: &DerivativeStencil, j: usize, k: usize) -> CsrMatrix {
    let da = d.antisymmetric();
    let dn = basis.grid().d_nu();
    let pre = Complex64::new(0.0, 0.5 / (dn * dn));
    let mut terms = Vec::new();
    for l in 0..basis.modes() {
        let w = da[(j, l)] * ((j == k) as i32 - (l == k) as i32) as f64;
        if w != 0.0 {
            terms.push(Monomial::new(pre * w, vec![Ladder::Raise(l), Ladder::Lower(j)]));
            terms.push(Monomial::new(pre * w, vec![Ladder::Raise(j), Ladder::Lower(l)]));
        }
    }
    realize_monomials(basis, &terms)
}

/// Largest mismatch between [`mn_closed_form`] and the sparse commutator
/// over interior pairs, and the largest commutator seen for pairs outside
/// each other's stencil support.
pub fn mn_exact(basis: &FockBasis, d: &DerivativeStencil) -> Result<(Residual, f64)> {
    let da = d.antisymmetric();
    let mut r = NONE;
    let mut far: f64 = 0.0;
    for j in d.interior() {
        let md = m_density(basis, d, j)?.matrix;
        for k in 0..basis.modes() {
            let brute = md.commutator(&number_density(basis, k).matrix);
            let closed = mn_closed_form(basis, d, j, k);
            r = r.worst(Residual {
                residual: brute.sub(&closed).max_abs(),
                scale: brute.max_abs().max(closed.max_abs()).max(1.0),
            });
            if j != k && da[(j, k)] == 0.0 {
                far = far.max(brute.max_abs());
            }
        }
    }
    Ok((r, far))
}

/// `|m|f> + i (D_A c)|`: one-quantum amplitudes of `m|f>` versus the stencil.
pub fn position_on_packet(basis: &FockBasis, d: &DerivativeStencil, p: &OnePacket) -> Result<Residual> {
    let s = p.state(basis)?;
    let out = s.apply(&m_total(basis, d).matrix);
    let da = d.antisymmetric();
    let sq = basis.grid().d_nu().sqrt();
    let f = p.amplitudes();
    let mut r = NONE;
    for k in 0..basis.modes() {
        let expect: Complex64 = (0..basis.modes()).map(|l| f[l] * da[(k, l)]).sum::<Complex64>()
            * Complex64::new(0.0, -sq);
        let got = out.amps[basis.one_particle(k).expect("fits")];
        r = r.worst(Residual {
            residual: (got - expect).norm(),
            scale: sq * f.iter().map(|z| z.norm()).fold(0.0, f64::max),
        });
    }
    let rest: f64 = (0..basis.dimension())
        .filter(|&i| basis.total(i) != 1)
        .map(|i| out.amps[i].norm())
        .fold(0.0, f64::max);
    Ok(r.worst(Residual {
        residual: rest,
        scale: r.scale,
    }))
}

/// Packet-level profiles of one refinement level.
#[derive(Clone, Debug)]
pub struct Profile {
    pub omegas: Vec<f64>,
    /// mode indices the comparison runs over
    pub rows: Vec<usize>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl Profile {
    /// `|lhs - rhs|_2 / |rhs|_2` over `rows`.
    pub fn relative_l2(&self) -> f64 {
        let num: f64 = self.rows.iter().map(|&j| (self.lhs[j] - self.rhs[j]).powi(2)).sum();
        let den: f64 = self.rows.iter().map(|&j| self.rhs[j].powi(2)).sum();
        (num / den).sqrt()
    }

    pub fn max_abs_lhs(&self) -> f64 {
        self.rows.iter().map(|&j| self.lhs[j].abs()).fold(0.0, f64::max)
    }
}

fn one_particle_basis(p: &OnePacket) -> Result<FockBasis> {
    FockBasis::new(p.grid(), 1)
}

/// `(1/i hbar) <f|[Q, n_w[j]]|f>` for every mode, real part.
pub(crate) fn commutator_profile(q: &CsrMatrix, basis: &FockBasis, s: &FieldState) -> Vec<f64> {
    let hb = basis.grid().hbar();
    (0..basis.modes())
        .map(|j| {
            let n = number_density(basis, j).matrix;
            (s.expectation(&q.commutator(&n)) / Complex64::new(0.0, hb)).re
        })
        .collect()
}

/// `(1/i hbar) <[T_k, n_w[j]]>` against `0` (k=0), `D(w n_w)` (k=1) or
/// `2 D(w m_w)` (k=2), on a one-quantum packet.
pub fn number_redistribution(d: &DerivativeStencil, p: &OnePacket, k: usize) -> Result<Profile> {
    if k > 2 {
        return Err(Error::UnsupportedGenerator(k));
    }
    p.require_interior(d)?;
    let g = p.grid();
    let basis = one_particle_basis(p)?;
    let s = p.state(&basis)?;
    let t = realize(&t_k(g, k)?, &basis)?.matrix;
    let lhs = commutator_profile(&t, &basis, &s);
    let w = g.omegas();
    let rhs = match k {
        0 => vec![0.0; g.modes()],
        1 => {
            let wn: Vec<f64> = p.number_profile().iter().zip(&w).map(|(n, w)| n * w).collect();
            d.apply(&wn)
        }
        _ => {
            let wm: Vec<f64> = p.position_profile(d).iter().zip(&w).map(|(m, w)| m * w).collect();
            d.apply(&wm).iter().map(|x| 2.0 * x).collect()
        }
    };
    Ok(Profile {
        omegas: w,
        rows: d.deep_interior().collect(),
        lhs,
        rhs,
    })
}

/// `(1/i hbar) <[T_0, m_w[j]]>` against `<n_w[j]> = |f_j|^2`.
pub fn energy_density_position(d: &DerivativeStencil, p: &OnePacket) -> Result<Profile> {
    p.require_interior(d)?;
    let g = p.grid();
    let basis = one_particle_basis(p)?;
    let s = p.state(&basis)?;
    let t0 = realize(&t_omega(g, 0), &basis)?.matrix;
    let mut lhs = vec![0.0; g.modes()];
    let rows: Vec<usize> = d.deep_interior().collect();
    for &j in &rows {
        let md = m_density(&basis, d, j)?.matrix;
        lhs[j] = (s.expectation(&t0.commutator(&md)) / Complex64::new(0.0, g.hbar())).re;
    }
    Ok(Profile {
        omegas: g.omegas(),
        rows,
        lhs,
        rhs: p.number_profile(),
    })
}

/// `i sum_k d_nu g(w_k) <[m_w[j], n_w[k]]>` against `g'(w_j) |f_j|^2`, the
/// distributional form of the density commutator tested on a smooth `g`.
pub fn mn_distributional(
    d: &DerivativeStencil,
    p: &OnePacket,
    g_fn: impl Fn(f64) -> f64,
    g_prime: impl Fn(f64) -> f64,
) -> Result<Profile> {
    p.require_interior(d)?;
    let grid = p.grid();
    let basis = one_particle_basis(p)?;
    let s = p.state(&basis)?;
    let w = grid.omegas();
    // sum_k d_nu g_k n_w[k] = sum_k g_k N_k
    let gd: Vec<Complex64> = (0..basis.dimension())
        .map(|i| {
            c(basis
                .occupation(i)
                .iter()
                .enumerate()
                .map(|(k, &n)| g_fn(w[k]) * n as f64)
                .sum())
        })
        .collect();
    let gop = CsrMatrix::from_diagonal(&gd);
    let rows: Vec<usize> = d.deep_interior().collect();
    let mut lhs = vec![0.0; grid.modes()];
    for &j in &rows {
        let md = m_density(&basis, d, j)?.matrix;
        lhs[j] = (Complex64::new(0.0, 1.0) * s.expectation(&md.commutator(&gop))).re;
    }
    let n = p.number_profile();
    let rhs = w.iter().zip(&n).map(|(&x, &nn)| g_prime(x) * nn).collect();
    Ok(Profile {
        omegas: w,
        rows,
        lhs,
        rhs,
    })
}

/// Phase route `<sqrt(n) delta' sqrt(n)>` against `<m_w>` on the product
/// coherent state with `alpha_j = amplitude sqrt(d_nu) f_j`.
pub fn phase_position_routes(d: &DerivativeStencil, p: &OnePacket, amplitude: f64) -> Result<Profile> {
    p.require_interior(d)?;
    let g = p.grid();
    let dn = g.d_nu();
    let alphas: Vec<Complex64> = p.amplitudes().iter().map(|f| f * (amplitude * dn.sqrt())).collect();
    Ok(Profile {
        omegas: g.omegas(),
        rows: d.deep_interior().collect(),
        lhs: super::phase::phase_route_profile(&alphas, d, dn),
        rhs: super::phase::position_route_profile(&alphas, d, dn),
    })
}

/// `<N_j>` on a one-quantum packet; convenience for ratio checks.
pub fn occupation_profile(p: &OnePacket) -> Result<Vec<f64>> {
    let basis = one_particle_basis(p)?;
    let s = p.state(&basis)?;
    Ok((0..basis.modes()).map(|j| s.expectation(&number(&basis, j)).re).collect())
}

/// Relative L2 mismatch between `-i D f` and `u psi(u)` on the periodic
/// position grid (window centered on zero).
pub fn position_representation(d: &DerivativeStencil, p: &OnePacket, points: usize) -> Result<f64> {
    p.require_interior(d)?;
    let g = p.grid();
    let f = p.amplitudes();
    let mdf: Vec<Complex64> = d.apply_complex(f).iter().map(|z| z * Complex64::new(0.0, -1.0)).collect();
    let (us, psi) = super::packet::position_transform(g, f, points);
    let (_, chi) = super::packet::position_transform(g, &mdf, points);
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..us.len() {
        let lhs = chi[k];
        let rhs = psi[k] * us[k];
        num += (lhs - rhs).norm_sqr();
        den += rhs.norm_sqr();
    }
    Ok((num / den).sqrt())
}
