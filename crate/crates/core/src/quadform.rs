//! Quadratic forms in mode operators, kept in symmetric (Weyl) order.
//!
//! With the operator basis `alpha = (a_1..a_M, a_1^+..a_M^+)` a form is
//!
//! ```text
//! Q = 1/2 sum_IJ H_IJ * 1/2 {alpha_I, alpha_J} + c
//! ```
//!
//! for a complex symmetric `2M x 2M` matrix `H = [[B, A^T], [A, C]]`, i.e.
//!
//! ```text
//! Q = sum A_jk 1/2 {a_j^+, a_k} + 1/2 sum B_jk a_j a_k + 1/2 sum C_jk a_j^+ a_k^+ + c.
//! ```
//!
//! The commutator of two such forms is again a form and, in this ordering,
//! has no scalar part. Central terms surface only in vacuum expectations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{taylor_weights, FrequencyGrid};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Linear combination of ladder operators over `(a_1..a_M, a_1^+..a_M^+)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldVector {
    grid: FrequencyGrid,
    coeffs: DVector<Complex64>,
}

impl FieldVector {
    pub fn zeros(grid: &FrequencyGrid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: DVector::zeros(2 * grid.modes()),
        }
    }

    pub fn from_coeffs(grid: &FrequencyGrid, coeffs: DVector<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * grid.modes() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// `a_j`.
    pub fn annihilator(grid: &FrequencyGrid, j: usize) -> Self {
        let mut v = Self::zeros(grid);
        v.coeffs[j] = Complex64::new(1.0, 0.0);
        v
    }

    /// `a_j^+`.
    pub fn creator(grid: &FrequencyGrid, j: usize) -> Self {
        let mut v = Self::zeros(grid);
        v.coeffs[grid.modes() + j] = Complex64::new(1.0, 0.0);
        v
    }

    /// Field component at signed index `l`:
    /// `phi_l = sqrt(hbar / (2 |w_l| d_nu)) * (a_l if l > 0 else a_|l|^+)`.
    /// Indices `0` and `|l| > M` give the zero vector.
    pub fn field_mode(grid: &FrequencyGrid, l: i64) -> Self {
        let mut v = Self::zeros(grid);
        if let Some(slot) = signed_slot(grid, l) {
            v.coeffs[slot] = Complex64::new(field_norm(grid, l), 0.0);
        }
        v
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &DVector<Complex64> {
        &self.coeffs
    }

    /// Coefficient of `phi_l` in this vector (zero for out-of-range `l`).
    pub fn field_component(&self, l: i64) -> Complex64 {
        match signed_slot(&self.grid, l) {
            Some(slot) => self.coeffs[slot] / field_norm(&self.grid, l),
            None => ZERO,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: &self.coeffs * s,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            coeffs: &self.coeffs + &other.coeffs,
        })
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }
}

fn signed_slot(grid: &FrequencyGrid, l: i64) -> Option<usize> {
    let m = grid.modes() as i64;
    if l == 0 || l.abs() > m {
        return None;
    }
    Some(if l > 0 {
        (l - 1) as usize
    } else {
        (m + (-l) - 1) as usize
    })
}

fn field_norm(grid: &FrequencyGrid, l: i64) -> f64 {
    let w = grid.signed_omega(l).abs();
    (grid.hbar() / (2.0 * w * grid.d_nu())).sqrt()
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_grid(a: &FrequencyGrid, b: &FrequencyGrid) -> Result<()> {
    if a.same_lattice(b) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    grid: FrequencyGrid,
    h: DMatrix<Complex64>,
    c: Complex64,
    clipped: bool,
}

impl QuadraticForm {
    pub fn zero(grid: &FrequencyGrid) -> Self {
        let n = 2 * grid.modes();
        Self {
            grid: grid.clone(),
            h: DMatrix::zeros(n, n),
            c: ZERO,
            clipped: false,
        }
    }

    pub fn scalar(grid: &FrequencyGrid, c: Complex64) -> Self {
        let mut q = Self::zero(grid);
        q.c = c;
        q
    }

    /// Assemble from the number block `A`, annihilation-pair block `B`,
    /// creation-pair block `C` and scalar `c`. `B` and `C` are symmetrized.
    pub fn from_blocks(
        grid: &FrequencyGrid,
        a: &DMatrix<Complex64>,
        b: &DMatrix<Complex64>,
        c_block: &DMatrix<Complex64>,
        c: Complex64,
    ) -> Result<Self> {
        let m = grid.modes();
        for blk in [a, b, c_block] {
            if blk.nrows() != m || blk.ncols() != m {
                return Err(Error::GridMismatch);
            }
        }
        let mut q = Self::zero(grid);
        let bs = (b + b.transpose()) * Complex64::new(0.5, 0.0);
        let cs = (c_block + c_block.transpose()) * Complex64::new(0.5, 0.0);
        q.h.view_mut((0, 0), (m, m)).copy_from(&bs);
        q.h.view_mut((m, m), (m, m)).copy_from(&cs);
        q.h.view_mut((m, 0), (m, m)).copy_from(a);
        q.h.view_mut((0, m), (m, m)).copy_from(&a.transpose());
        q.c = c;
        Ok(q)
    }

    /// Weyl-ordered product `X Y` of two linear objects:
    /// `H = x y^T + y x^T`, `c = 1/2 x^T Omega y`.
    pub fn product(x: &FieldVector, y: &FieldVector) -> Result<Self> {
        check_grid(&x.grid, &y.grid)?;
        let mut q = Self::zero(&x.grid);
        q.add_product(x, y, Complex64::new(1.0, 0.0));
        Ok(q)
    }

    fn add_product(&mut self, x: &FieldVector, y: &FieldVector, s: Complex64) {
        let m = self.grid.modes();
        let nz = |v: &FieldVector| -> Vec<(usize, Complex64)> {
            v.coeffs
                .iter()
                .enumerate()
                .filter(|(_, z)| **z != ZERO)
                .map(|(i, z)| (i, *z))
                .collect()
        };
        let xs = nz(x);
        let ys = nz(y);
        for &(i, xi) in &xs {
            for &(j, yj) in &ys {
                let v = s * xi * yj;
                self.h[(i, j)] += v;
                self.h[(j, i)] += v;
                // Omega_ij = +1 for (a_i, a_i^+), -1 for (a_i^+, a_i)
                if j == i + m {
                    self.c += 0.5 * v;
                } else if i == j + m {
                    self.c -= 0.5 * v;
                }
            }
        }
    }

    /// Random symmetric coefficient matrix with entries uniform in the unit
    /// square; pair blocks are zeroed when `with_pairs` is false.
    pub fn random<R: Rng>(grid: &FrequencyGrid, rng: &mut R, with_pairs: bool) -> Self {
        let m = grid.modes();
        let draw = |rng: &mut R| {
            DMatrix::from_fn(m, m, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
        };
        let a = draw(rng);
        let (b, cb) = if with_pairs {
            (draw(rng), draw(rng))
        } else {
            (DMatrix::zeros(m, m), DMatrix::zeros(m, m))
        };
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        Self::from_blocks(grid, &a, &b, &cb, c).expect("blocks sized from grid")
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn modes(&self) -> usize {
        self.grid.modes()
    }

    pub fn coefficient_matrix(&self) -> &DMatrix<Complex64> {
        &self.h
    }

    /// `A_jk`, coefficient of `1/2 {a_j^+, a_k}`.
    pub fn a_block(&self) -> DMatrix<Complex64> {
        let m = self.modes();
        self.h.view((m, 0), (m, m)).into_owned()
    }

    /// `B_jk`, with `Q ⊃ 1/2 sum B_jk a_j a_k`.
    pub fn b_block(&self) -> DMatrix<Complex64> {
        let m = self.modes();
        self.h.view((0, 0), (m, m)).into_owned()
    }

    /// `C_jk`, with `Q ⊃ 1/2 sum C_jk a_j^+ a_k^+`.
    pub fn c_block(&self) -> DMatrix<Complex64> {
        let m = self.modes();
        self.h.view((m, m), (m, m)).into_owned()
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.c
    }

    /// True when a convolution dropped index pairs that fell off the lattice.
    pub fn clipped(&self) -> bool {
        self.clipped
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            h: &self.h * s,
            c: self.c * s,
            clipped: self.clipped,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            h: &self.h + &other.h,
            c: self.c + other.c,
            clipped: self.clipped || other.clipped,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `L = -Omega H`, so that `[Q, alpha] = L alpha`.
    pub fn action_matrix(&self) -> DMatrix<Complex64> {
        let m = self.modes();
        let mut l = DMatrix::zeros(2 * m, 2 * m);
        // (Omega H) rows: top = H[bottom], bottom = -H[top]
        l.view_mut((0, 0), (m, 2 * m))
            .copy_from(&(-self.h.view((m, 0), (m, 2 * m)).into_owned()));
        l.view_mut((m, 0), (m, 2 * m))
            .copy_from(&self.h.view((0, 0), (m, 2 * m)));
        l
    }

    /// Exact `[Q1, Q2]`. The result has `H' = L1^T H2 + H2 L1` and no scalar.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        check_grid(&self.grid, &other.grid)?;
        let l1 = self.action_matrix();
        let t = l1.transpose() * &other.h;
        let h = &t + t.transpose();
        Ok(Self {
            grid: self.grid.clone(),
            h,
            c: ZERO,
            clipped: self.clipped || other.clipped,
        })
    }

    /// `[Q, v]` for a linear object `v`.
    pub fn act_on_field(&self, v: &FieldVector) -> Result<FieldVector> {
        check_grid(&self.grid, &v.grid)?;
        Ok(FieldVector {
            grid: self.grid.clone(),
            coeffs: self.action_matrix().transpose() * &v.coeffs,
        })
    }

    /// `<vac|Q|vac> = tr(A)/2 + c`.
    pub fn vacuum_expectation(&self) -> Complex64 {
        let m = self.modes();
        let tr: Complex64 = (0..m).map(|j| self.h[(m + j, j)]).sum();
        0.5 * tr + self.c
    }

    /// Frobenius norm of the pair content, `sqrt((|B|^2 + |C|^2) / 2)`.
    /// For a hermitian form this is `|B|`.
    pub fn pair_norm(&self) -> f64 {
        ((self.b_block().norm_squared() + self.c_block().norm_squared()) / 2.0).sqrt()
    }

    /// Frobenius norm of the number block `A`.
    pub fn number_norm(&self) -> f64 {
        self.a_block().norm()
    }

    pub fn adjoint(&self) -> Self {
        let m = self.modes();
        let n = 2 * m;
        let swap = |i: usize| if i < m { i + m } else { i - m };
        let h = DMatrix::from_fn(n, n, |i, j| self.h[(swap(i), swap(j))].conj());
        Self {
            grid: self.grid.clone(),
            h,
            c: self.c.conj(),
            clipped: self.clipped,
        }
    }

    /// Largest coefficient of `Q - Q^+` (scalar included).
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.adjoint();
        let dh = max_abs(&(&self.h - &adj.h));
        dh.max((self.c - adj.c).norm())
    }

    pub fn hermitian_part(&self) -> Self {
        self.add(&self.adjoint())
            .expect("same grid")
            .scale(Complex64::new(0.5, 0.0))
    }

    pub fn antihermitian_part(&self) -> Self {
        self.sub(&self.adjoint())
            .expect("same grid")
            .scale(Complex64::new(0.5, 0.0))
    }

    /// Largest absolute difference between coefficient matrices and scalars.
    pub fn max_coefficient_diff(&self, other: &Self) -> Result<f64> {
        check_grid(&self.grid, &other.grid)?;
        Ok(max_abs(&(&self.h - &other.h)).max((self.c - other.c).norm()))
    }
}

/// Fourier component `T[m]` of the stress tensor as the lattice convolution
/// `sum_l d_nu w_l w_(m+l) phi_(-l) phi_(m+l)` over signed indices.
///
/// Pairs with an index off the lattice are dropped and the form is flagged
/// clipped. `T[m]^+ = T[-m]`.
pub fn t_omega(grid: &FrequencyGrid, m: i64) -> QuadraticForm {
    let mm = grid.modes() as i64;
    let mut q = QuadraticForm::zero(grid);
    for l in -mm..=mm {
        if l == 0 {
            continue;
        }
        let r = m + l;
        if r.abs() > mm {
            q.clipped = true;
            continue;
        }
        if r == 0 {
            continue;
        }
        let w = grid.d_nu() * grid.signed_omega(l) * grid.signed_omega(r);
        let x = FieldVector::field_mode(grid, -l);
        let y = FieldVector::field_mode(grid, r);
        q.add_product(&x, &y, Complex64::new(w, 0.0));
    }
    q
}

/// Generator `T_k = (-i)^k d^k/dw^k T[w] |_(w=0)` for `k` in `0..=3`.
///
/// The derivative uses compact second-order central weights on the signed
/// family `T[m]`, touching `m` in `-1..=1` for `k <= 2` and `-2..=2` for `k = 3`.
pub fn t_k(grid: &FrequencyGrid, k: usize) -> Result<QuadraticForm> {
    let weights = taylor_weights(k, grid.d_omega())?;
    let phase = I.powi(-(k as i32));
    let mut q = QuadraticForm::zero(grid);
    for (m, w) in weights {
        q = q.add(&t_omega(grid, m).scale(phase * w))?;
    }
    // the clipping at the top of the lattice is inherent to every T[m != 0]
    // and carries no information for the generators
    q.clipped = false;
    Ok(q)
}

/// `d_omega <[T[m], T[-m]]>_vac / (hbar^2 w_m^3)`; tends to 1/12 in the continuum.
pub fn central_charge_ratio(grid: &FrequencyGrid, m: i64) -> f64 {
    let c = t_omega(grid, m)
        .commutator(&t_omega(grid, -m))
        .expect("same grid");
    let w = grid.signed_omega(m);
    (c.vacuum_expectation() * grid.d_omega() / (grid.hbar().powi(2) * w.powi(3))).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx_eq::close;

    mod approx_eq {
        pub fn close(a: f64, b: f64, tol: f64) -> bool {
            (a - b).abs() <= tol * (1.0 + b.abs())
        }
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn t_zero_is_energy_form() {
        let g = FrequencyGrid::new(6, 0.4).unwrap();
        let q = t_omega(&g, 0);
        let a = q.a_block();
        for j in 0..6 {
            for k in 0..6 {
                let expect = if j == k { g.hbar() * g.omega(j) } else { 0.0 };
                assert!((a[(j, k)] - c(expect)).norm() < 1e-13);
            }
        }
        assert_eq!(q.pair_norm(), 0.0);
        assert!(q.scalar_part().norm() < 1e-14);
        let vac: f64 = g.omegas().iter().sum::<f64>() * g.hbar() / 2.0;
        assert!((q.vacuum_expectation() - c(vac)).norm() < 1e-12);
        assert!(!q.clipped());
    }

    #[test]
    fn t_omega_closed_form() {
        let g = FrequencyGrid::new(7, 0.3).unwrap();
        let hb = g.hbar();
        for m in -6i64..=6 {
            let q = t_omega(&g, m);
            let (a, b, cb) = (q.a_block(), q.b_block(), q.c_block());
            for j in 0..7 {
                for k in 0..7 {
                    let (wj, wk) = (g.omega(j), g.omega(k));
                    let ea = if k as i64 - j as i64 == m { hb * (wj * wk).sqrt() } else { 0.0 };
                    let pair = -hb * (wj * wk).sqrt();
                    let s = j as i64 + k as i64 + 2;
                    let eb = if m > 0 && s == m { pair } else { 0.0 };
                    let ec = if m < 0 && s == -m { pair } else { 0.0 };
                    assert!((a[(j, k)] - c(ea)).norm() < 1e-12, "A m={m} {j},{k}");
                    assert!((b[(j, k)] - c(eb)).norm() < 1e-12, "B m={m} {j},{k}");
                    assert!((cb[(j, k)] - c(ec)).norm() < 1e-12, "C m={m} {j},{k}");
                }
            }
            assert!(q.scalar_part().norm() < 1e-12);
            let adj = t_omega(&g, -m);
            assert!(q.adjoint().max_coefficient_diff(&adj).unwrap() < 1e-12);
        }
    }

    #[test]
    fn small_lattice_pair_support() {
        // M = 3, m = -2: only the pair (w_1, w_1) sums to |w_m|
        let g = FrequencyGrid::new(4, 1.0).unwrap();
        let q = t_omega(&g, -2);
        let cb = q.c_block();
        let mut support = vec![];
        for j in 0..4 {
            for k in 0..4 {
                if cb[(j, k)].norm() > 0.0 {
                    support.push((j, k));
                }
            }
        }
        assert_eq!(support, vec![(0, 0)]);
        assert_eq!(q.b_block().norm(), 0.0);
    }

    #[test]
    fn number_on_pair_gives_minus_two_pair() {
        let g = FrequencyGrid::new(4, 1.0).unwrap();
        let a0 = FieldVector::annihilator(&g, 0);
        let n = QuadraticForm::product(&FieldVector::creator(&g, 0), &a0).unwrap();
        let aa = QuadraticForm::product(&a0, &a0).unwrap();
        let comm = n.commutator(&aa).unwrap();
        let expect = aa.scale(c(-2.0));
        assert!(comm.max_coefficient_diff(&expect).unwrap() < 1e-14);
        assert!(n.commutator(&n).unwrap().max_coefficient_diff(&QuadraticForm::zero(&g)).unwrap() == 0.0);
        // a^+ a in Weyl form is 1/2{a^+,a} - 1/2
        assert!((n.scalar_part() - c(-0.5)).norm() < 1e-15);
        assert!(n.vacuum_expectation().norm() < 1e-15);
    }

    #[test]
    fn field_action() {
        let g = FrequencyGrid::new(8, 0.25).unwrap();
        let hb = g.hbar();
        let t0 = t_omega(&g, 0);
        for j in 1..=8i64 {
            let v = t0.act_on_field(&FieldVector::field_mode(&g, j)).unwrap();
            for l in -8..=8i64 {
                let expect = if l == j { -hb * g.signed_omega(j) } else { 0.0 };
                assert!((v.field_component(l) - c(expect)).norm() < 1e-12);
            }
        }
        let s = QuadraticForm::scalar(&g, c(3.0));
        assert_eq!(s.act_on_field(&FieldVector::field_mode(&g, 2)).unwrap().norm(), 0.0);
        for m in [-3i64, 2, 5] {
            let t = t_omega(&g, m);
            for j in [-4i64, 1, 3] {
                if (m + j).abs() > 8 || m + j == 0 {
                    continue;
                }
                let v = t.act_on_field(&FieldVector::field_mode(&g, j)).unwrap();
                let expect = -hb * g.signed_omega(m + j);
                assert!((v.field_component(m + j) - c(expect)).norm() < 1e-12, "m {m} j {j}");
                let rest: f64 = (-8..=8i64)
                    .filter(|&l| l != m + j)
                    .map(|l| v.field_component(l).norm())
                    .sum();
                assert!(rest < 1e-12);
            }
        }
    }

    #[test]
    fn generator_dichotomy_and_hermiticity() {
        let g = FrequencyGrid::new(16, 0.5).unwrap();
        for k in 0..=3 {
            let q = t_k(&g, k).unwrap();
            assert!(q.hermiticity_defect() < 1e-12 * q.number_norm(), "k {k}");
            let pn = q.pair_norm();
            if k <= 2 {
                assert!(pn <= 1e-12 * q.number_norm(), "k {k}: {pn}");
            } else {
                assert!(pn > 1e-6 * q.number_norm(), "k {k}: {pn}");
            }
        }
        assert!(t_k(&g, 0).unwrap().max_coefficient_diff(&t_omega(&g, 0)).unwrap() == 0.0);
        assert!(t_k(&g, 4).is_err());
    }

    #[test]
    fn vacuum_expectation_examples() {
        let g = FrequencyGrid::new(5, 0.5).unwrap();
        let a = DMatrix::from_diagonal(&DVector::from_fn(5, |j, _| c(j as f64 + 1.0)));
        let z = DMatrix::zeros(5, 5);
        let q = QuadraticForm::from_blocks(&g, &a, &z, &z, ZERO).unwrap();
        assert!((q.vacuum_expectation() - c(7.5)).norm() < 1e-15);
        let t0 = t_k(&g, 0).unwrap();
        let t1 = t_k(&g, 1).unwrap();
        assert!(t0.commutator(&t1).unwrap().vacuum_expectation().norm() < 1e-12);
    }

    #[test]
    fn lattice_closure_of_fourier_components() {
        // [T[m], T[n]] = hbar (w_m - w_n) T[m+n] away from the top edge
        let g = FrequencyGrid::new(20, 0.5).unwrap();
        let mm = g.modes();
        for (m, n) in [(1i64, 2i64), (3, -1), (-2, -3), (4, -4), (2, -5)] {
            let lhs = t_omega(&g, m).commutator(&t_omega(&g, n)).unwrap();
            let rhs = t_omega(&g, m + n).scale(c(g.hbar() * g.signed_omega(m - n)));
            let reach = (m.abs() + n.abs()) as usize;
            let mut worst: f64 = 0.0;
            for i in 0..2 * mm {
                for j in 0..2 * mm {
                    let (ji, jj) = (i % mm, j % mm);
                    if ji + reach < mm && jj + reach < mm {
                        let d = lhs.coefficient_matrix()[(i, j)] - rhs.coefficient_matrix()[(i, j)];
                        worst = worst.max(d.norm());
                    }
                }
            }
            assert!(worst < 1e-11, "({m},{n}) {worst}");
        }
    }

    #[test]
    fn central_charge_matches_pair_count() {
        let g = FrequencyGrid::new(32, 0.25).unwrap();
        for m in [2i64, 5, 11, 20] {
            // <[T[m],T[-m]]> = 1/2 sum_(p+q=m) hbar^2 w_p w_q, counted by hand
            let pairs: f64 = (1..m).map(|p| (p * (m - p)) as f64).sum();
            let h = g.d_omega();
            let expect = 0.5 * pairs * h * h * h / (m as f64 * h).powi(3);
            assert!(close(central_charge_ratio(&g, m), expect, 1e-12), "m {m}");
        }
        assert!(central_charge_ratio(&g, 1).abs() < 1e-14);
    }

    #[test]
    fn product_scalar_from_ordering() {
        let g = FrequencyGrid::new(4, 1.0).unwrap();
        let a = FieldVector::annihilator(&g, 2);
        let ad = FieldVector::creator(&g, 2);
        // a a^+ = 1/2{a,a^+} + 1/2
        let q = QuadraticForm::product(&a, &ad).unwrap();
        assert!((q.scalar_part() - c(0.5)).norm() < 1e-15);
        assert!((q.vacuum_expectation() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn boost_acceleration_closure() {
        let g = FrequencyGrid::new(24, 0.25).unwrap();
        let t1 = t_k(&g, 1).unwrap();
        let t2 = t_k(&g, 2).unwrap();
        let lhs = t1.commutator(&t2).unwrap();
        let rhs = t2.scale(I * g.hbar());
        let m = g.modes();
        let mut worst: f64 = 0.0;
        for i in 0..2 * m {
            for j in 0..2 * m {
                if i % m + 4 < m && j % m + 4 < m {
                    let d = lhs.coefficient_matrix()[(i, j)] - rhs.coefficient_matrix()[(i, j)];
                    worst = worst.max(d.norm());
                }
            }
        }
        assert!(worst < 1e-10 * rhs.number_norm(), "{worst}");
    }
}
