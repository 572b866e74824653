use num_complex::Complex64;
use rayon::prelude::*;

use super::basis::FockBasis;
use crate::error::{Error, Result};
use crate::quadform::QuadraticForm;
use crate::sparse::CsrMatrix;

/// Single-mode factor of a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    /// `a_j`
    Lower(usize),
    /// `a_j^+` (zero on states already holding `n_max` quanta)
    Raise(usize),
    /// Susskind-Glogower `e_j = sum |n><n+1|`
    PhaseLower(usize),
    /// `e_j^+`
    PhaseRaise(usize),
    /// `sqrt(N_j)`
    SqrtNumber(usize),
}

/// `coeff * ops[0] ops[1] ... ops[last]`, applied right to left.
#[derive(Clone, Debug)]
pub struct Monomial {
    pub coeff: Complex64,
    pub ops: Vec<Ladder>,
}

impl Monomial {
    pub fn new(coeff: Complex64, ops: Vec<Ladder>) -> Self {
        Self { coeff, ops }
    }
}

fn apply(basis: &FockBasis, occ: &mut [u8], total: &mut usize, ops: &[Ladder]) -> Option<f64> {
    let mut amp = 1.0;
    for op in ops.iter().rev() {
        match *op {
            Ladder::Lower(j) => {
                let n = occ[j];
                if n == 0 {
                    return None;
                }
                amp *= (n as f64).sqrt();
                occ[j] -= 1;
                *total -= 1;
            }
            Ladder::Raise(j) => {
                if *total >= basis.n_max() {
                    return None;
                }
                occ[j] += 1;
                *total += 1;
                amp *= (occ[j] as f64).sqrt();
            }
            Ladder::PhaseLower(j) => {
                if occ[j] == 0 {
                    return None;
                }
                occ[j] -= 1;
                *total -= 1;
            }
            Ladder::PhaseRaise(j) => {
                if *total >= basis.n_max() {
                    return None;
                }
                occ[j] += 1;
                *total += 1;
            }
            Ladder::SqrtNumber(j) => {
                if occ[j] == 0 {
                    return None;
                }
                amp *= (occ[j] as f64).sqrt();
            }
        }
    }
    Some(amp)
}

/// Sparse matrix of a sum of ladder monomials on `basis`, built column by
/// column in parallel.
pub fn realize_monomials(basis: &FockBasis, terms: &[Monomial]) -> CsrMatrix {
    let dim = basis.dimension();
    let m = basis.modes();
    let cols: Vec<Vec<(usize, Complex64)>> = (0..dim)
        .into_par_iter()
        .map_init(
            || vec![0u8; m],
            |buf, col| {
                let mut out = Vec::new();
                for t in terms {
                    buf.copy_from_slice(basis.occupation(col));
                    let mut total = basis.total(col);
                    if let Some(a) = apply(basis, buf, &mut total, &t.ops) {
                        let row = basis.index_of(buf).expect("state within cap");
                        out.push((row, t.coeff * a));
                    }
                }
                out
            },
        )
        .collect();
    let mut triplets = Vec::with_capacity(cols.iter().map(|c| c.len()).sum());
    for (j, c) in cols.into_iter().enumerate() {
        for (i, v) in c {
            triplets.push((i, j, v));
        }
    }
    CsrMatrix::from_triplets(dim, dim, &triplets)
}

/// Matrix on a basis, with a label and the hermiticity it is expected to have.
#[derive(Clone, Debug)]
pub struct FockOperator {
    pub matrix: CsrMatrix,
    pub label: String,
    pub hermitian: bool,
}

impl FockOperator {
    pub fn new(matrix: CsrMatrix, label: impl Into<String>, hermitian: bool) -> Self {
        Self {
            matrix,
            label: label.into(),
            hermitian,
        }
    }

    /// True unless the operator is flagged hermitian and
    /// `|Op - Op^+| > 1e-12 |Op|` (Frobenius).
    pub fn hermiticity_ok(&self) -> bool {
        if !self.hermitian {
            return true;
        }
        let d = self.matrix.sub(&self.matrix.adjoint()).frobenius_norm();
        d <= 1e-12 * self.matrix.frobenius_norm().max(f64::MIN_POSITIVE)
    }
}

/// Amplitudes over a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub amps: Vec<Complex64>,
}

impl FieldState {
    pub fn vacuum(basis: &FockBasis) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); basis.dimension()];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            amps: self.amps.iter().map(|a| a / n).collect(),
        }
    }

    pub fn expectation(&self, op: &CsrMatrix) -> Complex64 {
        op.expectation(&self.amps)
    }

    pub fn apply(&self, op: &CsrMatrix) -> Self {
        Self {
            amps: op.matvec(&self.amps),
        }
    }

    /// Norm of the part of the state with exactly `n` quanta.
    pub fn sector_norm(&self, basis: &FockBasis, n: usize) -> f64 {
        basis
            .indices_with_total(n)
            .iter()
            .map(|&i| self.amps[i].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// The ladder family `{a_j, a_j^+, N_j}` on a basis.
#[derive(Clone, Debug)]
pub struct ModeOperators {
    pub lower: Vec<CsrMatrix>,
    pub raise: Vec<CsrMatrix>,
    pub number: Vec<CsrMatrix>,
}

fn one(op: Ladder) -> Vec<Monomial> {
    vec![Monomial::new(Complex64::new(1.0, 0.0), vec![op])]
}

pub fn lowering(basis: &FockBasis, j: usize) -> CsrMatrix {
    realize_monomials(basis, &one(Ladder::Lower(j)))
}

pub fn raising(basis: &FockBasis, j: usize) -> CsrMatrix {
    realize_monomials(basis, &one(Ladder::Raise(j)))
}

/// `N_j`, diagonal.
pub fn number(basis: &FockBasis, j: usize) -> CsrMatrix {
    let d: Vec<Complex64> = (0..basis.dimension())
        .map(|i| Complex64::new(basis.occupation(i)[j] as f64, 0.0))
        .collect();
    CsrMatrix::from_diagonal(&d)
}

pub fn mode_operators(basis: &FockBasis) -> ModeOperators {
    let m = basis.modes();
    ModeOperators {
        lower: (0..m).map(|j| lowering(basis, j)).collect(),
        raise: (0..m).map(|j| raising(basis, j)).collect(),
        number: (0..m).map(|j| number(basis, j)).collect(),
    }
}

/// `n_w[j] = N_j / d_nu`.
pub fn number_density(basis: &FockBasis, j: usize) -> FockOperator {
    let s = 1.0 / basis.grid().d_nu();
    FockOperator::new(
        number(basis, j).scale(Complex64::new(s, 0.0)),
        format!("n_w[{j}]"),
        true,
    )
}

/// `n = sum_j N_j`.
pub fn total_number(basis: &FockBasis) -> FockOperator {
    let d: Vec<Complex64> = (0..basis.dimension())
        .map(|i| Complex64::new(basis.total(i) as f64, 0.0))
        .collect();
    FockOperator::new(CsrMatrix::from_diagonal(&d), "n", true)
}

/// Normal-ordered monomials of a form:
/// `sum A_jk a_j^+ a_k + 1/2 B a a + 1/2 C a^+ a^+ + <Q>_vac`.
pub fn form_monomials(q: &QuadraticForm) -> Vec<Monomial> {
    let m = q.modes();
    let (a, b, c) = (q.a_block(), q.b_block(), q.c_block());
    let zero = Complex64::new(0.0, 0.0);
    let mut terms = Vec::new();
    for j in 0..m {
        for k in 0..m {
            if a[(j, k)] != zero {
                terms.push(Monomial::new(a[(j, k)], vec![Ladder::Raise(j), Ladder::Lower(k)]));
            }
            if b[(j, k)] != zero {
                terms.push(Monomial::new(0.5 * b[(j, k)], vec![Ladder::Lower(j), Ladder::Lower(k)]));
            }
            if c[(j, k)] != zero {
                terms.push(Monomial::new(0.5 * c[(j, k)], vec![Ladder::Raise(j), Ladder::Raise(k)]));
            }
        }
    }
    let vac = q.vacuum_expectation();
    if vac != zero {
        terms.push(Monomial::new(vac, vec![]));
    }
    terms
}

/// Fock matrix of a quadratic form (normal-ordered realization; pair
/// creation out of the top sector is truncated).
pub fn realize(q: &QuadraticForm, basis: &FockBasis) -> Result<FockOperator> {
    if !q.grid().same_lattice(basis.grid()) {
        return Err(Error::GridMismatch);
    }
    let herm = q.hermiticity_defect() <= 1e-12 * (1.0 + q.number_norm() + q.pair_norm());
    Ok(FockOperator::new(
        realize_monomials(basis, &form_monomials(q)),
        "quadratic form",
        herm,
    ))
}
