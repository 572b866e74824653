//! Compressed-row complex sparse matrices.

use num_complex::Complex64;
use rayon::prelude::*;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
        for (i, &v) in d.iter().enumerate() {
            rows[i].push((i, v));
        }
        Self::from_rows(n, n, rows)
    }

    /// Duplicates are summed, exact zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, Complex64)]) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); nrows];
        for &(i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i},{j}) out of bounds");
            rows[i].push((j, v));
        }
        Self::from_rows(nrows, ncols, rows)
    }

    /// Build from unsorted per-row entry lists.
    pub fn from_rows(nrows: usize, ncols: usize, mut rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        assert_eq!(rows.len(), nrows);
        rows.par_iter_mut().for_each(|r| compact_row(r));
        let mut indptr = Vec::with_capacity(nrows + 1);
        indptr.push(0);
        let nnz: usize = rows.iter().map(|r| r.len()).sum();
        let mut indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for r in rows {
            for (j, v) in r {
                indices.push(j);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn from_dense(d: &nalgebra::DMatrix<Complex64>) -> Self {
        let rows = (0..d.nrows())
            .map(|i| (0..d.ncols()).map(|j| (j, d[(i, j)])).collect())
            .collect();
        Self::from_rows(d.nrows(), d.ncols(), rows)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        self.indices[s..e].iter().copied().zip(self.values[s..e].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        match self.indices[s..e].binary_search(&j) {
            Ok(k) => self.values[s + k],
            Err(_) => ZERO,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let mut d = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            d[(i, j)] = v;
        }
        d
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        if s == ZERO {
            return Self::zeros(self.nrows, self.ncols);
        }
        out
    }

    /// `a * self + b * other`.
    pub fn axpby(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows = (0..self.nrows)
            .into_par_iter()
            .map(|i| {
                let mut r: Vec<(usize, Complex64)> = self.row(i).map(|(j, v)| (j, a * v)).collect();
                r.extend(other.row(i).map(|(j, v)| (j, b * v)));
                r
            })
            .collect();
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    pub fn add(&self, other: &Self) -> Self {
        let one = Complex64::new(1.0, 0.0);
        self.axpby(one, other, one)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpby(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.ncols];
        for (i, j, v) in self.triplets() {
            rows[j].push((i, v));
        }
        Self::from_rows(self.ncols, self.nrows, rows)
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        t.values.iter_mut().for_each(|v| *v = v.conj());
        t
    }

    /// Row-parallel Gustavson product.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimensions differ");
        let n = other.ncols;
        let rows: Vec<Vec<(usize, Complex64)>> = (0..self.nrows)
            .into_par_iter()
            .map_init(
                || (vec![ZERO; n], vec![false; n], Vec::<usize>::new()),
                |(acc, seen, cols), i| {
                    for (k, a) in self.row(i) {
                        for (j, b) in other.row(k) {
                            if !seen[j] {
                                seen[j] = true;
                                cols.push(j);
                            }
                            acc[j] += a * b;
                        }
                    }
                    let mut out = Vec::with_capacity(cols.len());
                    for &j in cols.iter() {
                        out.push((j, acc[j]));
                        acc[j] = ZERO;
                        seen[j] = false;
                    }
                    cols.clear();
                    out
                },
            )
            .collect();
        Self::from_rows(self.nrows, n, rows)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .into_par_iter()
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// `self (x) other`, with `other` the fast index.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.nrows, other.ncols);
        let rows = (0..self.nrows * r2)
            .into_par_iter()
            .map(|i| {
                let (i1, i2) = (i / r2, i % r2);
                let mut r = Vec::new();
                for (j1, a) in self.row(i1) {
                    for (j2, b) in other.row(i2) {
                        r.push((j1 * c2 + j2, a * b));
                    }
                }
                r
            })
            .collect();
        Self::from_rows(self.nrows * r2, self.ncols * c2, rows)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// `{self, other}`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.matmul(other).add(&other.matmul(self))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of `self - self^+`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    /// Keep entries with `keep_row(i) && keep_col(j)`; shape is unchanged.
    pub fn mask(&self, keep_row: impl Fn(usize) -> bool + Sync, keep_col: impl Fn(usize) -> bool + Sync) -> Self {
        let rows = (0..self.nrows)
            .into_par_iter()
            .map(|i| {
                if keep_row(i) {
                    self.row(i).filter(|(j, _)| keep_col(*j)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    /// Principal submatrix on the listed indices, in the given order.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.ncols.max(self.nrows)];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let rows = idx
            .iter()
            .map(|&i| {
                self.row(i)
                    .filter(|(j, _)| pos[*j] != usize::MAX)
                    .map(|(j, v)| (pos[j], v))
                    .collect()
            })
            .collect();
        Self::from_rows(idx.len(), idx.len(), rows)
    }

    /// Expectation `<x|self|x>` (no normalization).
    pub fn expectation(&self, x: &[Complex64]) -> Complex64 {
        let y = self.matvec(x);
        x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum()
    }
}

fn compact_row(r: &mut Vec<(usize, Complex64)>) {
    r.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(r.len());
    for &(j, v) in r.iter() {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|e| e.1 != ZERO);
    *r = out;
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dense_strategy(n: usize) -> impl Strategy<Value = DMatrix<Complex64>> {
        proptest::collection::vec((-3i32..=3, -3i32..=3), n * n).prop_map(move |v| {
            DMatrix::from_iterator(n, n, v.into_iter().map(|(a, b)| c(a as f64, b as f64)))
        })
    }

    #[test]
    fn triplets_sum_and_drop() {
        let m = CsrMatrix::from_triplets(
            2,
            3,
            &[(0, 2, c(1.0, 0.0)), (0, 2, c(-1.0, 0.0)), (1, 0, c(2.0, 1.0)), (1, 0, c(1.0, 0.0))],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), c(3.0, 1.0));
        assert_eq!(m.get(0, 2), ZERO);
    }

    #[test]
    fn kron_small() {
        let a = CsrMatrix::from_dense(&DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), ZERO, c(0.0, 1.0)]));
        let b = CsrMatrix::identity(3);
        let k = a.kron(&b);
        assert_eq!((k.nrows(), k.ncols()), (6, 6));
        assert_eq!(k.get(1, 4), c(2.0, 0.0));
        assert_eq!(k.get(5, 5), c(0.0, 1.0));
        assert_eq!(k.get(1, 3), ZERO);
    }

    #[test]
    fn restrict_and_mask() {
        let d = DMatrix::from_fn(4, 4, |i, j| c((i * 4 + j) as f64, 0.0));
        let m = CsrMatrix::from_dense(&d);
        let r = m.restrict(&[3, 1]);
        assert_eq!(r.get(0, 1), c(13.0, 0.0));
        assert_eq!(r.get(1, 0), c(7.0, 0.0));
        let mk = m.mask(|i| i < 2, |j| j >= 2);
        assert_eq!(mk.nnz(), 4);
    }

    proptest! {
        #[test]
        fn matmul_matches_dense(a in dense_strategy(5), b in dense_strategy(5)) {
            let p = CsrMatrix::from_dense(&a).matmul(&CsrMatrix::from_dense(&b)).to_dense();
            prop_assert!((p - &a * &b).norm() < 1e-12);
        }

        #[test]
        fn adjoint_is_involution(a in dense_strategy(4)) {
            let s = CsrMatrix::from_dense(&a);
            prop_assert_eq!(s.adjoint().adjoint(), s.clone());
            prop_assert!((s.adjoint().to_dense() - a.adjoint()).norm() == 0.0);
        }

        #[test]
        fn commutator_antisymmetric(a in dense_strategy(4), b in dense_strategy(4)) {
            let (sa, sb) = (CsrMatrix::from_dense(&a), CsrMatrix::from_dense(&b));
            let s = sa.commutator(&sb).add(&sb.commutator(&sa));
            prop_assert_eq!(s.nnz(), 0);
            let anti = sa.anticommutator(&sb).to_dense();
            prop_assert!((anti - (&a * &b + &b * &a)).norm() < 1e-12);
        }

        #[test]
        fn matvec_matches_dense(a in dense_strategy(6), x in proptest::collection::vec(-5.0f64..5.0, 6)) {
            let xv: Vec<Complex64> = x.iter().map(|&r| c(r, -r / 2.0)).collect();
            let y = CsrMatrix::from_dense(&a).matvec(&xv);
            let yd = &a * nalgebra::DVector::from_vec(xv.clone());
            for i in 0..6 {
                prop_assert!((y[i] - yd[i]).norm() < 1e-12);
            }
        }
    }
}
