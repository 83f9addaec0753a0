//! Sparse complex operators restricted to a conserved-charge sector.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::tl_core::{RsosBasis, SpinBasis};

pub type C64 = Complex64;

/// The Hilbert-space sector an operator acts on.
#[derive(Debug, Clone)]
pub enum Basis {
    Spin(Arc<SpinBasis>),
    Rsos(Arc<RsosBasis>),
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::Spin(b) => b.len(),
            Basis::Rsos(b) => b.len(),
        }
    }

    /// Number of sites (strands) of the chain.
    pub fn sites(&self) -> usize {
        match self {
            Basis::Spin(b) => b.sites(),
            Basis::Rsos(b) => b.sites(),
        }
    }

    fn same_as(&self, other: &Basis) -> bool {
        match (self, other) {
            (Basis::Spin(a), Basis::Spin(b)) => Arc::ptr_eq(a, b) || **a == **b,
            (Basis::Rsos(a), Basis::Rsos(b)) => Arc::ptr_eq(a, b) || **a == **b,
            _ => false,
        }
    }
}

/// Compressed sparse rows; row `i` holds `(column, value)` pairs sorted by column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(d: &[C64]) -> Self {
        Self {
            dim: d.len(),
            row_ptr: (0..=d.len()).collect(),
            cols: (0..d.len()).collect(),
            vals: d.to_vec(),
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed and exact zeros dropped.
    pub fn from_triplets(dim: usize, mut trip: Vec<(usize, usize, C64)>) -> Self {
        trip.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(trip.len());
        let mut vals: Vec<C64> = Vec::with_capacity(trip.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in trip {
            assert!(r < dim && c < dim, "triplet index out of range");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
        .pruned()
    }

    fn pruned(self) -> Self {
        if self.vals.iter().all(|v| *v != C64::new(0.0, 0.0)) {
            return self;
        }
        let mut row_ptr = vec![0usize; self.dim + 1];
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for i in 0..self.dim {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.vals[k] != C64::new(0.0, 0.0) {
                    cols.push(self.cols[k]);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr[i + 1] = cols.len();
        }
        Self {
            dim: self.dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    /// y = A x
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut seen = vec![false; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..n {
            for (j, a) in self.row(i) {
                for (k, b) in other.row(j) {
                    if !seen[k] {
                        seen[k] = true;
                        touched.push(k);
                    }
                    acc[k] += a * b;
                }
            }
            touched.sort_unstable();
            for &k in &touched {
                if acc[k] != C64::new(0.0, 0.0) {
                    cols.push(k);
                    vals.push(acc[k]);
                }
                acc[k] = C64::new(0.0, 0.0);
                seen[k] = false;
            }
            touched.clear();
            row_ptr[i + 1] = cols.len();
        }
        SparseMatrix {
            dim: n,
            row_ptr,
            cols,
            vals,
        }
    }

    /// a·A + b·B
    pub fn lincomb(a: C64, x: &SparseMatrix, b: C64, y: &SparseMatrix) -> SparseMatrix {
        assert_eq!(x.dim, y.dim, "dimension mismatch in sum");
        let n = x.dim;
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(x.nnz() + y.nnz());
        let mut vals = Vec::with_capacity(x.nnz() + y.nnz());
        for i in 0..n {
            let (mut p, pe) = (x.row_ptr[i], x.row_ptr[i + 1]);
            let (mut q, qe) = (y.row_ptr[i], y.row_ptr[i + 1]);
            while p < pe || q < qe {
                let cp = if p < pe { x.cols[p] } else { usize::MAX };
                let cq = if q < qe { y.cols[q] } else { usize::MAX };
                let (c, v) = if cp == cq {
                    let v = a * x.vals[p] + b * y.vals[q];
                    p += 1;
                    q += 1;
                    (cp, v)
                } else if cp < cq {
                    p += 1;
                    (cp, a * x.vals[p - 1])
                } else {
                    q += 1;
                    (cq, b * y.vals[q - 1])
                };
                if v != C64::new(0.0, 0.0) {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr[i + 1] = cols.len();
        }
        SparseMatrix {
            dim: n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn scaled(&self, s: C64) -> SparseMatrix {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= s);
        out.pruned()
    }

    pub fn adjoint(&self) -> SparseMatrix {
        let trip = self.triplets().map(|(i, j, v)| (j, i, v.conj())).collect();
        SparseMatrix::from_triplets(self.dim, trip)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let trip = self.triplets().map(|(i, j, v)| (j, i, v)).collect();
        SparseMatrix::from_triplets(self.dim, trip)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// sqrt(‖A‖₁‖A‖∞), an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let mut col_sums = vec![0.0f64; self.dim];
        let mut row_max = 0.0f64;
        for i in 0..self.dim {
            let mut s = 0.0;
            for (j, v) in self.row(i) {
                s += v.norm();
                col_sums[j] += v.norm();
            }
            row_max = row_max.max(s);
        }
        let col_max = col_sums.into_iter().fold(0.0, f64::max);
        (row_max * col_max).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.vals.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<C64>, drop_below: f64) -> SparseMatrix {
        assert_eq!(m.nrows(), m.ncols());
        let mut trip = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)].norm() > drop_below {
                    trip.push((i, j, m[(i, j)]));
                }
            }
        }
        SparseMatrix::from_triplets(m.nrows(), trip)
    }
}

/// A complex operator on a sector basis.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    pub basis: Basis,
    pub matrix: SparseMatrix,
}

impl SectorOperator {
    pub fn new(basis: Basis, matrix: SparseMatrix) -> Self {
        assert_eq!(basis.dim(), matrix.dim(), "operator does not match its basis");
        Self { basis, matrix }
    }

    pub fn identity(basis: &Basis) -> Self {
        Self::new(basis.clone(), SparseMatrix::identity(basis.dim()))
    }

    pub fn zeros(basis: &Basis) -> Self {
        Self::new(basis.clone(), SparseMatrix::zeros(basis.dim()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn scale(&self, s: impl Into<C64>) -> SectorOperator {
        SectorOperator::new(self.basis.clone(), self.matrix.scaled(s.into()))
    }

    pub fn lincomb(a: impl Into<C64>, x: &Self, b: impl Into<C64>, y: &Self) -> Self {
        x.check_compatible(y);
        SectorOperator::new(
            x.basis.clone(),
            SparseMatrix::lincomb(a.into(), &x.matrix, b.into(), &y.matrix),
        )
    }

    pub fn plus_identity(&self, s: impl Into<C64>) -> Self {
        Self::lincomb(1.0, self, s.into(), &Self::identity(&self.basis))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn adjoint(&self) -> Self {
        SectorOperator::new(self.basis.clone(), self.matrix.adjoint())
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matrix.apply(x)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn norm_bound(&self) -> f64 {
        self.matrix.norm_bound()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.matrix.to_dense()
    }

    /// Norm bound of `self − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm_bound()
    }

    /// Product of a list of operators, left to right.
    pub fn product<'a>(ops: impl IntoIterator<Item = &'a SectorOperator>) -> Option<SectorOperator> {
        ops.into_iter().fold(None, |acc: Option<SectorOperator>, o| {
            Some(match acc {
                None => o.clone(),
                Some(a) => &a * o,
            })
        })
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.basis.same_as(&other.basis),
            "operators act on different bases"
        );
    }
}

impl Mul for &SectorOperator {
    type Output = SectorOperator;
    fn mul(self, rhs: &SectorOperator) -> SectorOperator {
        self.check_compatible(rhs);
        SectorOperator::new(self.basis.clone(), self.matrix.matmul(&rhs.matrix))
    }
}

impl Add for &SectorOperator {
    type Output = SectorOperator;
    fn add(self, rhs: &SectorOperator) -> SectorOperator {
        SectorOperator::lincomb(1.0, self, 1.0, rhs)
    }
}

impl Sub for &SectorOperator {
    type Output = SectorOperator;
    fn sub(self, rhs: &SectorOperator) -> SectorOperator {
        SectorOperator::lincomb(1.0, self, -1.0, rhs)
    }
}
