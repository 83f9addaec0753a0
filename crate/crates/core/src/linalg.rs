//! Dense eigenvalue kernels (LAPACK `zgeev`) and a restarted Arnoldi iteration.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{SparseMatrix, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

fn zgeev(m: &DMatrix<C64>, vectors: bool) -> Result<(Vec<C64>, Option<DMatrix<C64>>)> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigenvalues of a non-square matrix");
    if n == 0 {
        return Ok((Vec::new(), vectors.then(|| DMatrix::zeros(0, 0))));
    }
    let mut a: Vec<C64> = m.as_slice().to_vec();
    let mut w = vec![ZERO; n];
    let mut vl = vec![ZERO; 1];
    let (jobvr, ldvr) = if vectors { (b'V', n) } else { (b'N', 1) };
    let mut vr = vec![ZERO; ldvr * if vectors { n } else { 1 }];
    let mut rwork = vec![0.0; 2 * n];
    let mut info = 0;
    let mut query = [ZERO];
    // SAFETY: every buffer is sized per the LAPACK documentation for zgeev.
    unsafe {
        lapack::zgeev(
            b'N', jobvr, n as i32, &mut a, n as i32, &mut w, &mut vl, 1, &mut vr, ldvr as i32,
            &mut query, -1, &mut rwork, &mut info,
        );
    }
    let lwork = (query[0].re as usize).max(2 * n);
    let mut work = vec![ZERO; lwork];
    unsafe {
        lapack::zgeev(
            b'N', jobvr, n as i32, &mut a, n as i32, &mut w, &mut vl, 1, &mut vr, ldvr as i32,
            &mut work, lwork as i32, &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "zgeev",
            info,
        });
    }
    let v = vectors.then(|| DMatrix::from_column_slice(n, n, &vr));
    Ok((w, v))
}

/// All eigenvalues of a dense complex matrix.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    Ok(zgeev(m, false)?.0)
}

/// Eigenvalues and right eigenvectors (columns, unit 2-norm).
pub fn eigen(m: &DMatrix<C64>) -> Result<(Vec<C64>, DMatrix<C64>)> {
    let (w, v) = zgeev(m, true)?;
    Ok((w, v.expect("vectors requested")))
}

/// Which end of the spectrum an iterative solve targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    SmallestReal,
    LargestModulus,
}

impl Target {
    fn better(self, a: C64, b: C64) -> bool {
        match self {
            Target::SmallestReal => a.re < b.re,
            Target::LargestModulus => a.norm() > b.norm(),
        }
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Restarted Arnoldi for the single extremal eigenvalue of a sparse operator.
///
/// Returns the eigenvalue and the final residual ‖A x − λ x‖.
pub fn arnoldi_extremal(
    a: &SparseMatrix,
    target: Target,
    krylov: usize,
    tol: f64,
    max_restarts: usize,
) -> Result<(C64, f64)> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::EmptySector("Arnoldi on a zero-dimensional operator".into()));
    }
    let m = krylov.clamp(2, n.max(2)).min(n);
    // Deterministic, generic start vector.
    let mut start: Vec<C64> = (0..n)
        .map(|i| {
            let x = (i as f64 + 1.0) * 0.618_033_988_749_895;
            C64::new(1.0 + (x - x.floor()), 0.3 * (x * 7.0).sin())
        })
        .collect();
    let mut last = (ZERO, f64::INFINITY);
    for _ in 0..max_restarts.max(1) {
        let s = norm(&start);
        start.iter_mut().for_each(|x| *x /= s);
        let mut basis: Vec<Vec<C64>> = vec![start.clone()];
        let mut h = DMatrix::<C64>::zeros(m + 1, m);
        let mut size = m;
        for j in 0..m {
            let mut w = a.apply(&basis[j]);
            // Two passes of Gram-Schmidt keep the basis orthonormal.
            for _ in 0..2 {
                for (i, q) in basis.iter().enumerate() {
                    let c = dot(q, &w);
                    h[(i, j)] += c;
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let beta = norm(&w);
            h[(j + 1, j)] = C64::new(beta, 0.0);
            if beta < 1e-14 || j + 1 == m {
                size = j + 1;
                if j + 1 < m {
                    break;
                }
            }
            if j + 1 < m {
                w.iter_mut().for_each(|x| *x /= beta);
                basis.push(w);
            }
        }
        let hk = h.view((0, 0), (size, size)).into_owned();
        let (vals, vecs) = eigen(&hk)?;
        let mut best = 0;
        for i in 1..vals.len() {
            if target.better(vals[i], vals[best]) {
                best = i;
            }
        }
        let theta = vals[best];
        let y = vecs.column(best);
        let mut x = vec![ZERO; n];
        for (k, q) in basis.iter().take(size).enumerate() {
            x.iter_mut().zip(q).for_each(|(xi, qi)| *xi += y[k] * qi);
        }
        let ax = a.apply(&x);
        let resid = norm(
            &ax.iter()
                .zip(&x)
                .map(|(p, q)| p - theta * q)
                .collect::<Vec<_>>(),
        ) / norm(&x).max(1e-300);
        last = (theta, resid);
        if resid < tol * theta.norm().max(1.0) {
            return Ok(last);
        }
        start = x;
    }
    Err(Error::NoConvergence {
        what: "Arnoldi",
        iterations: max_restarts,
        residual: last.1,
    })
}

/// Solves A x = b for dense A by LU.
pub fn solve(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Singular("LU factorisation of a singular matrix".into()))
}

pub fn dense_vector(x: &[C64]) -> DVector<C64> {
    DVector::from_column_slice(x)
}
