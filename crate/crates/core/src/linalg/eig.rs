//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the
//! combined 2x2 unitary acting on columns `p, q` is
//!
//! ```text
//! [ c          s         ]
//! [ -s e^{-iφ}  c e^{-iφ} ]
//! ```
//!
//! where `a_pq = |a_pq| e^{iφ}`.

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Off-diagonal Frobenius tolerance, relative to the Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Eigenvalues closer than this are treated as one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Eigen-decomposition M = U diag(λ) U^† with λ sorted descending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub vectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("empty spectrum")
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// U f(Λ) U^†
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let u = &self.vectors;
        let fvals: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| u[(i, k)] * u[(j, k)].conj() * fvals[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_fn(|x| x)
    }

    /// Groups eigenvalues into clusters of nearly equal values. Returns
    /// (representative value, column indices) for each cluster in
    /// descending order.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, Vec<usize>)> {
        let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
        for (k, &v) in self.values.iter().enumerate() {
            match out.last_mut() {
                Some((rep, idx)) if (*rep - v).abs() <= tol => idx.push(k),
                _ => out.push((v, vec![k])),
            }
        }
        for (rep, idx) in &mut out {
            *rep = idx.iter().map(|&k| self.values[k]).sum::<f64>() / idx.len() as f64;
        }
        out
    }

    /// Orthogonal projector onto the span of the given eigenvector columns.
    pub fn projector(&self, columns: &[usize]) -> CMatrix {
        let n = self.dim();
        let u = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| {
            columns.iter().map(|&k| u[(i, k)] * u[(j, k)].conj()).sum()
        })
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eig(m: &CMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::DimMismatch(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    m.check_hermitian()?;
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    if n <= 1 || scale == 0.0 {
        return Ok(sorted(a, v));
    }
    let target = JACOBI_TOL * scale;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    Ok(sorted(a, v))
}

/// Eigenvalues only (same algorithm).
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eig(m).map(|s| s.values)
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Pivots negligible against both diagonal entries are dropped.
    if mag < 1e-300 || (app.abs() + mag == app.abs() && aqq.abs() + mag == aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag; // e^{iφ}
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = phase.conj(); // e^{-iφ}
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = e * (-s);
    let u_qq = e * c;

    let n = a.rows();
    // A <- A U (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    // A <- U^† A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V <- V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

fn sorted(a: CMatrix, v: CMatrix) -> Spectrum {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Spectrum { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_sorted_descending() {
        let s = hermitian_eig(&CMatrix::diag_real(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(s.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn identity_spectrum() {
        let s = hermitian_eig(&CMatrix::identity(4)).unwrap();
        assert_eq!(s.values, vec![1.0; 4]);
    }

    #[test]
    fn two_by_two_complex() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1
        let m = CMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let s = hermitian_eig(&m).unwrap();
        assert!((s.values[0] - 3.0).abs() < 1e-14);
        assert!((s.values[1] - 1.0).abs() < 1e-14);
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn clusters_group_degenerate_values() {
        let s = hermitian_eig(&CMatrix::diag_real(&[1.0, 1.0 + 1e-12, 0.0])).unwrap();
        let c = s.clusters(CLUSTER_TOL);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1.len(), 2);
    }
}
