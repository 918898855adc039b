//! Dense complex linear algebra used by every other module.

mod eig;
mod matrix;
mod subsystem;

pub use eig::{eigenvalues, hermitian_eig, Spectrum, CLUSTER_TOL, JACOBI_TOL, MAX_SWEEPS};
pub use matrix::{inner, kron_all, kron_vec, vec_norm, CMatrix, C64, HERMITIAN_TOL, I, ONE, ZERO};
pub use subsystem::{
    embed, maximally_entangled_unnormalized, partial_trace, partial_transpose, permutation_map,
    permute_subsystems, permute_vector, trace_and_pad, Dims,
};

use crate::error::{Error, Result};

/// Eigenvalues above this (negative) threshold are clipped to zero when a
/// positive semidefinite input is expected.
pub const PSD_TOL: f64 = 1e-10;

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let s = hermitian_eig(m)?;
    let min = s.min();
    if min < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(s.apply_fn(|x| x.max(0.0).sqrt()))
}

/// Eigenvalues at or below this are treated as roundoff by [`psd_factor`].
pub const FACTOR_CUTOFF: f64 = 1e-14;

/// Thin factor M with M M^† = m, keeping only eigenvalues above
/// [`FACTOR_CUTOFF`]. Square roots of roundoff-level eigenvalues would
/// otherwise leak ~1e-8 errors into spectral functionals.
pub fn psd_factor(m: &CMatrix) -> Result<CMatrix> {
    let s = hermitian_eig(m)?;
    let min = s.min();
    if min < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let keep: Vec<usize> = (0..s.dim()).filter(|&k| s.values[k] > FACTOR_CUTOFF).collect();
    Ok(CMatrix::from_fn(s.dim(), keep.len(), |i, c| {
        s.vectors[(i, keep[c])] * s.values[keep[c]].sqrt()
    }))
}

/// Operator norm of a Hermitian matrix, i.e. the largest |eigenvalue|.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    let s = hermitian_eig(m)?;
    Ok(s.max().abs().max(s.min().abs()))
}

pub fn max_eigenvalue(m: &CMatrix) -> Result<f64> {
    hermitian_eig(m).map(|s| s.max())
}

pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    hermitian_eig(m).map(|s| s.min())
}

/// exp(i H) for Hermitian H.
pub fn expi_hermitian(h: &CMatrix) -> Result<CMatrix> {
    let s = hermitian_eig(h)?;
    let n = s.dim();
    let u = &s.vectors;
    let phases: Vec<C64> = s.values.iter().map(|&x| C64::from_polar(1.0, x)).collect();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| u[(i, k)] * phases[k] * u[(j, k)].conj()).sum()
    }))
}

/// max |U^† U - 1| entrywise.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    u.adjoint()
        .matmul(u)
        .max_abs_diff(&CMatrix::identity(u.rows()))
}
