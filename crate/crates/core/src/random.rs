//! Seeded random sampling: the single generator type used across the crate,
//! plus Ginibre matrices and Haar-distributed vectors and unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, vec_norm, CMatrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// Independent stream for worker or sample `stream` under a common seed.
pub fn derived(seed: u64, stream: u64) -> SeededRng {
    let mut rng = SeededRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian (real and imaginary parts i.i.d. N(0, 1/2)).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniformly random unit vector in C^n.
pub fn haar_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random unitary: Gram-Schmidt on the columns of a Ginibre matrix,
/// which yields the QR factor with positive diagonal in R.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    loop {
        let g = ginibre(d, d, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Returns `None`
/// when the columns are numerically dependent.
pub fn orthonormalize_columns(m: &CMatrix) -> Option<CMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.column(j);
        for _pass in 0..2 {
            for b in &basis {
                let c = inner(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm < 1e-10 {
            return None;
        }
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    Some(CMatrix::from_fn(rows, cols, |i, j| basis[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_deviation;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = seeded(7);
        for d in 1..6 {
            assert!(unitarity_deviation(&haar_unitary(d, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a = haar_vector(5, &mut derived(3, 11));
        let b = haar_vector(5, &mut derived(3, 11));
        let c = haar_vector(5, &mut derived(3, 12));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
