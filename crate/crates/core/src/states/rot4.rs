//! Rotationally invariant states of two spin-3/2 particles.

use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, CMatrix, Dims, C64, CLUSTER_TOL, ZERO};

const SPIN: f64 = 1.5;
const LOCAL_DIM: usize = 4;
const PARAM_TOL: f64 = 1e-12;

/// Weights of P0, P1, P2; P3 takes the remainder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl RotParams {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        let ok = [p, q, r].iter().all(|x| *x >= -PARAM_TOL) && p + q + r <= 1.0 + PARAM_TOL;
        if !ok {
            return Err(Error::BadProbabilities(format!(
                "rot4 parameters ({p}, {q}, {r}) outside the simplex"
            )));
        }
        Ok(Self {
            p: p.max(0.0),
            q: q.max(0.0),
            r: r.max(0.0),
        })
    }

    pub fn weights(&self) -> [f64; 4] {
        [self.p, self.q, self.r, (1.0 - self.p - self.q - self.r).max(0.0)]
    }
}

/// (Jx, Jy, Jz) for spin 3/2 in the basis m = 3/2, 1/2, -1/2, -3/2.
pub fn spin_operators() -> [CMatrix; 3] {
    let n = LOCAL_DIM;
    let m = |i: usize| SPIN - i as f64;
    let mut jp = CMatrix::zeros(n, n);
    for i in 1..n {
        // J+ |m_i> = sqrt(s(s+1) - m_i(m_i+1)) |m_{i-1}>
        let c = (SPIN * (SPIN + 1.0) - m(i) * (m(i) + 1.0)).sqrt();
        jp[(i - 1, i)] = C64::new(c, 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm).scale_real(0.5);
    let jy = (&jp - &jm).scale(C64::new(0.0, -0.5));
    let jz = CMatrix::diag_real(&(0..n).map(m).collect::<Vec<_>>());
    [jx, jy, jz]
}

/// Total J^2 = Σ_a (J_a⊗1 + 1⊗J_a)^2 on the two-particle space.
pub fn total_j_squared() -> CMatrix {
    let id = CMatrix::identity(LOCAL_DIM);
    spin_operators()
        .iter()
        .map(|j| {
            let t = &j.kron(&id) + &id.kron(j);
            t.matmul(&t)
        })
        .fold(CMatrix::zeros(16, 16), |acc, x| &acc + &x)
}

/// Normalized projectors P_J = Π_J / (2J+1) for J = 0..3.
pub fn rot4_projectors() -> Result<[CMatrix; 4]> {
    let spec = hermitian_eig(&total_j_squared())?;
    let clusters = spec.clusters(CLUSTER_TOL);
    let sizes: Vec<usize> = clusters.iter().rev().map(|(_, idx)| idx.len()).collect();
    if sizes != [1, 3, 5, 7] {
        return Err(Error::ClusterMismatch {
            found: sizes,
            expected: vec![1, 3, 5, 7],
        });
    }
    let mut out: [CMatrix; 4] = std::array::from_fn(|_| CMatrix::zeros(16, 16));
    for (j, (value, idx)) in clusters.iter().rev().enumerate() {
        let jj = j as f64;
        if (value - jj * (jj + 1.0)).abs() > 1e-6 {
            return Err(Error::ClusterMismatch {
                found: sizes.clone(),
                expected: vec![1, 3, 5, 7],
            });
        }
        out[j] = spec.projector(idx).scale_real(1.0 / (2.0 * jj + 1.0));
    }
    Ok(out)
}

/// The J = 0 vector, phase-fixed so its first nonzero entry is real positive.
pub fn rot4_singlet(projectors: &[CMatrix; 4]) -> Vec<C64> {
    let p0 = &projectors[0];
    let n = p0.rows();
    let col = (0..n)
        .max_by(|&a, &b| p0[(a, a)].re.total_cmp(&p0[(b, b)].re))
        .expect("nonempty");
    let v = p0.column(col);
    let norm = crate::linalg::vec_norm(&v);
    let lead = v.iter().find(|z| z.norm() > 1e-8).copied().unwrap_or(ZERO);
    let phase = if lead.norm() > 0.0 { lead.conj() / lead.norm() } else { C64::new(1.0, 0.0) };
    v.into_iter().map(|z| z * phase / norm).collect()
}

/// p P0 + q P1 + r P2 + (1-p-q-r) P3 on 4 ⊗ 4.
pub fn rot4(params: RotParams) -> Result<DensityMatrix> {
    Ok(rot4_from(&rot4_projectors()?, params))
}

/// Same as [`rot4`] with precomputed projectors.
pub fn rot4_from(projectors: &[CMatrix; 4], params: RotParams) -> DensityMatrix {
    let mut m = CMatrix::zeros(16, 16);
    for (w, p) in params.weights().iter().zip(projectors) {
        if *w != 0.0 {
            m += &p.scale_real(*w);
        }
    }
    DensityMatrix::from_parts(m, Dims::bipartite(LOCAL_DIM))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_algebra() {
        let [jx, jy, jz] = spin_operators();
        // [Jx, Jy] = i Jz
        let comm = &jx.matmul(&jy) - &jy.matmul(&jx);
        assert!(comm.max_abs_diff(&jz.scale(C64::new(0.0, 1.0))) < 1e-14);
        let casimir = &(&jx.matmul(&jx) + &jy.matmul(&jy)) + &jz.matmul(&jz);
        assert!(casimir.max_abs_diff(&CMatrix::identity(4).scale_real(3.75)) < 1e-14);
    }

    #[test]
    fn projectors_are_orthogonal_with_unit_trace() {
        let ps = rot4_projectors().unwrap();
        for (j, pj) in ps.iter().enumerate() {
            assert!((pj.trace().re - 1.0).abs() < 1e-12);
            for (k, pk) in ps.iter().enumerate() {
                let prod = pj.matmul(pk);
                let expect = if j == k {
                    pj.scale_real(1.0 / (2.0 * j as f64 + 1.0))
                } else {
                    CMatrix::zeros(16, 16)
                };
                assert!(prod.max_abs_diff(&expect) < 1e-10);
            }
        }
    }

    #[test]
    fn singlet_is_unit_and_spans_p0() {
        let ps = rot4_projectors().unwrap();
        let s = rot4_singlet(&ps);
        assert!(CMatrix::projector(&s).max_abs_diff(&ps[0]) < 1e-10);
    }

    #[test]
    fn params_validation() {
        assert!(RotParams::new(0.5, 0.5, 0.1).is_err());
        assert!(RotParams::new(-0.1, 0.5, 0.1).is_err());
        assert_eq!(RotParams::new(0.0, 0.0, 0.0).unwrap().weights(), [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn single_term_mixture_is_p3() {
        let ps = rot4_projectors().unwrap();
        let rho = rot4(RotParams::new(0.0, 0.0, 0.0).unwrap()).unwrap();
        assert!(rho.mat().max_abs_diff(&ps[3]) < 1e-15);
    }
}
