//! Quantum states: density matrices, pure states, and the state families
//! with known concurrence used throughout the bounds.

mod io;
mod rot4;

pub use io::StateFile;
pub use rot4::{
    rot4, rot4_from, rot4_projectors, rot4_singlet, spin_operators, total_j_squared, RotParams,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, psd_factor, 
    hermitian_eig, kron_vec, partial_trace, partial_transpose, vec_norm, CMatrix, Dims,
    C64, ONE, ZERO,
};
use crate::random::{complex_gaussian, ginibre, haar_vector, seeded};

pub const STATE_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-12;

/// Positive semidefinite, unit-trace matrix with its tensor structure.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Dims,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity to 1e-10.
    pub fn new(mat: CMatrix, dims: Dims) -> Result<Self> {
        dims.check_matrix(&mat)?;
        let dev = mat.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace is {:.12} instead of 1",
                tr.re
            )));
        }
        let min = hermitian_eig(&mat)?.min();
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(Self {
            mat: mat.hermitian_part(),
            dims,
        })
    }

    /// Skips validation; for matrices that are density matrices by construction.
    pub(crate) fn from_parts(mat: CMatrix, dims: Dims) -> Self {
        debug_assert_eq!(mat.rows(), dims.total());
        Self { mat, dims }
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        Self::from_parts(CMatrix::identity(n).scale_real(1.0 / n as f64), dims)
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    /// Tr(ρ^α)
    pub fn power_trace(&self, alpha: u32) -> f64 {
        match alpha {
            0 => self.dim() as f64,
            1 => self.mat.trace().re,
            2 => self.purity(),
            _ => self.mat.pow(alpha).trace().re,
        }
    }

    /// Tr(ρσ)
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        self.mat.trace_product(&other.mat).re
    }

    pub fn expectation(&self, op: &CMatrix) -> f64 {
        op.trace_product(&self.mat).re
    }

    /// Reduced state on the parties in `keep`.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep_sorted = self.dims.check_subset(keep)?;
        let m = partial_trace(&self.mat, &self.dims, &keep_sorted)?;
        Ok(Self::from_parts(m, self.dims.select(&keep_sorted)))
    }

    pub fn partial_transpose(&self, flip: &[usize]) -> Result<CMatrix> {
        partial_transpose(&self.mat, &self.dims, flip)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut d = self.dims.as_slice().to_vec();
        d.extend_from_slice(other.dims.as_slice());
        Self::from_parts(
            self.mat.kron(&other.mat),
            Dims::new(d).expect("nonempty dims"),
        )
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::DimMismatch("mixing states of different dims".into()));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::BadProbabilities(format!("weight {w}")));
        }
        let m = &self.mat.scale_real(w) + &other.mat.scale_real(1.0 - w);
        Ok(Self::from_parts(m, self.dims.clone()))
    }

    /// Requires exactly two parties.
    pub fn check_bipartite(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            &[a, b] => Ok((a, b)),
            other => Err(Error::BadPartition(format!(
                "expected a bipartite state, got dims {other:?}"
            ))),
        }
    }

    /// Requires two parties of equal dimension; returns that dimension.
    pub fn check_square_bipartite(&self) -> Result<usize> {
        let (a, b) = self.check_bipartite()?;
        if a != b {
            return Err(Error::DimMismatch(format!(
                "expected equal local dimensions, got {a}x{b}"
            )));
        }
        Ok(a)
    }
}

/// Unit vector with tensor structure.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    vec: Vec<C64>,
    dims: Dims,
}

impl PureState {
    pub fn new(vec: Vec<C64>, dims: Dims) -> Result<Self> {
        if vec.len() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "vector of length {} for dims {:?}",
                vec.len(),
                dims.as_slice()
            )));
        }
        let norm = vec_norm(&vec);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm is {norm} instead of 1")));
        }
        Ok(Self { vec, dims })
    }

    /// Normalizes the input first.
    pub fn normalized(vec: Vec<C64>, dims: Dims) -> Result<Self> {
        let norm = vec_norm(&vec);
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(vec.into_iter().map(|z| z / norm).collect(), dims)
    }

    pub fn product(factors: &[Vec<C64>]) -> Result<Self> {
        let dims = Dims::new(factors.iter().map(Vec::len).collect())?;
        let v = factors
            .iter()
            .fold(vec![ONE], |acc, f| kron_vec(&acc, f));
        Self::normalized(v, dims)
    }

    /// Computational basis state |i_0 i_1 ..>.
    pub fn basis(dims: Dims, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.parties() || digits.iter().zip(dims.as_slice()).any(|(i, d)| i >= d)
        {
            return Err(Error::BadDim(format!("basis label {digits:?}")));
        }
        let mut v = vec![ZERO; dims.total()];
        v[dims.flat(digits)] = ONE;
        Self::new(v, dims)
    }

    pub fn vec(&self) -> &[C64] {
        &self.vec
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(CMatrix::projector(&self.vec), self.dims.clone())
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<CMatrix> {
        // Contracting the vector directly avoids the full projector.
        let keep = self.dims.check_subset(keep)?;
        if keep.is_empty() {
            return Err(Error::BadPartition("nothing to keep".into()));
        }
        let traced: Vec<usize> = (0..self.dims.parties())
            .filter(|k| !keep.contains(k))
            .collect();
        let perm: Vec<usize> = keep.iter().chain(&traced).copied().collect();
        let v = crate::linalg::permute_vector(&self.vec, &self.dims, &perm)?;
        let nk = self.dims.select(&keep).total();
        let nt = self.dims.total() / nk;
        Ok(CMatrix::from_fn(nk, nk, |i, j| {
            (0..nt).map(|t| v[i * nt + t] * v[j * nt + t].conj()).sum()
        }))
    }

    /// |<self|other>|^2
    pub fn fidelity_with(&self, other: &PureState) -> f64 {
        crate::linalg::inner(&self.vec, &other.vec).norm_sqr()
    }

    /// Requires exactly two parties.
    pub fn check_bipartite(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            &[a, b] => Ok((a, b)),
            other => Err(Error::BadPartition(format!(
                "expected a bipartite state, got dims {other:?}"
            ))),
        }
    }
}

/// A state together with its exactly known concurrence.
#[derive(Clone, Debug)]
pub struct KnownConcurrence {
    pub state: DensityMatrix,
    pub concurrence: f64,
}

/// (1/√d) Σ_i |ii>
pub fn psi_plus(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::BadDim(format!("psi_plus needs d >= 2, got {d}")));
    }
    let s = 1.0 / (d as f64).sqrt();
    let v = crate::linalg::maximally_entangled_unnormalized(d)
        .into_iter()
        .map(|z| z * s)
        .collect();
    PureState::new(v, Dims::bipartite(d))
}

/// The four Bell vectors in the order ψ+, ψ−, φ+, φ−, with
/// ψ± = (|00> ± |11>)/√2 and φ± = (|01> ± |10>)/√2.
pub fn bell_basis() -> [Vec<C64>; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |a: f64, b: f64, c: f64, d: f64| {
        vec![
            C64::new(a * h, 0.0),
            C64::new(b * h, 0.0),
            C64::new(c * h, 0.0),
            C64::new(d * h, 0.0),
        ]
    };
    [
        c(1.0, 0.0, 0.0, 1.0),
        c(1.0, 0.0, 0.0, -1.0),
        c(0.0, 1.0, 1.0, 0.0),
        c(0.0, 1.0, -1.0, 0.0),
    ]
}

/// Bell-diagonal two-qubit state. Weights are sorted descending internally,
/// so the largest weight always sits on ψ+; concurrence is max{0, 2 p_max − 1}.
pub fn bell_diagonal(weights: [f64; 4]) -> Result<KnownConcurrence> {
    check_probabilities(&weights)?;
    let mut p = weights;
    p.sort_by(|a, b| b.total_cmp(a));
    let mut m = CMatrix::zeros(4, 4);
    for (w, v) in p.iter().zip(bell_basis()) {
        m += &CMatrix::projector(&v).scale_real(*w);
    }
    Ok(KnownConcurrence {
        state: DensityMatrix::from_parts(m, Dims::bipartite(2)),
        concurrence: (2.0 * p[0] - 1.0).max(0.0),
    })
}

/// Isotropic state ((1−f)/(d²−1))(1 − P+) + f P+ with concurrence
/// √(2d/(d−1)) (f − 1/d) for f > 1/d and 0 otherwise.
pub fn isotropic(d: usize, f: f64) -> Result<KnownConcurrence> {
    if d < 2 {
        return Err(Error::BadDim(format!("isotropic state needs d >= 2, got {d}")));
    }
    if !(0.0..=1.0).contains(&f) || f.is_nan() {
        return Err(Error::BadFidelity(f));
    }
    let n = d * d;
    let pplus = psi_plus(d)?.density().into_mat();
    let rest = &CMatrix::identity(n) - &pplus;
    let m = &rest.scale_real((1.0 - f) / (n as f64 - 1.0)) + &pplus.scale_real(f);
    let df = d as f64;
    let concurrence = if f <= 1.0 / df {
        0.0
    } else {
        (2.0 * df / (df - 1.0)).sqrt() * (f - 1.0 / df)
    };
    Ok(KnownConcurrence {
        state: DensityMatrix::from_parts(m, Dims::bipartite(d)),
        concurrence,
    })
}

/// (|0..0> + |1..1>)/√2 on N qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::BadDim(format!("GHZ needs N >= 2, got {n}")));
    }
    let dims = Dims::uniform(2, n);
    let mut v = vec![ZERO; dims.total()];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    v[0] = C64::new(h, 0.0);
    v[dims.total() - 1] = C64::new(h, 0.0);
    PureState::new(v, dims)
}

pub fn haar_pure(dims: &Dims, seed: u64) -> PureState {
    haar_pure_with(dims, &mut seeded(seed))
}

pub fn haar_pure_with<R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> PureState {
    PureState::from_unit(haar_vector(dims.total(), rng), dims.clone())
}

/// GG^†/Tr(GG^†) for a d×rank complex Gaussian G.
pub fn ginibre_mixed(dims: &Dims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    ginibre_mixed_with(dims, rank, &mut seeded(seed))
}

pub fn ginibre_mixed_with<R: Rng + ?Sized>(
    dims: &Dims,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if rank == 0 {
        return Err(Error::BadDim("Ginibre rank must be >= 1".into()));
    }
    let g = ginibre(dims.total(), rank, rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    Ok(DensityMatrix::from_parts(
        m.scale_real(1.0 / tr).hermitian_part(),
        dims.clone(),
    ))
}

/// Random separable state Σ_i q_i σ_A^(i) ⊗ σ_B^(i) ⊗ .. with Ginibre factors.
pub fn random_separable<R: Rng + ?Sized>(dims: &Dims, terms: usize, rng: &mut R) -> DensityMatrix {
    let n = dims.total();
    let weights: Vec<f64> = (0..terms.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut m = CMatrix::zeros(n, n);
    for w in weights {
        let term = dims.as_slice().iter().fold(CMatrix::identity(1), |acc, &d| {
            let rank = rng.random_range(1..=d);
            let local = ginibre_mixed_with(&Dims::uniform(d, 1), rank, rng).expect("rank >= 1");
            acc.kron(local.mat())
        });
        m += &term.scale_real(w / total);
    }
    DensityMatrix::from_parts(m, dims.clone())
}

/// Random product state |a>|b>.. with Haar-random local vectors.
pub fn random_product_pure<R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> PureState {
    let factors: Vec<Vec<C64>> = dims
        .as_slice()
        .iter()
        .map(|&d| haar_vector(d, rng))
        .collect();
    PureState::product(&factors).expect("nonzero factors")
}

/// Random pure state of Schmidt rank at most `rank` on d ⊗ d.
pub fn random_schmidt_rank<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<PureState> {
    if rank == 0 || rank > d {
        return Err(Error::BadDim(format!("Schmidt rank {rank} for d={d}")));
    }
    let a = crate::random::haar_unitary(d, rng);
    let b = crate::random::haar_unitary(d, rng);
    let coeffs: Vec<f64> = (0..rank).map(|_| complex_gaussian(rng).norm() + 0.05).collect();
    let mut v = vec![ZERO; d * d];
    for (k, c) in coeffs.iter().enumerate() {
        let ua = a.column(k);
        let ub = b.column(k);
        for i in 0..d {
            for j in 0..d {
                v[i * d + j] += ua[i] * ub[j] * *c;
            }
        }
    }
    PureState::normalized(v, Dims::bipartite(d))
}

/// Exact two-qubit concurrence max{0, λ1 − λ2 − λ3 − λ4}, where λ_i are the
/// square roots of the eigenvalues of √ρ ρ̃ √ρ and ρ̃ = (σy⊗σy) ρ* (σy⊗σy).
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(Error::BadDim(format!(
            "Wootters concurrence needs dims [2, 2], got {:?}",
            rho.dims().as_slice()
        )));
    }
    let sy = CMatrix::from_vec(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO])?;
    let yy = sy.kron(&sy);
    let tilde = yy.matmul(&rho.mat().conj()).matmul(&yy);
    // √ρ ρ̃ √ρ and M^† ρ̃ M share their nonzero spectrum when ρ = M M^†.
    let m = psd_factor(rho.mat())?;
    let r = m.adjoint().matmul(&tilde).matmul(&m).hermitian_part();
    let mut lambdas: Vec<f64> = eigenvalues(&r)?.iter().map(|&x| x.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    lambdas.resize(4, 0.0);
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

impl PureState {
    pub(crate) fn from_unit(vec: Vec<C64>, dims: Dims) -> Self {
        debug_assert!((vec_norm(&vec) - 1.0).abs() < 1e-10);
        Self { vec, dims }
    }
}

fn check_probabilities(p: &[f64]) -> Result<()> {
    if p.iter().any(|&x| x.is_nan() || x < 0.0) {
        return Err(Error::BadProbabilities(format!("negative entry in {p:?}")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-10 {
        return Err(Error::BadProbabilities(format!("entries sum to {s}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_plus_two_qubits() {
        let s = psi_plus(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.vec()[0] - h).norm() < 1e-15);
        assert!((s.vec()[3] - h).norm() < 1e-15);
        assert_eq!(s.vec()[1], ZERO);
        let ra = s.reduced(&[0]).unwrap();
        assert!(ra.max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
        assert!(matches!(psi_plus(1), Err(Error::BadDim(_))));
    }

    #[test]
    fn bell_diagonal_closed_forms() {
        let pure = bell_diagonal([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(pure.state.mat().max_abs_diff(psi_plus(2).unwrap().density().mat()) < 1e-15);
        assert_eq!(pure.concurrence, 1.0);
        assert_eq!(bell_diagonal([0.75, 0.25, 0.0, 0.0]).unwrap().concurrence, 0.5);
        let mixed = bell_diagonal([0.25; 4]).unwrap();
        assert!(mixed.state.mat().max_abs_diff(&CMatrix::identity(4).scale_real(0.25)) < 1e-15);
        assert_eq!(mixed.concurrence, 0.0);
        // sorted internally
        let shuffled = bell_diagonal([0.1, 0.7, 0.2, 0.0]).unwrap();
        assert!((shuffled.concurrence - 0.4).abs() < 1e-15);
        assert!(matches!(
            bell_diagonal([0.5, 0.6, 0.0, -0.1]),
            Err(Error::BadProbabilities(_))
        ));
    }

    #[test]
    fn isotropic_closed_forms() {
        assert_eq!(isotropic(3, 1.0 / 3.0).unwrap().concurrence, 0.0);
        assert!((isotropic(2, 1.0).unwrap().concurrence - 1.0).abs() < 1e-15);
        let mm = isotropic(3, 1.0 / 9.0).unwrap();
        assert!(mm.state.mat().max_abs_diff(&CMatrix::identity(9).scale_real(1.0 / 9.0)) < 1e-15);
        assert_eq!(mm.concurrence, 0.0);
        assert!(matches!(isotropic(3, 1.2), Err(Error::BadFidelity(_))));
        for d in 2..6 {
            let full = isotropic(d, 1.0).unwrap().concurrence;
            let pure = (2.0 * (d as f64 - 1.0) / d as f64).sqrt();
            assert!((full - pure).abs() < 1e-14);
        }
    }

    #[test]
    fn ginibre_rank_one_is_pure() {
        let rho = ginibre_mixed(&Dims::uniform(3, 1), 1, 1).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn wootters_reference_values() {
        let bd = bell_diagonal([0.75, 0.25, 0.0, 0.0]).unwrap();
        assert!((wootters_concurrence(&bd.state).unwrap() - 0.5).abs() < 1e-10);
        let p = psi_plus(2).unwrap().density();
        assert!((wootters_concurrence(&p).unwrap() - 1.0).abs() < 1e-10);
        let prod = random_product_pure(&Dims::bipartite(2), &mut seeded(4)).density();
        assert!(wootters_concurrence(&prod).unwrap() < 1e-7);
        let bad = isotropic(3, 0.5).unwrap().state;
        assert!(matches!(wootters_concurrence(&bad), Err(Error::BadDim(_))));
    }

    #[test]
    fn density_matrix_validation_names_invariant() {
        let m = CMatrix::identity(4).scale_real(0.9 / 4.0);
        let err = DensityMatrix::new(m, Dims::bipartite(2)).unwrap_err();
        assert!(err.to_string().contains("trace"));
        let neg = CMatrix::diag_real(&[1.5, -0.5]);
        let err = DensityMatrix::new(neg, Dims::uniform(2, 1)).unwrap_err();
        assert!(err.to_string().contains("positive"));
    }
}
