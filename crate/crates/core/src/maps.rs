//! Linear maps on matrices, stored by their normalized Choi matrix
//! `J = (I ⊗ Λ)(P+) = (1/d_in) Σ_ij |i><j| ⊗ Λ(|i><j|)`.
//!
//! Row `(i, k)` of `J` is the flat index `i * d_out + k`. Kraus operators,
//! `λ_max` and `ξ = d_in λ_max` are derived from the spectrum of `J`, which is
//! computed once on first use.

use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, partial_trace, trace_and_pad, unitarity_deviation, CMatrix,
    Dims, C64, ONE, ZERO,
};
use crate::random::{ginibre, seeded};

/// Choi PSD tolerance for complete positivity checks.
pub const CP_TOL: f64 = 1e-9;
/// Choi eigenvalues at or below this magnitude produce no Kraus operator.
pub const KRAUS_CUTOFF: f64 = 1e-12;
pub const CHANNEL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
struct Spectral {
    kraus_pos: Vec<CMatrix>,
    kraus_neg: Vec<CMatrix>,
    lambda_max: f64,
    lambda_min: f64,
}

/// Hermiticity-preserving linear map `M_{d_in} -> M_{d_out}`.
#[derive(Clone, Debug)]
pub struct LinearMapRep {
    in_dim: usize,
    out_dim: usize,
    choi: CMatrix,
    spectral: OnceLock<std::result::Result<Spectral, Error>>,
}

impl LinearMapRep {
    /// The Choi matrix must be Hermitian (the map preserves Hermiticity).
    pub fn from_choi(in_dim: usize, out_dim: usize, choi: CMatrix) -> Result<Self> {
        let n = in_dim * out_dim;
        if choi.rows() != n || choi.cols() != n || n == 0 {
            return Err(Error::DimMismatch(format!(
                "Choi matrix {}x{} for a map {in_dim} -> {out_dim}",
                choi.rows(),
                choi.cols()
            )));
        }
        choi.check_hermitian()?;
        Ok(Self {
            in_dim,
            out_dim,
            choi: choi.hermitian_part(),
            spectral: OnceLock::new(),
        })
    }

    /// Builds the Choi matrix from the images of the matrix units `|i><j|`.
    pub fn from_fn(in_dim: usize, out_dim: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Result<Self> {
        let mut choi = CMatrix::zeros(in_dim * out_dim, in_dim * out_dim);
        let s = 1.0 / in_dim as f64;
        for i in 0..in_dim {
            for j in 0..in_dim {
                let mut e = CMatrix::zeros(in_dim, in_dim);
                e[(i, j)] = ONE;
                let img = f(&e);
                if img.rows() != out_dim || img.cols() != out_dim {
                    return Err(Error::DimMismatch("map image has the wrong size".into()));
                }
                for k in 0..out_dim {
                    for l in 0..out_dim {
                        choi[(i * out_dim + k, j * out_dim + l)] = img[(k, l)] * s;
                    }
                }
            }
        }
        Self::from_choi(in_dim, out_dim, choi)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    fn spectral(&self) -> Result<&Spectral> {
        self.spectral
            .get_or_init(|| {
                let spec = hermitian_eig(&self.choi)?;
                let (mut pos, mut neg) = (Vec::new(), Vec::new());
                for (a, &lam) in spec.values.iter().enumerate() {
                    if lam.abs() <= KRAUS_CUTOFF {
                        continue;
                    }
                    let v = spec.vector(a);
                    let s = (self.in_dim as f64 * lam.abs()).sqrt();
                    let k = CMatrix::from_fn(self.out_dim, self.in_dim, |k, i| {
                        v[i * self.out_dim + k] * s
                    });
                    if lam > 0.0 {
                        pos.push(k);
                    } else {
                        neg.push(k);
                    }
                }
                Ok(Spectral {
                    kraus_pos: pos,
                    kraus_neg: neg,
                    lambda_max: spec.max(),
                    lambda_min: spec.min(),
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Largest eigenvalue of the Choi matrix.
    pub fn lambda_max(&self) -> Result<f64> {
        Ok(self.spectral()?.lambda_max)
    }

    pub fn lambda_min(&self) -> Result<f64> {
        Ok(self.spectral()?.lambda_min)
    }

    /// ξ = d_in λ_max
    pub fn xi(&self) -> Result<f64> {
        Ok(self.in_dim as f64 * self.lambda_max()?)
    }

    /// Kraus operators of the positive and negative Choi eigenspaces, so that
    /// Λ(X) = Σ K X K^† (pos) − Σ K X K^† (neg).
    pub fn kraus(&self) -> Result<(&[CMatrix], &[CMatrix])> {
        let s = self.spectral()?;
        Ok((&s.kraus_pos, &s.kraus_neg))
    }

    /// The completely positive part Λ+ built from the positive Choi
    /// eigenspace, so that Λ = Λ+ − Λ−.
    pub fn positive_part(&self) -> Result<LinearMapRep> {
        let (pos, _) = self.kraus()?;
        let (din, dout) = (self.in_dim, self.out_dim);
        let choi = CMatrix::from_fn(din * dout, din * dout, |r, c| {
            let (i, k) = (r / dout, r % dout);
            let (j, l) = (c / dout, c % dout);
            pos.iter().map(|kr| kr[(k, i)] * kr[(l, j)].conj()).sum::<C64>() / din as f64
        });
        LinearMapRep::from_choi(din, dout, choi.hermitian_part())
    }

    pub fn is_completely_positive(&self) -> Result<bool> {
        Ok(self.lambda_min()? >= -CP_TOL)
    }

    /// Deviation of Tr_out J from 1/d_in.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let d = Dims::new(vec![self.in_dim, self.out_dim]).expect("positive dims");
        let t = partial_trace(&self.choi, &d, &[0]).expect("valid partition");
        t.max_abs_diff(&CMatrix::identity(self.in_dim).scale_real(1.0 / self.in_dim as f64))
            * self.in_dim as f64
    }

    /// Completely positive and trace preserving, both to 1e-8.
    pub fn check_channel(&self) -> Result<()> {
        let min = self.lambda_min()?;
        if min < -CP_TOL {
            return Err(Error::NotAChannel(format!(
                "Choi matrix has eigenvalue {min:.3e}"
            )));
        }
        let dev = self.trace_preservation_deviation();
        if dev > CHANNEL_TOL {
            return Err(Error::NotAChannel(format!(
                "not trace preserving (deviation {dev:.3e})"
            )));
        }
        Ok(())
    }

    /// Λ(X)_kl = d_in Σ_ij X_ij J[(i,k),(j,l)]
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.rows() != self.in_dim || x.cols() != self.in_dim {
            return Err(Error::DimMismatch(format!(
                "map input is {}x{}, expected {}",
                x.rows(),
                x.cols(),
                self.in_dim
            )));
        }
        let (din, dout) = (self.in_dim, self.out_dim);
        let mut out = CMatrix::zeros(dout, dout);
        for i in 0..din {
            for j in 0..din {
                let xij = x[(i, j)];
                if xij == ZERO {
                    continue;
                }
                for k in 0..dout {
                    let row = self.choi.row(i * dout + k);
                    for l in 0..dout {
                        out[(k, l)] += xij * row[j * dout + l];
                    }
                }
            }
        }
        Ok(out.scale_real(din as f64))
    }

    /// Same result as [`apply`](Self::apply), through the Kraus form.
    pub fn apply_kraus(&self, x: &CMatrix) -> Result<CMatrix> {
        let (pos, neg) = self.kraus()?;
        let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
        for k in pos {
            out += &k.matmul(x).matmul(&k.adjoint());
        }
        for k in neg {
            out = &out - &k.matmul(x).matmul(&k.adjoint());
        }
        Ok(out)
    }

    /// Λ^† with Tr(X^† Λ(Y)) = Tr(Λ^†(X)^† Y).
    pub fn dual(&self) -> LinearMapRep {
        let (din, dout) = (self.in_dim, self.out_dim);
        // J'[(k,i),(l,j)] = (d_in/d_out) conj(J[(i,k),(j,l)])
        let s = din as f64 / dout as f64;
        let choi = CMatrix::from_fn(din * dout, din * dout, |r, c| {
            let (k, i) = (r / din, r % din);
            let (l, j) = (c / din, c % din);
            self.choi[(i * dout + k, j * dout + l)].conj() * s
        });
        LinearMapRep::from_choi(dout, din, choi).expect("conjugated Choi stays Hermitian")
    }

    /// Applies the map to one tensor factor of `m`, identity elsewhere. The
    /// result has `dims` with that factor's dimension replaced by `out_dim`.
    pub fn apply_to_factor(&self, m: &CMatrix, dims: &Dims, party: usize) -> Result<(CMatrix, Dims)> {
        dims.check_matrix(m)?;
        if party >= dims.parties() {
            return Err(Error::BadPartition(format!("no subsystem {party}")));
        }
        if dims.local(party) != self.in_dim {
            return Err(Error::DimMismatch(format!(
                "map acts on dimension {}, subsystem {party} has {}",
                self.in_dim,
                dims.local(party)
            )));
        }
        // Move the target factor last, act blockwise, move it back.
        let n = dims.parties();
        let perm: Vec<usize> = (0..n).filter(|&k| k != party).chain([party]).collect();
        let moved = crate::linalg::permute_subsystems(m, dims, &perm)?;
        let rest = dims.total() / self.in_dim;
        let (din, dout) = (self.in_dim, self.out_dim);
        let mut out = CMatrix::zeros(rest * dout, rest * dout);
        for a in 0..rest {
            for b in 0..rest {
                for i in 0..din {
                    for j in 0..din {
                        let x = moved[(a * din + i, b * din + j)];
                        if x == ZERO {
                            continue;
                        }
                        for k in 0..dout {
                            let row = self.choi.row(i * dout + k);
                            for l in 0..dout {
                                out[(a * dout + k, b * dout + l)] += x * row[j * dout + l];
                            }
                        }
                    }
                }
            }
        }
        let out = out.scale_real(din as f64);
        let mut new_dims = dims.as_slice().to_vec();
        new_dims[party] = dout;
        let new_dims = Dims::new(new_dims)?;
        let moved_dims = new_dims.select(&perm);
        let mut inverse = vec![0; n];
        for (pos, &k) in perm.iter().enumerate() {
            inverse[k] = pos;
        }
        let back = crate::linalg::permute_subsystems(&out, &moved_dims, &inverse)?;
        Ok((back, new_dims))
    }

    /// (I ⊗ Λ)(ρ) for `side = 1`, (Λ ⊗ I)(ρ) for `side = 0`, on a bipartite
    /// operator; the output dimension must equal the input dimension.
    pub fn apply_one_side(&self, m: &CMatrix, dims: &Dims, side: usize) -> Result<CMatrix> {
        if dims.parties() != 2 {
            return Err(Error::BadPartition("expected two subsystems".into()));
        }
        Ok(self.apply_to_factor(m, dims, side)?.0)
    }

    /// ξ Λ_Tr − Λ
    pub fn complement(&self, xi: f64) -> LinearMapRep {
        let n = self.choi.rows();
        let choi = &CMatrix::identity(n).scale_real(xi / self.in_dim as f64) - &self.choi;
        LinearMapRep::from_choi(self.in_dim, self.out_dim, choi).expect("Hermitian")
    }

    pub fn scaled(&self, s: f64) -> LinearMapRep {
        LinearMapRep::from_choi(self.in_dim, self.out_dim, self.choi.scale_real(s)).expect("Hermitian")
    }
}

/// Λ = ξ Λ_Tr − Λ₂ with Λ₂ completely positive.
#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    pub xi: f64,
    pub lambda2: LinearMapRep,
}

pub fn canonical_decomposition(map: &LinearMapRep) -> Result<CanonicalDecomposition> {
    let xi = map.xi()?;
    let lambda2 = map.complement(xi);
    let min = lambda2.lambda_min()?;
    if min < -CP_TOL {
        return Err(Error::DecompositionFailed(format!(
            "ξΛ_Tr − Λ has Choi eigenvalue {min:.3e}"
        )));
    }
    let rebuilt = &map.complement(xi).complement(xi).choi;
    let err = rebuilt.max_abs_diff(map.choi());
    if err > 1e-10 {
        return Err(Error::DecompositionFailed(format!("reconstruction error {err:.3e}")));
    }
    Ok(CanonicalDecomposition { xi, lambda2 })
}

pub fn identity_map(d: usize) -> Result<LinearMapRep> {
    check_dim(d, 1)?;
    LinearMapRep::from_fn(d, d, |x| x.clone())
}

/// Λ_Tr(X) = Tr(X) 1_d
pub fn trace_map(d: usize) -> Result<LinearMapRep> {
    check_dim(d, 1)?;
    LinearMapRep::from_fn(d, d, |x| CMatrix::identity(d).scale(x.trace()))
}

/// X ↦ Tr(X) 1_d / d
pub fn completely_depolarizing(d: usize) -> Result<LinearMapRep> {
    check_dim(d, 1)?;
    LinearMapRep::from_fn(d, d, |x| CMatrix::identity(d).scale(x.trace() / d as f64))
}

/// R(X) = Tr(X) 1_d − X
pub fn reduction_map(d: usize) -> Result<LinearMapRep> {
    check_dim(d, 2)?;
    LinearMapRep::from_fn(d, d, |x| &CMatrix::identity(d).scale(x.trace()) - x)
}

/// T_U(X) = U X^T U^†
pub fn transposition_map(u: &CMatrix) -> Result<LinearMapRep> {
    if !u.is_square() {
        return Err(Error::NotUnitary { deviation: f64::INFINITY });
    }
    let dev = unitarity_deviation(u);
    if dev > 1e-10 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let ud = u.adjoint();
    LinearMapRep::from_fn(u.rows(), u.rows(), |x| u.matmul(&x.transpose()).matmul(&ud))
}

/// Plain transposition X ↦ X^T.
pub fn transpose_map(d: usize) -> Result<LinearMapRep> {
    check_dim(d, 1)?;
    transposition_map(&CMatrix::identity(d))
}

/// Antisymmetric unitary with +1 on the upper half of the anti-diagonal and
/// −1 on the lower half. For d = 4: V[0,3] = V[1,2] = 1, V[2,1] = V[3,0] = −1.
pub fn default_breuer_unitary(d: usize) -> Result<CMatrix> {
    if d % 2 == 1 {
        return Err(Error::OddDim(d));
    }
    check_dim(d, 2)?;
    let mut v = CMatrix::zeros(d, d);
    for i in 0..d {
        v[(i, d - 1 - i)] = C64::new(if i < d / 2 { 1.0 } else { -1.0 }, 0.0);
    }
    Ok(v)
}

/// Λ_V(X) = Tr(X) 1_d − X − V X^T V^† for an antisymmetric unitary V.
pub fn breuer_map(v: &CMatrix) -> Result<LinearMapRep> {
    let d = v.rows();
    if !v.is_square() {
        return Err(Error::NotAntisymmetricUnitary);
    }
    if d % 2 == 1 {
        return Err(Error::OddDim(d));
    }
    if d < 4 {
        return Err(Error::BadDim(format!("Breuer map needs d >= 4, got {d}")));
    }
    let antisym = (v + &v.transpose()).max_abs();
    if antisym > 1e-10 || unitarity_deviation(v) > 1e-10 {
        return Err(Error::NotAntisymmetricUnitary);
    }
    let vd = v.adjoint();
    LinearMapRep::from_fn(d, d, |x| {
        let r = &CMatrix::identity(d).scale(x.trace()) - x;
        &r - &v.matmul(&x.transpose()).matmul(&vd)
    })
}

/// Channel M_{Π dims} → M_{Π dims[keep]} tracing out the other factors.
pub fn partial_trace_channel(dims: &Dims, keep: &[usize]) -> Result<LinearMapRep> {
    let keep = dims.check_subset(keep)?;
    let out = dims.select(&keep).total();
    LinearMapRep::from_fn(dims.total(), out, |x| {
        partial_trace(x, dims, &keep).expect("validated partition")
    })
}

/// R^(N)(ρ) = Σ_S Tr_S(ρ) ⊗ 1_S − (2^N − 2) ρ over nonempty proper subsets S.
pub fn multipartite_reduction(dims: &Dims) -> Result<LinearMapRep> {
    if dims.parties() < 2 {
        return Err(Error::BadPartition("R^(N) needs at least two parties".into()));
    }
    let subsets = dims.proper_subsets();
    let weight = subsets.len() as f64;
    let n = dims.total();
    LinearMapRep::from_fn(n, n, |x| {
        let mut acc = x.scale_real(-weight);
        for s in &subsets {
            acc += &trace_and_pad(x, dims, s).expect("valid subsets");
        }
        acc
    })
}

/// Random channel from a Ginibre Choi matrix, normalized to be trace preserving.
pub fn random_channel(in_dim: usize, out_dim: usize, seed: u64) -> Result<LinearMapRep> {
    random_channel_with(in_dim, out_dim, &mut seeded(seed))
}

pub fn random_channel_with<R: Rng + ?Sized>(
    in_dim: usize,
    out_dim: usize,
    rng: &mut R,
) -> Result<LinearMapRep> {
    let n = in_dim * out_dim;
    let g = ginibre(n, n, rng);
    let raw = g.matmul(&g.adjoint()).hermitian_part();
    let d = Dims::new(vec![in_dim, out_dim])?;
    let t = partial_trace(&raw, &d, &[0])?;
    let inv_sqrt = hermitian_eig(&t)?.apply_fn(|x| 1.0 / x.max(1e-300).sqrt());
    let m = inv_sqrt.kron(&CMatrix::identity(out_dim));
    let choi = m.matmul(&raw).matmul(&m).scale_real(1.0 / in_dim as f64);
    LinearMapRep::from_choi(in_dim, out_dim, choi.hermitian_part())
}

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    /// Requires Σ K^†K = 1 to 1e-8.
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::NotAChannel("no Kraus operators".into()))?;
        let (dout, din) = (first.rows(), first.cols());
        if ops.iter().any(|k| k.rows() != dout || k.cols() != din) {
            return Err(Error::NotAChannel("Kraus operators differ in shape".into()));
        }
        let mut s = CMatrix::zeros(din, din);
        for k in &ops {
            s += &k.adjoint().matmul(k);
        }
        let dev = s.max_abs_diff(&CMatrix::identity(din));
        if dev > CHANNEL_TOL {
            return Err(Error::NotAChannel(format!(
                "Σ K^†K deviates from identity by {dev:.3e}"
            )));
        }
        Ok(Self { ops })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let (dout, _) = (self.ops[0].rows(), self.ops[0].cols());
        self.ops
            .iter()
            .fold(CMatrix::zeros(dout, dout), |acc, k| {
                &acc + &k.matmul(x).matmul(&k.adjoint())
            })
    }

    pub fn to_map(&self) -> Result<LinearMapRep> {
        let (dout, din) = (self.ops[0].rows(), self.ops[0].cols());
        LinearMapRep::from_fn(din, dout, |x| self.apply(x))
    }
}

impl TryFrom<&LinearMapRep> for KrausChannel {
    type Error = Error;

    fn try_from(map: &LinearMapRep) -> Result<Self> {
        map.check_channel()?;
        let (pos, _) = map.kraus()?;
        Self::new(pos.to_vec())
    }
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::BadDim(format!("map dimension {d} below {min}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_transpose;
    use crate::states::{ginibre_mixed, psi_plus};

    fn pplus(d: usize) -> CMatrix {
        psi_plus(d).unwrap().density().into_mat()
    }

    #[test]
    fn reduction_examples() {
        let r = reduction_map(3).unwrap();
        let out = r.apply(&CMatrix::identity(3)).unwrap();
        assert!(out.max_abs_diff(&CMatrix::identity(3).scale_real(2.0)) < 1e-14);
        let r2 = reduction_map(2).unwrap();
        let out = r2.apply(&CMatrix::diag_real(&[1.0, 0.0])).unwrap();
        assert!(out.max_abs_diff(&CMatrix::diag_real(&[0.0, 1.0])) < 1e-14);
        for d in 2..5 {
            let r = reduction_map(d).unwrap();
            let expect = &CMatrix::identity(d * d).scale_real(1.0 / d as f64) - &pplus(d);
            assert!(r.choi().max_abs_diff(&expect) < 1e-14);
            assert!((r.lambda_max().unwrap() - 1.0 / d as f64).abs() < 1e-12);
            assert!((r.xi().unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn choi_and_kraus_agree() {
        for map in [
            reduction_map(3).unwrap(),
            transpose_map(3).unwrap(),
            breuer_map(&default_breuer_unitary(4).unwrap()).unwrap(),
            random_channel(2, 3, 5).unwrap(),
        ] {
            let x = ginibre(map.in_dim(), map.in_dim(), &mut seeded(9));
            let a = map.apply(&x).unwrap();
            let b = map.apply_kraus(&x).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-10);
        }
    }

    #[test]
    fn plain_transposition_matches_partial_transpose() {
        let rho = ginibre_mixed(&Dims::bipartite(3), 9, 2).unwrap();
        let t = transpose_map(3).unwrap();
        let a = t.apply_one_side(rho.mat(), rho.dims(), 1).unwrap();
        let b = partial_transpose(rho.mat(), rho.dims(), &[1]).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn trace_map_on_one_side() {
        let rho = ginibre_mixed(&Dims::bipartite(2), 4, 3).unwrap();
        let out = trace_map(2).unwrap().apply_one_side(rho.mat(), rho.dims(), 1).unwrap();
        let expect = rho.reduce(&[0]).unwrap().mat().kron(&CMatrix::identity(2));
        assert!(out.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn dual_identities() {
        let map = random_channel(2, 3, 1).unwrap();
        let dual = map.dual();
        assert!(dual.dual().choi().max_abs_diff(map.choi()) < 1e-12);
        let mut rng = seeded(4);
        for _ in 0..20 {
            let x = ginibre(3, 3, &mut rng);
            let y = ginibre(2, 2, &mut rng);
            let lhs = x.adjoint().matmul(&map.apply(&y).unwrap()).trace();
            let rhs = dual.apply(&x).unwrap().adjoint().matmul(&y).trace();
            assert!((lhs - rhs).norm() < 1e-10);
        }
        // dual of a channel is unital
        let u = dual.apply(&CMatrix::identity(3)).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(2)) < 1e-10);
        let tr = trace_map(3).unwrap();
        assert!(tr.dual().choi().max_abs_diff(tr.choi()) < 1e-14);
    }

    #[test]
    fn canonical_decompositions() {
        let r = canonical_decomposition(&reduction_map(3).unwrap()).unwrap();
        assert!((r.xi - 1.0).abs() < 1e-12);
        assert!(r.lambda2.choi().max_abs_diff(identity_map(3).unwrap().choi()) < 1e-12);
        let tr = canonical_decomposition(&trace_map(3).unwrap()).unwrap();
        assert!((tr.xi - 1.0).abs() < 1e-12);
        assert!(tr.lambda2.choi().max_abs() < 1e-12);
        let t = canonical_decomposition(&transpose_map(4).unwrap()).unwrap();
        assert!((t.xi - 1.0).abs() < 1e-12);
        assert!(t.lambda2.is_completely_positive().unwrap());
    }

    #[test]
    fn breuer_validation() {
        assert!(matches!(breuer_map(&CMatrix::identity(3)), Err(Error::OddDim(3))));
        assert!(matches!(
            breuer_map(&CMatrix::identity(4)),
            Err(Error::NotAntisymmetricUnitary)
        ));
        let v = default_breuer_unitary(4).unwrap();
        assert_eq!(v[(0, 3)], ONE);
        assert_eq!(v[(1, 2)], ONE);
        assert_eq!(v[(2, 1)], -ONE);
        assert_eq!(v[(3, 0)], -ONE);
        let out = breuer_map(&v).unwrap().apply(&CMatrix::identity(4)).unwrap();
        assert!(out.max_abs_diff(&CMatrix::identity(4).scale_real(2.0)) < 1e-14);
    }

    #[test]
    fn kraus_channel_round_trip() {
        let map = random_channel(3, 2, 8).unwrap();
        let k = KrausChannel::try_from(&map).unwrap();
        assert!(k.to_map().unwrap().choi().max_abs_diff(map.choi()) < 1e-10);
        assert!(KrausChannel::new(vec![CMatrix::identity(2).scale_real(0.5)]).is_err());
    }

    #[test]
    fn multipartite_reduction_two_parties() {
        let dims = Dims::bipartite(2);
        let rho = ginibre_mixed(&dims, 4, 6).unwrap();
        let out = multipartite_reduction(&dims).unwrap().apply(rho.mat()).unwrap();
        let ra = rho.reduce(&[0]).unwrap().mat().kron(&CMatrix::identity(2));
        let rb = CMatrix::identity(2).kron(rho.reduce(&[1]).unwrap().mat());
        let expect = &(&ra + &rb) - &rho.mat().scale_real(2.0);
        assert!(out.max_abs_diff(&expect) < 1e-13);
    }
}
