//! Collective observables on one or two copies of a system.
//!
//! Two-copy operators use the layout (system factors, then primed factors),
//! i.e. `A B A' B'` for a bipartite system. Per-party pair operators are
//! assembled in the interleaved layout `A A' B B'` and permuted back through
//! [`from_interleaved`].

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, kron_all, max_eigenvalue, permute_subsystems, CMatrix, Dims, ONE, ZERO,
};
use crate::maps::{breuer_map, canonical_decomposition, default_breuer_unitary, LinearMapRep};
use crate::states::DensityMatrix;

/// How the factors of an observable's space are grouped into copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyLayout {
    /// Acts on a single copy of the system.
    Single,
    /// System factors followed by the primed copy's factors.
    TwoCopy,
}

#[derive(Clone, Debug)]
pub struct Observable {
    mat: CMatrix,
    dims: Dims,
    layout: CopyLayout,
}

impl Observable {
    pub fn new(mat: CMatrix, dims: Dims, layout: CopyLayout) -> Result<Self> {
        dims.check_matrix(&mat)?;
        mat.check_hermitian()?;
        if layout == CopyLayout::TwoCopy && dims.parties() % 2 == 1 {
            return Err(Error::BadPartition("two-copy layout needs an even factor count".into()));
        }
        Ok(Self {
            mat: mat.hermitian_part(),
            dims,
            layout,
        })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn layout(&self) -> CopyLayout {
        self.layout
    }

    /// Dimension profile of one copy of the underlying system.
    pub fn system_dims(&self) -> Dims {
        match self.layout {
            CopyLayout::Single => self.dims.clone(),
            CopyLayout::TwoCopy => {
                let n = self.dims.parties() / 2;
                self.dims.select(&(0..n).collect::<Vec<_>>())
            }
        }
    }

    /// Tr(W ρ) for a single-copy observable.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if self.layout != CopyLayout::Single || rho.dims() != &self.dims {
            return Err(Error::DimMismatch("single-copy expectation".into()));
        }
        Ok(self.mat.trace_product(rho.mat()).re)
    }

    /// Tr(W ρ ⊗ σ) for a two-copy observable.
    pub fn expectation_pair(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
        let sys = self.system_dims();
        if self.layout != CopyLayout::TwoCopy || rho.dims() != &sys || sigma.dims() != &sys {
            return Err(Error::DimMismatch("two-copy expectation".into()));
        }
        Ok(pair_trace(&self.mat, rho.mat(), sigma.mat()))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        max_eigenvalue(&self.mat)
    }

    pub fn scaled(&self, s: f64) -> Observable {
        Observable {
            mat: self.mat.scale_real(s),
            dims: self.dims.clone(),
            layout: self.layout,
        }
    }
}

/// Tr(W (ρ ⊗ σ)) without forming ρ ⊗ σ.
fn pair_trace(w: &CMatrix, rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let n = rho.rows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            let row = w.row(i * n + k);
            for j in 0..n {
                let r = rho[(j, i)];
                if r == ZERO {
                    continue;
                }
                for l in 0..n {
                    acc += row[j * n + l] * r * sigma[(l, k)];
                }
            }
        }
    }
    acc.re
}

/// Swap V on d ⊗ d: V|ij> = |ji>.
pub fn swap_matrix(d: usize) -> CMatrix {
    let mut v = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(j * d + i, i * d + j)] = ONE;
        }
    }
    v
}

fn sym_matrix(d: usize) -> CMatrix {
    (&CMatrix::identity(d * d) + &swap_matrix(d)).scale_real(0.5)
}

fn antisym_matrix(d: usize) -> CMatrix {
    (&CMatrix::identity(d * d) - &swap_matrix(d)).scale_real(0.5)
}

fn check_local(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::BadDim(format!("local dimension {d} below 2")));
    }
    Ok(())
}

pub fn swap(d: usize) -> Result<Observable> {
    check_local(d)?;
    Observable::new(swap_matrix(d), Dims::bipartite(d), CopyLayout::TwoCopy)
}

/// (1 + V) / 2
pub fn sym_proj(d: usize) -> Result<Observable> {
    check_local(d)?;
    Observable::new(sym_matrix(d), Dims::bipartite(d), CopyLayout::TwoCopy)
}

/// (1 − V) / 2
pub fn antisym_proj(d: usize) -> Result<Observable> {
    check_local(d)?;
    Observable::new(antisym_matrix(d), Dims::bipartite(d), CopyLayout::TwoCopy)
}

/// Takes an operator in the interleaved layout `A1 A1' A2 A2' ..` to
/// `A1 A2 .. A1' A2' ..`.
pub fn from_interleaved(m: &CMatrix, system: &Dims) -> Result<CMatrix> {
    let n = system.parties();
    let interleaved = Dims::new(
        system
            .as_slice()
            .iter()
            .flat_map(|&d| [d, d])
            .collect(),
    )?;
    let perm: Vec<usize> = (0..n).map(|k| 2 * k).chain((0..n).map(|k| 2 * k + 1)).collect();
    permute_subsystems(m, &interleaved, &perm)
}

/// ⊗_i op_i with op_i acting on the pair (A_i, A_i'), in the two-copy layout.
pub fn pair_product(system: &Dims, ops: &[CMatrix]) -> Result<CMatrix> {
    if ops.len() != system.parties() {
        return Err(Error::DimMismatch("one pair operator per party".into()));
    }
    for (op, &d) in ops.iter().zip(system.as_slice()) {
        if op.rows() != d * d || !op.is_square() {
            return Err(Error::DimMismatch("pair operator size".into()));
        }
    }
    from_interleaved(&kron_all(ops), system)
}

/// Full-space swap of two copies of `system`.
pub fn swap_full(system: &Dims) -> Result<CMatrix> {
    let ops: Vec<CMatrix> = system.as_slice().iter().map(|&d| swap_matrix(d)).collect();
    pair_product(system, &ops)
}

/// (W1, W2) with W_r = 4(P−^{rr'} − P+^{rr'}) ⊗ P−^{ss'}, r ≠ s.
pub fn mb_witnesses(d: usize) -> Result<(Observable, Observable)> {
    check_local(d)?;
    let sys = Dims::bipartite(d);
    let diff = (&antisym_matrix(d) - &sym_matrix(d)).scale_real(4.0);
    let w1 = pair_product(&sys, &[diff.clone(), antisym_matrix(d)])?;
    let w2 = pair_product(&sys, &[antisym_matrix(d), diff])?;
    Ok((
        Observable::new(w1, sys.doubled(), CopyLayout::TwoCopy)?,
        Observable::new(w2, sys.doubled(), CopyLayout::TwoCopy)?,
    ))
}

/// (W̃1, W̃2) with W̃_r = 4 P−^{rr'} ⊗ 1^{ss'}.
pub fn dual_witnesses(d: usize) -> Result<(Observable, Observable)> {
    check_local(d)?;
    let sys = Dims::bipartite(d);
    let am = antisym_matrix(d).scale_real(4.0);
    let id = CMatrix::identity(d * d);
    let w1 = pair_product(&sys, &[am.clone(), id.clone()])?;
    let w2 = pair_product(&sys, &[id, am])?;
    Ok((
        Observable::new(w1, sys.doubled(), CopyLayout::TwoCopy)?,
        Observable::new(w2, sys.doubled(), CopyLayout::TwoCopy)?,
    ))
}

/// W^(N) = 4[P+ − ⊗_i P+^(i) − (1 − 2^{1−N}) P−] and
/// W̃^(N) = W^(N) + 8(1 − 2^{1−N}) P−, with P± = (1 ± V)/2 on the full space.
pub fn multipartite_witnesses(system: &Dims) -> Result<(Observable, Observable)> {
    let n = system.parties();
    if n < 2 {
        return Err(Error::BadPartition("need at least two parties".into()));
    }
    let total = system.total();
    let v = swap_full(system)?;
    let id = CMatrix::identity(total * total);
    let p_plus = (&id + &v).scale_real(0.5);
    let p_minus = (&id - &v).scale_real(0.5);
    let local: Vec<CMatrix> = system.as_slice().iter().map(|&d| sym_matrix(d)).collect();
    let prod = pair_product(system, &local)?;
    let c = 1.0 - 2f64.powi(1 - n as i32);
    let w = (&(&p_plus - &prod) - &p_minus.scale_real(c)).scale_real(4.0);
    let wt = &w + &p_minus.scale_real(8.0 * c);
    Ok((
        Observable::new(w, system.doubled(), CopyLayout::TwoCopy)?,
        Observable::new(wt, system.doubled(), CopyLayout::TwoCopy)?,
    ))
}

/// O_Λ with Tr(O_Λ ρ ⊗ σ) = Tr[(I ⊗ Λ)(ρ) σ]: the dual map applied to the B
/// factor of the first copy of the full swap.
pub fn o_lambda(map: &LinearMapRep, system: &Dims) -> Result<Observable> {
    if system.parties() != 2 {
        return Err(Error::DimMismatch("O_Λ needs a bipartite system".into()));
    }
    if map.in_dim() != system.local(1) || map.out_dim() != system.local(1) {
        return Err(Error::DimMismatch(format!(
            "map {} -> {} on subsystem of dimension {}",
            map.in_dim(),
            map.out_dim(),
            system.local(1)
        )));
    }
    let v = swap_full(system)?;
    let (o, _) = map.dual().apply_to_factor(&v, &system.doubled(), 1)?;
    Observable::new(o, system.doubled(), CopyLayout::TwoCopy)
}

/// 2^{|I'|} ⊗_{i∉I'} V_{ii'} ⊗_{i∈I'} P−_{ii'} for qubits. Its two-copy mean is
/// Tr[τ^{I'}(ρ) ρ] where τ is transposition followed by σ_y conjugation on the
/// parties in I'; on a qubit σ_y X^T σ_y = Tr(X) 1 − X.
pub fn o_tau(system: &Dims, flipped: &[usize]) -> Result<Observable> {
    if system.as_slice().iter().any(|&d| d != 2) {
        return Err(Error::NotQubits);
    }
    let flipped = system.check_subset(flipped)?;
    let ops: Vec<CMatrix> = (0..system.parties())
        .map(|k| {
            if flipped.contains(&k) {
                antisym_matrix(2).scale_real(2.0)
            } else {
                swap_matrix(2)
            }
        })
        .collect();
    Observable::new(pair_product(system, &ops)?, system.doubled(), CopyLayout::TwoCopy)
}

/// d (I ⊗ Λ_V)(|ref><ref|). With `reference = None` the reference is ψ+.
pub fn breuer_witness_with(v: &CMatrix, reference: Option<&[crate::linalg::C64]>) -> Result<Observable> {
    let d = v.rows();
    let map = breuer_map(v)?;
    let sys = Dims::bipartite(d);
    let refm = match reference {
        Some(r) => {
            if r.len() != d * d {
                return Err(Error::DimMismatch("reference vector length".into()));
            }
            CMatrix::projector(r)
        }
        None => crate::states::psi_plus(d)?.density().into_mat(),
    };
    let img = map.apply_one_side(&refm, &sys, 1)?;
    Observable::new(img.scale_real(d as f64), sys, CopyLayout::Single)
}

/// 𝒲_V = d (I ⊗ Λ_V)(P+) with the default antisymmetric unitary.
pub fn breuer_witness(d: usize) -> Result<Observable> {
    breuer_witness_with(&default_breuer_unitary(d)?, None)
}

/// Scale choice for W = α (I ⊗ Λ)(ρ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaStrategy {
    /// 1 / λ_max((I ⊗ Λ)(ρ)).
    Tight,
    /// 1 / ‖(I ⊗ Λ+)(ρ)‖ with Λ+ the completely positive part built from the
    /// positive Choi eigenspace.
    Norm,
    /// 1 / (ξ ‖ρ_A‖).
    Canonical,
    Explicit(f64),
}

impl AlphaStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            AlphaStrategy::Tight => "tight",
            AlphaStrategy::Norm => "norm",
            AlphaStrategy::Canonical => "canonical",
            AlphaStrategy::Explicit(_) => "explicit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PositiveMapWitness {
    pub witness: Observable,
    pub alpha: f64,
    /// (I ⊗ Λ)(ρ) before scaling.
    pub image: CMatrix,
}

const SCALE_FLOOR: f64 = 1e-12;

pub fn positive_map_witness(
    map: &LinearMapRep,
    rho: &DensityMatrix,
    strategy: AlphaStrategy,
) -> Result<PositiveMapWitness> {
    rho.check_bipartite()?;
    let image = map.apply_one_side(rho.mat(), rho.dims(), 1)?;
    let denom = match strategy {
        AlphaStrategy::Tight => max_eigenvalue(&image)?,
        AlphaStrategy::Norm => {
            let plus = map.positive_part()?;
            max_eigenvalue(&plus.apply_one_side(rho.mat(), rho.dims(), 1)?)?
        }
        AlphaStrategy::Canonical => {
            let xi = canonical_decomposition(map)?.xi;
            xi * max_eigenvalue(rho.reduce(&[0])?.mat())?
        }
        AlphaStrategy::Explicit(a) => {
            if a.is_nan() || a.abs() <= SCALE_FLOOR {
                return Err(Error::DegenerateScale(a));
            }
            1.0 / a
        }
    };
    if denom <= SCALE_FLOOR {
        return Err(Error::DegenerateScale(denom));
    }
    let alpha = 1.0 / denom;
    let witness = Observable::new(image.scale_real(alpha), rho.dims().clone(), CopyLayout::Single)?;
    Ok(PositiveMapWitness {
        witness,
        alpha,
        image,
    })
}

/// Eigenvalues of an observable, descending.
pub fn spectrum(o: &Observable) -> Result<Vec<f64>> {
    Ok(hermitian_eig(o.mat())?.values)
}
