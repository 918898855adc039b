//! Separability criteria, k-concurrence upper bounds, fidelity inequalities
//! and pure-state checks.

use serde::{Deserialize, Serialize};

use crate::concurrence::{concurrence_pure, h_k_spectrum, schmidt, ConcurrenceVector};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, min_eigenvalue, psd_factor, Dims};
use crate::maps::LinearMapRep;
use crate::states::{DensityMatrix, PureState};

/// Below this an h_k upper bound counts as zero.
pub const DETECT_TOL: f64 = 1e-10;
pub const PPT_TOL: f64 = 1e-10;
pub const ENTROPIC_TOL: f64 = 1e-12;
pub const FIDELITY_SLACK: f64 = 1e-9;

/// C_k(ρ) ≤ min_r h_k(ρ_r) for k = 2..d.
pub fn ck_upper(rho: &DensityMatrix) -> Result<ConcurrenceVector> {
    let d = rho.check_square_bipartite()?;
    let spectra: Vec<Vec<f64>> = (0..2)
        .map(|r| {
            Ok(eigenvalues(rho.reduce(&[r])?.mat())?
                .into_iter()
                .map(|x| x.max(0.0))
                .collect())
        })
        .collect::<Result<_>>()?;
    let values = (2..=d)
        .map(|k| {
            let a = h_k_spectrum(&spectra[0], k)?;
            let b = h_k_spectrum(&spectra[1], k)?;
            Ok(a.min(b))
        })
        .collect::<Result<_>>()?;
    Ok(ConcurrenceVector { values })
}

/// Smallest l with min_r h_l(ρ_r) ≈ 0, certifying Schmidt number < l; d + 1
/// when no order vanishes.
pub fn schmidt_number_detect(rho: &DensityMatrix) -> Result<usize> {
    let d = rho.check_square_bipartite()?;
    let upper = ck_upper(rho)?;
    Ok(upper
        .values
        .iter()
        .position(|&v| v <= DETECT_TOL)
        .map(|i| i + 2)
        .unwrap_or(d + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropicCheck {
    pub alpha: u32,
    /// Tr ρ^α
    pub lhs: f64,
    /// min_r Tr ρ_r^α
    pub rhs: f64,
    pub violated: bool,
}

/// Separable states satisfy Tr ρ_r^α ≥ Tr ρ^α for both r; a violation on
/// either side certifies entanglement.
pub fn entropic_check(rho: &DensityMatrix, alpha: u32) -> Result<EntropicCheck> {
    rho.check_bipartite()?;
    if alpha == 0 {
        return Err(Error::BadK { k: 0, n: 1 });
    }
    let lhs = rho.power_trace(alpha);
    let rhs = (0..2)
        .map(|r| Ok(rho.reduce(&[r])?.power_trace(alpha)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(EntropicCheck {
        alpha,
        lhs,
        rhs,
        violated: lhs > rhs + ENTROPIC_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptCheck {
    pub min_eig: f64,
    pub is_ppt: bool,
}

/// Minimum eigenvalue of ρ^Γ (transposition on the second factor).
pub fn ppt_check(rho: &DensityMatrix) -> Result<PptCheck> {
    rho.check_bipartite()?;
    let min_eig = min_eigenvalue(&rho.partial_transpose(&[1])?)?;
    Ok(PptCheck {
        min_eig,
        is_ppt: min_eig >= -PPT_TOL,
    })
}

/// F(ρ1, ρ2) = Tr √(√ρ1 ρ2 √ρ1)
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dims() != rho2.dims() {
        return Err(Error::DimMismatch("fidelity of states on different spaces".into()));
    }
    // Sandwich with the thin factor of lower rank so the inner matrix has no
    // roundoff-level eigenvalues to take square roots of.
    let (m1, m2) = (psd_factor(rho1.mat())?, psd_factor(rho2.mat())?);
    let (m, other) = if m1.cols() <= m2.cols() { (m1, rho2) } else { (m2, rho1) };
    let inner = m.adjoint().matmul(other.mat()).matmul(&m).hermitian_part();
    Ok(eigenvalues(&inner)?.iter().map(|x| x.max(0.0).sqrt()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityPair {
    pub fidelity: f64,
    /// Tr ρ1ρ2 + √(1 − Tr ρ1²) √(1 − Tr ρ2²)
    pub bound_rhs: f64,
}

impl FidelityPair {
    pub fn holds(&self) -> bool {
        self.fidelity * self.fidelity <= self.bound_rhs + FIDELITY_SLACK
    }
}

pub fn fidelity_bound_check(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<FidelityPair> {
    let f = fidelity(rho1, rho2)?;
    let a = (1.0 - rho1.purity()).max(0.0).sqrt();
    let b = (1.0 - rho2.purity()).max(0.0).sqrt();
    Ok(FidelityPair {
        fidelity: f,
        bound_rhs: rho1.overlap(rho2) + a * b,
    })
}

/// Applies a channel to a whole state; the output is a single-factor state.
pub fn apply_channel(rho: &DensityMatrix, phi: &LinearMapRep) -> Result<DensityMatrix> {
    let out = phi.apply(rho.mat())?;
    DensityMatrix::new(out, Dims::new(vec![phi.out_dim()])?)
}

/// F(ρ1, ρ2) ≤ F(Φ(ρ1), Φ(ρ2)) + 1e-9
pub fn channel_monotonicity_check(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    phi: &LinearMapRep,
) -> Result<bool> {
    phi.check_channel()?;
    let before = fidelity(rho1, rho2)?;
    let a = apply_channel(rho1, phi)?;
    let b = apply_channel(rho2, phi)?;
    Ok(before <= fidelity(&a, &b)? + FIDELITY_SLACK)
}

/// R_g(ψ) = (Σ √μ_i)² − 1
pub fn robustness_pure(psi: &PureState) -> Result<f64> {
    let s: f64 = schmidt(psi)?.coefficients.iter().sum();
    Ok(s * s - 1.0)
}

/// C(ψ) ≥ √(2/(d(d−1))) R_g(ψ), with d the smaller local dimension.
pub fn rg_concurrence_bound(psi: &PureState) -> Result<bool> {
    let (a, b) = psi.check_bipartite()?;
    let d = a.min(b);
    if d < 2 {
        return Ok(true);
    }
    let rhs = super::bipartite::witness_prefactor(d) * robustness_pure(psi)?;
    Ok(concurrence_pure(psi)? >= rhs - 1e-10)
}

/// C(Φ;ψ) C(Φ;φ) ≥ 2(Tr(ψφ) − Tr[Φ(ψ)Φ(φ)]) for pure inputs.
pub fn phi_bound_check(psi: &PureState, phi_state: &PureState, phi: &LinearMapRep) -> Result<bool> {
    let (lhs, rhs) = phi_bound_sides(psi, phi_state, phi)?;
    Ok(lhs >= rhs - 1e-9)
}

/// (left side, right side) of the Φ-concurrence product inequality.
pub fn phi_bound_sides(psi: &PureState, phi_state: &PureState, phi: &LinearMapRep) -> Result<(f64, f64)> {
    let ca = crate::concurrence::phi_concurrence_pure(psi, phi)?;
    let cb = crate::concurrence::phi_concurrence_pure(phi_state, phi)?;
    let a = phi.apply(psi.density().mat())?;
    let b = phi.apply(phi_state.density().mat())?;
    let overlap = psi.density().overlap(&phi_state.density());
    Ok((ca * cb, 2.0 * (overlap - a.trace_product(&b).re)))
}
