//! Bipartite concurrence bounds computed from purities, overlaps and
//! positive-map images.

use super::report::{BoundReport, Side, Target};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::maps::{canonical_decomposition, default_breuer_unitary, LinearMapRep};
use crate::observables::{breuer_witness_with, positive_map_witness, AlphaStrategy, Observable};
use crate::states::DensityMatrix;

/// Marginals within this distance of 1/d count as maximally mixed.
pub const MAX_MIXED_TOL: f64 = 1e-10;

fn same_square_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<usize> {
    let d = rho.check_square_bipartite()?;
    if sigma.dims() != rho.dims() {
        return Err(Error::DimMismatch(format!(
            "states on {:?} and {:?}",
            rho.dims().as_slice(),
            sigma.dims().as_slice()
        )));
    }
    Ok(d)
}

/// Tr(ρ_r σ_r) for r = A, B.
fn marginal_overlaps(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<[f64; 2]> {
    let mut out = [0.0; 2];
    for (r, slot) in out.iter_mut().enumerate() {
        *slot = rho.reduce(&[r])?.overlap(&sigma.reduce(&[r])?);
    }
    Ok(out)
}

/// C(ρ)² ≥ 2 max_r {Tr ρ² − Tr ρ_r²}
pub fn mb_lower(rho: &DensityMatrix) -> Result<BoundReport> {
    let r = pair_branches(rho, rho)?;
    Ok(BoundReport::new("mb_lower", r.0, Side::Lower, Target::ConcurrenceSquared)
        .with("purity", r.1)
        .with("purity_A", r.2[0])
        .with("purity_B", r.2[1])
        .with("branch_A", 2.0 * (r.1 - r.2[0]))
        .with("branch_B", 2.0 * (r.1 - r.2[1])))
}

/// C(ρ) C(σ) ≥ 2 max_r {Tr ρσ − Tr ρ_r σ_r}
pub fn mb_pair_lower(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    let r = pair_branches(rho, sigma)?;
    Ok(BoundReport::new("mb_pair_lower", r.0, Side::Lower, Target::ConcurrenceProduct)
        .with("overlap", r.1)
        .with("marginal_overlap_A", r.2[0])
        .with("marginal_overlap_B", r.2[1])
        .with("branch_A", 2.0 * (r.1 - r.2[0]))
        .with("branch_B", 2.0 * (r.1 - r.2[1])))
}

fn pair_branches(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(f64, f64, [f64; 2])> {
    same_square_dims(rho, sigma)?;
    let overlap = rho.overlap(sigma);
    let m = marginal_overlaps(rho, sigma)?;
    let raw = 2.0 * (overlap - m[0]).max(overlap - m[1]);
    Ok((raw, overlap, m))
}

/// C(ρ)² ≤ 2 min_r {1 − Tr ρ_r²}
pub fn dual_upper(rho: &DensityMatrix) -> Result<BoundReport> {
    rho.check_square_bipartite()?;
    let m = marginal_overlaps(rho, rho)?;
    let raw = 2.0 * (1.0 - m[0]).min(1.0 - m[1]);
    Ok(BoundReport::new("dual_upper", raw, Side::Upper, Target::ConcurrenceSquared)
        .with("purity_A", m[0])
        .with("purity_B", m[1]))
}

/// √(2 / (d(d−1)))
pub fn witness_prefactor(d: usize) -> f64 {
    let d = d as f64;
    (2.0 / (d * (d - 1.0))).sqrt()
}

/// C(ρ) ≥ −√(2/(d(d−1))) Tr(𝒲_V ρ) with 𝒲_V = d (I ⊗ Λ_V)(P+) and the
/// default antisymmetric unitary.
pub fn breuer_bound(rho: &DensityMatrix) -> Result<BoundReport> {
    let d = rho.check_square_bipartite()?;
    breuer_bound_with_reference(rho, &default_breuer_unitary(d)?, None)
}

/// As [`breuer_bound`] with 𝒲 = d (I ⊗ Λ_V)(|ref><ref|) for a maximally
/// entangled reference vector (ψ+ when `None`).
pub fn breuer_bound_with_reference(
    rho: &DensityMatrix,
    v: &CMatrix,
    reference: Option<&[C64]>,
) -> Result<BoundReport> {
    let d = rho.check_square_bipartite()?;
    if d % 2 == 1 {
        return Err(Error::OddDim(d));
    }
    if v.rows() != d {
        return Err(Error::DimMismatch("Breuer unitary size".into()));
    }
    witness_bound_named("breuer", rho, &breuer_witness_with(v, reference)?)
}

/// C(ρ) ≥ −√(2/(d(d−1))) Tr(W ρ) for a single-copy witness W with W ≤ 1.
pub fn witness_bound(rho: &DensityMatrix, witness: &Observable) -> Result<BoundReport> {
    witness_bound_named("witness", rho, witness)
}

pub(crate) fn witness_bound_named(
    name: &str,
    rho: &DensityMatrix,
    witness: &Observable,
) -> Result<BoundReport> {
    let d = rho.check_square_bipartite()?;
    let mean = witness.expectation(rho)?;
    let pre = witness_prefactor(d);
    Ok(BoundReport::new(name, -pre * mean, Side::Lower, Target::Concurrence)
        .with("witness_mean", mean)
        .with("prefactor", pre))
}

/// C(ρ) ≥ −α √(2/(d(d−1))) Tr[(I ⊗ Λ)(ρ) ρ] for a positive map Λ.
pub fn positive_map_bound(
    rho: &DensityMatrix,
    map: &LinearMapRep,
    strategy: AlphaStrategy,
) -> Result<BoundReport> {
    let d = rho.check_square_bipartite()?;
    let pw = positive_map_witness(map, rho, strategy)?;
    let mean = pw.image.trace_product(rho.mat()).re;
    let pre = witness_prefactor(d);
    let mut report = BoundReport::new(
        &format!("positive_map_{}", strategy.name()),
        -pw.alpha * pre * mean,
        Side::Lower,
        Target::Concurrence,
    )
    .with("alpha", pw.alpha)
    .with("map_mean", mean)
    .with("prefactor", pre);
    if strategy == AlphaStrategy::Canonical {
        let xi = canonical_decomposition(map)?.xi;
        report = report.with("xi", xi);
        let dev = marginal_deviation(rho)?;
        if dev <= MAX_MIXED_TOL {
            let df = d as f64;
            report = report.with("max_mixed_prefactor", (2.0 * df / (df - 1.0)).sqrt() / xi);
        }
    }
    Ok(report)
}

/// max-norm distance of ρ_A from 1/d.
pub fn marginal_deviation(rho: &DensityMatrix) -> Result<f64> {
    let ra = rho.reduce(&[0])?;
    let d = ra.dim();
    Ok(ra
        .mat()
        .max_abs_diff(&CMatrix::identity(d).scale_real(1.0 / d as f64)))
}
