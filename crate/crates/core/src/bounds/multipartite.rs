//! N-partite concurrence bounds from reduced-state overlaps.

use super::report::{BoundReport, Side, Target};
use crate::error::{Error, Result};
use crate::states::DensityMatrix;

/// Σ_S Tr(ρ_S σ_S) over nonempty proper subsets S.
fn subset_overlap_sum(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let mut total = 0.0;
    for s in rho.dims().proper_subsets() {
        total += rho.reduce(&s)?.overlap(&sigma.reduce(&s)?);
    }
    Ok(total)
}

fn check_pair(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<usize> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimMismatch(format!(
            "states on {:?} and {:?}",
            rho.dims().as_slice(),
            sigma.dims().as_slice()
        )));
    }
    let n = rho.dims().parties();
    if n < 2 {
        return Err(Error::DimMismatch("need at least two parties".into()));
    }
    Ok(n)
}

/// C^(N)(ρ) C^(N)(σ) ≥ (4/2^N) [(2^N − 2) Tr ρσ − Σ_S Tr ρ_S σ_S]
pub fn multipartite_lower(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    let n = check_pair(rho, sigma)?;
    let m = (1u64 << n) as f64;
    let overlap = rho.overlap(sigma);
    let sum = subset_overlap_sum(rho, sigma)?;
    let raw = 4.0 / m * ((m - 2.0) * overlap - sum);
    Ok(BoundReport::new("multipartite_lower", raw, Side::Lower, Target::MultipartiteProduct)
        .with("overlap", overlap)
        .with("subset_overlap_sum", sum))
}

/// C^(N)(ρ)² ≤ (4/2^N) [(2^N − 2) − Σ_S Tr ρ_S²]
pub fn multipartite_upper(rho: &DensityMatrix) -> Result<BoundReport> {
    let n = check_pair(rho, rho)?;
    let m = (1u64 << n) as f64;
    let sum = subset_overlap_sum(rho, rho)?;
    let raw = 4.0 / m * ((m - 2.0) - sum);
    Ok(BoundReport::new("multipartite_upper", raw, Side::Upper, Target::MultipartiteSquared)
        .with("subset_purity_sum", sum))
}
