//! The same bounds evaluated as means of two-copy observables.

use crate::error::Result;
use crate::linalg::Dims;
use crate::observables::{dual_witnesses, mb_witnesses, multipartite_witnesses, Observable};
use crate::states::DensityMatrix;

/// Witness pairs for a d ⊗ d system, built once and reused.
#[derive(Clone, Debug)]
pub struct BipartiteWitnesses {
    pub mb: (Observable, Observable),
    pub dual: (Observable, Observable),
}

impl BipartiteWitnesses {
    pub fn new(d: usize) -> Result<Self> {
        Ok(Self {
            mb: mb_witnesses(d)?,
            dual: dual_witnesses(d)?,
        })
    }

    /// max_r Tr(W_r ρ ⊗ σ)
    pub fn mb_pair(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
        let a = self.mb.0.expectation_pair(rho, sigma)?;
        let b = self.mb.1.expectation_pair(rho, sigma)?;
        Ok(a.max(b))
    }

    /// min_r Tr(W̃_r ρ ⊗ ρ)
    pub fn dual(&self, rho: &DensityMatrix) -> Result<f64> {
        let a = self.dual.0.expectation_pair(rho, rho)?;
        let b = self.dual.1.expectation_pair(rho, rho)?;
        Ok(a.min(b))
    }
}

#[derive(Clone, Debug)]
pub struct MultipartiteWitnesses {
    pub lower: Observable,
    pub upper: Observable,
}

impl MultipartiteWitnesses {
    pub fn new(system: &Dims) -> Result<Self> {
        let (lower, upper) = multipartite_witnesses(system)?;
        Ok(Self { lower, upper })
    }

    pub fn lower(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
        self.lower.expectation_pair(rho, sigma)
    }

    pub fn upper(&self, rho: &DensityMatrix) -> Result<f64> {
        self.upper.expectation_pair(rho, rho)
    }
}
