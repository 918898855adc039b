//! JSON exchange format for density matrices: `{dims, re, im}`, with `re`
//! and `im` given as row lists.

use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Dims, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.mat();
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.rows()).map(|i| m.row(i).iter().map(f).collect()).collect()
        };
        Self {
            dims: rho.dims().as_slice().to_vec(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    /// Raw matrix without state validation; shape is still checked.
    pub fn matrix(&self) -> Result<(CMatrix, Dims)> {
        let dims = Dims::new(self.dims.clone())?;
        let n = dims.total();
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::DimMismatch(format!(
                "state file must hold {n}x{n} re and im arrays for dims {:?}",
                self.dims
            )));
        }
        let m = CMatrix::from_fn(n, n, |i, j| C64::new(self.re[i][j], self.im[i][j]));
        Ok((m, dims))
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let (m, dims) = self.matrix()?;
        DensityMatrix::new(m, dims)
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
