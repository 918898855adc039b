//! Region scan over the rotationally invariant 4 ⊗ 4 family.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    entropic_check, mb_lower, ppt_check, transposition_bound, witness_bound, UnitaryChoice,
};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::maps::default_breuer_unitary;
use crate::observables::{breuer_witness_with, Observable};
use crate::states::{rot4_from, rot4_projectors, rot4_singlet, RotParams};

pub const DEFAULT_STEP: f64 = 0.02;
pub const MAX_STEP: f64 = 0.1;
const STEP_TOL: f64 = 1e-9;

/// Column order is fixed; CSV headers follow the field names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub entropic2_violated: bool,
    /// Tr(ρ (1⊗V) ρ^Γ (1⊗V)^†) with V the default antisymmetric unitary.
    #[serde(rename = "tr_rho_rhoGamma")]
    pub tr_rho_rho_gamma: f64,
    /// Raw Breuer bound with the J = 0 singlet as reference.
    pub breuer_value: f64,
    pub mb_raw: f64,
    pub transp_raw: f64,
    pub ppt_min_eig: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub step: f64,
    pub rows: Vec<ScanRow>,
}

/// Number of lattice subdivisions for a step, or BadStep.
pub fn subdivisions(step: f64) -> Result<usize> {
    if !(step > 0.0 && step <= MAX_STEP + STEP_TOL) {
        return Err(Error::BadStep(step));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() > STEP_TOL {
        return Err(Error::BadStep(step));
    }
    Ok(n as usize)
}

/// Lattice points (i, j, k) with i + j + k ≤ n in lexicographic order.
pub fn lattice(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity((n + 1) * (n + 2) * (n + 3) / 6);
    for i in 0..=n {
        for j in 0..=n - i {
            for k in 0..=n - i - j {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Everything that does not depend on the grid point.
pub struct Rot4Scanner {
    projectors: [CMatrix; 4],
    breuer: Observable,
    unitary: UnitaryChoice,
}

impl Rot4Scanner {
    pub fn new() -> Result<Self> {
        let projectors = rot4_projectors()?;
        let v = default_breuer_unitary(4)?;
        let singlet = rot4_singlet(&projectors);
        Ok(Self {
            breuer: breuer_witness_with(&v, Some(&singlet))?,
            unitary: UnitaryChoice::Fixed(v),
            projectors,
        })
    }

    pub fn row(&self, params: RotParams) -> Result<ScanRow> {
        let rho = rot4_from(&self.projectors, params);
        let transp = transposition_bound(&rho, &self.unitary)?;
        Ok(ScanRow {
            p: params.p,
            q: params.q,
            r: params.r,
            entropic2_violated: entropic_check(&rho, 2)?.violated,
            tr_rho_rho_gamma: transp.ingredient("tr_rho_rho_gamma").unwrap_or(f64::NAN),
            breuer_value: witness_bound(&rho, &self.breuer)?.raw,
            mb_raw: mb_lower(&rho)?.raw,
            transp_raw: transp.raw,
            ppt_min_eig: ppt_check(&rho)?.min_eig,
        })
    }

    /// Full simplex scan; rows come back in lattice order whatever the
    /// scheduling.
    pub fn scan(&self, step: f64) -> Result<ScanGrid> {
        let n = subdivisions(step)?;
        let nf = n as f64;
        let rows = lattice(n)
            .into_par_iter()
            .map(|(i, j, k)| self.row(RotParams::new(i as f64 / nf, j as f64 / nf, k as f64 / nf)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScanGrid { step, rows })
    }
}

impl ScanGrid {
    pub fn slice_p0(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.p == 0.0).collect()
    }

    pub fn slice_q0(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.q == 0.0).collect()
    }
}

pub fn write_csv<'a, W: Write>(out: W, rows: impl IntoIterator<Item = &'a ScanRow>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}
