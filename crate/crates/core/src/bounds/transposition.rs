//! C(ρ) ≥ −√(2d/(d−1)) Tr(ρ ρ^{Γ_U}) for states with a maximally mixed
//! marginal, with an optional search over the unitary U.

use rayon::prelude::*;

use super::bipartite::marginal_deviation;
use super::report::{BoundReport, Side, Target};
use crate::error::{Error, Result};
use crate::linalg::{expi_hermitian, partial_transpose, CMatrix, C64};
use crate::random::{derived, haar_unitary};
use crate::states::DensityMatrix;

/// Required closeness of ρ_A to 1/d.
pub const MARGINAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub enum UnitaryChoice {
    Fixed(CMatrix),
    /// Haar restarts followed by greedy step-halving refinement.
    Optimize { restarts: usize, seed: u64 },
}

impl UnitaryChoice {
    pub fn optimize(seed: u64) -> Self {
        UnitaryChoice::Optimize {
            restarts: DEFAULT_RESTARTS,
            seed,
        }
    }
}

pub const DEFAULT_RESTARTS: usize = 200;
const INITIAL_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-6;
const OBJECTIVE_TOL: f64 = 1e-8;
const MAX_PASSES: usize = 10_000;

pub fn transposition_bound(rho: &DensityMatrix, choice: &UnitaryChoice) -> Result<BoundReport> {
    let d = rho.check_square_bipartite()?;
    let dev = marginal_deviation(rho)?;
    if dev > MARGINAL_TOL {
        return Err(Error::NotMaxMixedMarginal { deviation: dev });
    }
    let gamma = partial_transpose(rho.mat(), rho.dims(), &[1])?;
    let objective = TranspositionObjective {
        rho: rho.mat(),
        gamma: &gamma,
        d,
    };
    let (value, restarts) = match choice {
        UnitaryChoice::Fixed(u) => {
            let dev = crate::linalg::unitarity_deviation(u);
            if u.rows() != d || dev > 1e-10 {
                return Err(Error::NotUnitary { deviation: dev });
            }
            (objective.eval(u), 0)
        }
        UnitaryChoice::Optimize { restarts, seed } => {
            (objective.minimize(*restarts, *seed)?.1, *restarts)
        }
    };
    let df = d as f64;
    let pre = (2.0 * df / (df - 1.0)).sqrt();
    Ok(BoundReport::new("transposition", -pre * value, Side::Lower, Target::Concurrence)
        .with("tr_rho_rho_gamma", value)
        .with("prefactor", pre)
        .with("restarts", restarts as f64))
}

/// f(U) = Tr(ρ (1⊗U) ρ^Γ (1⊗U)^†)
struct TranspositionObjective<'a> {
    rho: &'a CMatrix,
    gamma: &'a CMatrix,
    d: usize,
}

impl TranspositionObjective<'_> {
    fn eval(&self, u: &CMatrix) -> f64 {
        let d = self.d;
        let g = self.gamma;
        // Y[(a,k),(b,l)] = Σ_ij U[k,i] Γ[(a,i),(b,j)] conj(U[l,j])
        let mut left = CMatrix::zeros(d * d, d * d);
        for a in 0..d {
            for k in 0..d {
                for i in 0..d {
                    let uki = u[(k, i)];
                    for col in 0..d * d {
                        left[(a * d + k, col)] += uki * g[(a * d + i, col)];
                    }
                }
            }
        }
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..d * d {
            for b in 0..d {
                for l in 0..d {
                    let mut y = C64::new(0.0, 0.0);
                    for j in 0..d {
                        y += left[(r, b * d + j)] * u[(l, j)].conj();
                    }
                    acc += y * self.rho[(b * d + l, r)];
                }
            }
        }
        acc.re
    }

    /// Best (U, f(U)) over Haar restarts run in parallel; ties go to the
    /// lowest restart index.
    fn minimize(&self, restarts: usize, seed: u64) -> Result<(CMatrix, f64)> {
        let generators = hermitian_basis(self.d);
        let moves = |step: f64| -> Result<Vec<CMatrix>> {
            let mut out = Vec::with_capacity(2 * generators.len());
            for g in &generators {
                out.push(expi_hermitian(&g.scale_real(step))?);
                out.push(expi_hermitian(&g.scale_real(-step))?);
            }
            Ok(out)
        };
        let mut ladder = Vec::new();
        let mut step = INITIAL_STEP;
        while step >= MIN_STEP {
            ladder.push(moves(step)?);
            step /= 2.0;
        }
        let results: Vec<(CMatrix, f64)> = (0..restarts.max(1))
            .into_par_iter()
            .map(|k| {
                let mut rng = derived(seed, k as u64);
                self.refine(haar_unitary(self.d, &mut rng), &ladder)
            })
            .collect();
        Ok(results
            .into_iter()
            .reduce(|best, cand| if cand.1 < best.1 { cand } else { best })
            .expect("at least one restart"))
    }

    fn refine(&self, mut u: CMatrix, ladder: &[Vec<CMatrix>]) -> (CMatrix, f64) {
        let mut f = self.eval(&u);
        for moves in ladder {
            for _ in 0..MAX_PASSES {
                let before = f;
                for m in moves {
                    let cand = u.matmul(m);
                    let fc = self.eval(&cand);
                    if fc < f {
                        u = cand;
                        f = fc;
                    }
                }
                if before - f <= OBJECTIVE_TOL * 1e-2 {
                    break;
                }
            }
        }
        (u, f)
    }
}

/// Orthonormal (Hilbert–Schmidt) basis of d×d Hermitian matrices.
fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        out.push(CMatrix::from_fn(d, d, |r, c| {
            C64::new(if r == i && c == i { 1.0 } else { 0.0 }, 0.0)
        }));
        for j in i + 1..d {
            let mut re = CMatrix::zeros(d, d);
            re[(i, j)] = C64::new(h, 0.0);
            re[(j, i)] = C64::new(h, 0.0);
            out.push(re);
            let mut im = CMatrix::zeros(d, d);
            im[(i, j)] = C64::new(0.0, -h);
            im[(j, i)] = C64::new(0.0, h);
            out.push(im);
        }
    }
    out
}
