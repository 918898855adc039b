//! Numerical conjugate function of the concurrence,
//! Ĉ(W) = sup_φ [<φ|W|φ> − C(φ)], over pure states.

use rayon::prelude::*;

use crate::concurrence::multipartite_from_purity_sum;
use crate::error::{Error, Result};
use crate::linalg::{embed, inner, vec_norm, CMatrix, Dims, C64};
use crate::maps::{multipartite_reduction, reduction_map};
use crate::observables::{CopyLayout, Observable};
use crate::random::{derived, haar_vector};
use crate::states::{DensityMatrix, PureState};

pub const DEFAULT_RESTARTS: usize = 64;
pub const MAX_ITERATIONS: usize = 500;
pub const STEP_TOL: f64 = 1e-8;
/// Riemannian gradient norm below which a run counts as stationary.
pub const GRADIENT_TOL: f64 = 1e-5;
const ARMIJO: f64 = 1e-4;
/// Below this concurrence the −C term contributes no gradient.
const KINK_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct ConjugateResult {
    /// Best objective found; a lower bound on the true supremum.
    pub value: f64,
    pub maximizer: PureState,
    pub restarts_used: usize,
    /// Whether the winning run ended with gradient norm ≤ 1e-5.
    pub converged: bool,
}

/// Ĉ(W) for a bipartite observable.
pub fn conjugate_concurrence(
    w: &Observable,
    dims: &Dims,
    restarts: usize,
    seed: u64,
) -> Result<ConjugateResult> {
    if dims.parties() != 2 {
        return Err(Error::BadPartition(format!(
            "expected a bipartite system, got dims {:?}",
            dims.as_slice()
        )));
    }
    conjugate_multipartite(w, dims, restarts, seed)
}

/// Ĉ^(N)(W) with C^(N)(φ) = 2^{1−N/2} √(2^N − 2 − Σ_S Tr φ_S²). For two
/// parties this is the bipartite concurrence.
pub fn conjugate_multipartite(
    w: &Observable,
    dims: &Dims,
    restarts: usize,
    seed: u64,
) -> Result<ConjugateResult> {
    if w.layout() != CopyLayout::Single || w.dims() != dims {
        return Err(Error::DimMismatch(format!(
            "observable on {:?} for system {:?}",
            w.dims().as_slice(),
            dims.as_slice()
        )));
    }
    if dims.parties() < 2 {
        return Err(Error::BadPartition("need at least two parties".into()));
    }
    let objective = Objective::new(w.mat(), dims);
    let runs: Vec<Run> = (0..restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let start = haar_vector(dims.total(), &mut derived(seed, k as u64));
            objective.ascend(start)
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, cand| if cand.value > best.value { cand } else { best })
        .expect("at least one restart");
    Ok(ConjugateResult {
        value: best.value,
        maximizer: PureState::from_unit(best.phi, dims.clone()),
        restarts_used: restarts.max(1),
        converged: best.gradient_norm <= GRADIENT_TOL,
    })
}

/// W_σ^R = −(2/C(σ)) (I ⊗ R)(σ), with C(σ) supplied by the caller.
pub fn reduction_witness(sigma: &DensityMatrix, concurrence: f64) -> Result<Observable> {
    let d = sigma.check_square_bipartite()?;
    if concurrence <= 0.0 {
        return Err(Error::ZeroConcurrence);
    }
    let image = reduction_map(d)?.apply_one_side(sigma.mat(), sigma.dims(), 1)?;
    Observable::new(
        image.scale_real(-2.0 / concurrence),
        sigma.dims().clone(),
        CopyLayout::Single,
    )
}

/// W_σ^{R^(N)} = −(2^{2−N}/C^(N)(σ)) R^(N)(σ), with C^(N)(σ) supplied by the
/// caller.
pub fn multipartite_reduction_witness(sigma: &DensityMatrix, concurrence: f64) -> Result<Observable> {
    if concurrence <= 0.0 {
        return Err(Error::ZeroConcurrence);
    }
    let dims = sigma.dims();
    let n = dims.parties();
    let image = multipartite_reduction(dims)?.apply(sigma.mat())?;
    let scale = -(2f64.powi(2 - n as i32)) / concurrence;
    Observable::new(image.scale_real(scale), dims.clone(), CopyLayout::Single)
}

struct Run {
    value: f64,
    phi: Vec<C64>,
    gradient_norm: f64,
}

struct Objective<'a> {
    w: &'a CMatrix,
    dims: &'a Dims,
    subsets: Vec<Vec<usize>>,
    /// (2^{1−N/2})²
    kappa2: f64,
}

struct Evaluation {
    value: f64,
    /// Riemannian gradient on the unit sphere.
    gradient: Vec<C64>,
}

impl<'a> Objective<'a> {
    fn new(w: &'a CMatrix, dims: &'a Dims) -> Self {
        Self {
            w,
            dims,
            subsets: dims.proper_subsets(),
            kappa2: 2f64.powi(2 - dims.parties() as i32),
        }
    }

    fn value(&self, phi: &[C64]) -> f64 {
        let psi = PureState::from_unit(phi.to_vec(), self.dims.clone());
        let mean = self.w.sandwich(phi, phi).re;
        let sum: f64 = self
            .subsets
            .iter()
            .map(|s| {
                let r = psi.reduced(s).expect("valid subset");
                r.trace_product(&r).re
            })
            .sum();
        mean - multipartite_from_purity_sum(self.dims.parties(), sum)
    }

    fn evaluate(&self, phi: &[C64]) -> Evaluation {
        let psi = PureState::from_unit(phi.to_vec(), self.dims.clone());
        let wphi = self.w.mul_vec(phi);
        let mean = inner(phi, &wphi).re;
        let mut sum = 0.0;
        let mut pull = vec![C64::new(0.0, 0.0); phi.len()];
        for s in &self.subsets {
            let r = psi.reduced(s).expect("valid subset");
            sum += r.trace_product(&r).re;
            let lifted = embed(&r, self.dims, s).expect("valid subset").mul_vec(phi);
            for (p, x) in pull.iter_mut().zip(lifted) {
                *p += x;
            }
        }
        let c = multipartite_from_purity_sum(self.dims.parties(), sum);
        // 2 ∂f/∂φ̄ = 2 W φ + (2 κ²/C) Σ_S (φ_S ⊗ 1) φ
        let coef = if c > KINK_TOL { 2.0 * self.kappa2 / c } else { 0.0 };
        let mut g: Vec<C64> = wphi
            .iter()
            .zip(&pull)
            .map(|(a, b)| a * 2.0 + b * coef)
            .collect();
        let radial = inner(phi, &g).re;
        for (gi, p) in g.iter_mut().zip(phi) {
            *gi -= p * radial;
        }
        Evaluation {
            value: mean - c,
            gradient: g,
        }
    }

    fn ascend(&self, mut phi: Vec<C64>) -> Run {
        let mut eval = self.evaluate(&phi);
        let mut step = 1.0;
        for _ in 0..MAX_ITERATIONS {
            let gnorm = vec_norm(&eval.gradient);
            if gnorm <= GRADIENT_TOL * 1e-3 {
                break;
            }
            let mut accepted = None;
            step *= 2.0;
            while step * gnorm >= STEP_TOL {
                let mut cand: Vec<C64> = phi
                    .iter()
                    .zip(&eval.gradient)
                    .map(|(p, g)| p + g * step)
                    .collect();
                let n = vec_norm(&cand);
                cand.iter_mut().for_each(|x| *x /= n);
                let v = self.value(&cand);
                if v >= eval.value + ARMIJO * step * gnorm * gnorm {
                    accepted = Some(cand);
                    break;
                }
                step /= 2.0;
            }
            match accepted {
                Some(next) => {
                    phi = next;
                    eval = self.evaluate(&phi);
                }
                None => break,
            }
        }
        Run {
            value: eval.value,
            gradient_norm: vec_norm(&eval.gradient),
            phi,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::concurrence_multipartite_pure;
    use crate::states::{ghz, haar_pure, isotropic, psi_plus};

    fn zero_observable(dims: &Dims) -> Observable {
        let n = dims.total();
        Observable::new(CMatrix::zeros(n, n), dims.clone(), CopyLayout::Single).unwrap()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let sigma = isotropic(3, 0.7).unwrap();
        let w = reduction_witness(&sigma.state, sigma.concurrence).unwrap();
        let dims = Dims::bipartite(3);
        let obj = Objective::new(w.mat(), &dims);
        let phi = haar_pure(&dims, 11).vec().to_vec();
        let eval = obj.evaluate(&phi);
        assert!((eval.value - obj.value(&phi)).abs() < 1e-12);
        let dir = haar_pure(&dims, 12).vec().to_vec();
        let radial = inner(&phi, &dir).re;
        let tangent: Vec<C64> = dir.iter().zip(&phi).map(|(d, p)| d - p * radial).collect();
        let h = 1e-6;
        let at = |t: f64| {
            let mut v: Vec<C64> = phi.iter().zip(&tangent).map(|(p, d)| p + d * t).collect();
            let n = vec_norm(&v);
            v.iter_mut().for_each(|x| *x /= n);
            obj.value(&v)
        };
        let numeric = (at(h) - at(-h)) / (2.0 * h);
        let analytic = inner(&eval.gradient, &tangent).re;
        assert!((numeric - analytic).abs() < 1e-6, "{numeric} vs {analytic}");
    }

    #[test]
    fn zero_witness_gives_zero() {
        let dims = Dims::bipartite(2);
        let r = conjugate_concurrence(&zero_observable(&dims), &dims, 8, 1).unwrap();
        assert!(r.value <= 0.0 && r.value > -1e-6);
        let r3 = conjugate_multipartite(&zero_observable(&Dims::uniform(2, 3)), &Dims::uniform(2, 3), 8, 1).unwrap();
        assert!(r3.value <= 0.0 && r3.value > -1e-6);
    }

    #[test]
    fn witness_mean_on_psi_plus() {
        let p = psi_plus(2).unwrap().density();
        let w = reduction_witness(&p, 1.0).unwrap();
        // (2/C)(Tr ρσ − Tr ρ_A σ_A) = 2 (1 − 1/2)
        assert!((w.expectation(&p).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(reduction_witness(&p, 0.0), Err(Error::ZeroConcurrence)));
    }

    #[test]
    fn isotropic_supremum_at_psi_plus() {
        let sigma = isotropic(3, 0.8).unwrap();
        let w = reduction_witness(&sigma.state, sigma.concurrence).unwrap();
        let r = conjugate_concurrence(&w, &Dims::bipartite(3), 16, 5).unwrap();
        assert!(r.value <= 1e-6 && r.value >= -1e-3, "{}", r.value);
        assert!(r.maximizer.fidelity_with(&psi_plus(3).unwrap()) > 0.9999);
    }

    #[test]
    fn ghz_witness_objective() {
        let g = ghz(3).unwrap();
        let c = concurrence_multipartite_pure(&g).unwrap();
        let w = multipartite_reduction_witness(&g.density(), c).unwrap();
        let dims = Dims::uniform(2, 3);
        let obj = Objective::new(w.mat(), &dims);
        // <GHZ|W|GHZ> = lower(GHZ, GHZ)/C = C, so the objective vanishes.
        assert!(obj.value(g.vec()).abs() < 1e-10);
        let r = conjugate_multipartite(&w, &dims, 16, 3).unwrap();
        assert!(r.value <= 1e-6);
    }
}
