//! Pure-state concurrences.
//!
//! Two normalizations coexist: `concurrence_pure` is √(2(1 − Tr ρ_r²)) with
//! maximum √(2(d−1)/d), while the k-concurrences `c_k_pure` are scaled so the
//! maximally entangled state gives 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eigenvalues;
use crate::maps::LinearMapRep;
use crate::states::{DensityMatrix, PureState};

/// Squared Schmidt coefficients below this count as zero.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtData {
    /// √μ_i, descending.
    pub coefficients: Vec<f64>,
    /// μ_i, descending, summing to 1.
    pub squared: Vec<f64>,
}

impl SchmidtData {
    pub fn purity(&self) -> f64 {
        self.squared.iter().map(|m| m * m).sum()
    }
}

/// k-concurrences C_2..C_d of one state; `values[0]` is C_2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceVector {
    pub values: Vec<f64>,
}

impl ConcurrenceVector {
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(2).and_then(|i| self.values.get(i).copied())
    }
}

/// Schmidt data from the smaller reduction, cross-checked against the other.
pub fn schmidt(psi: &PureState) -> Result<SchmidtData> {
    let (da, db) = psi.check_bipartite()?;
    let mut a = eigenvalues(&psi.reduced(&[0])?)?;
    let mut b = eigenvalues(&psi.reduced(&[1])?)?;
    let r = da.min(db);
    a.truncate(r);
    b.truncate(r);
    let dev = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if dev > 1e-8 {
        return Err(Error::DecompositionFailed(format!(
            "reduced spectra differ by {dev:.3e}"
        )));
    }
    let squared: Vec<f64> = if da <= db { a } else { b }
        .into_iter()
        .map(|x| x.max(0.0))
        .collect();
    Ok(SchmidtData {
        coefficients: squared.iter().map(|x| x.sqrt()).collect(),
        squared,
    })
}

/// √(2(1 − Σ μ_i²))
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    Ok(concurrence_from_purity(schmidt(psi)?.purity()))
}

pub(crate) fn concurrence_from_purity(purity: f64) -> f64 {
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// 2^{1−N/2} √(2^N − 2 − Σ_S Tr ρ_S²) over nonempty proper subsets S.
pub fn concurrence_multipartite_pure(psi: &PureState) -> Result<f64> {
    let n = psi.dims().parties();
    if n < 2 {
        return Err(Error::BadPartition("need at least two parties".into()));
    }
    let mut total = 0.0;
    for s in psi.dims().proper_subsets() {
        let r = psi.reduced(&s)?;
        total += r.trace_product(&r).re;
    }
    Ok(multipartite_from_purity_sum(n, total))
}

pub(crate) fn multipartite_from_purity_sum(parties: usize, purity_sum: f64) -> f64 {
    let k = 2f64.powf(1.0 - parties as f64 / 2.0);
    let q = (1u64 << parties) as f64 - 2.0 - purity_sum;
    k * q.max(0.0).sqrt()
}

/// σ_k(x) via the coefficients of Π(1 + x_i t).
pub fn elementary_symmetric(k: usize, x: &[f64]) -> Result<f64> {
    if k == 0 || k > x.len() {
        return Err(Error::BadK { k, n: x.len() });
    }
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for (i, &xi) in x.iter().enumerate() {
        for j in (1..=k.min(i + 1)).rev() {
            e[j] += xi * e[j - 1];
        }
    }
    Ok(e[k])
}

/// (σ_k(λ) / σ_k(1/d, .., 1/d))^{1/k} for a probability vector λ of length d.
pub fn h_k_spectrum(lambda: &[f64], k: usize) -> Result<f64> {
    let d = lambda.len();
    if k < 2 || k > d {
        return Err(Error::BadK { k, n: d });
    }
    // entries at or below the rank tolerance count as exact zeros
    let clipped: Vec<f64> = lambda.iter().map(|&x| if x > RANK_TOL { x } else { 0.0 }).collect();
    let num = elementary_symmetric(k, &clipped)?.max(0.0);
    let den = binomial(d, k) / (d as f64).powi(k as i32);
    Ok((num / den).powf(1.0 / k as f64))
}

/// h_k of the spectrum of ρ.
pub fn h_k(rho: &DensityMatrix, k: usize) -> Result<f64> {
    let lambda: Vec<f64> = eigenvalues(rho.mat())?.into_iter().map(|x| x.max(0.0)).collect();
    h_k_spectrum(&lambda, k)
}

/// C_k(ψ) = h_k of the reduction. For unequal local dimensions the smaller
/// side sets d.
pub fn c_k_pure(psi: &PureState, k: usize) -> Result<f64> {
    h_k_spectrum(&schmidt(psi)?.squared, k)
}

/// All of C_2..C_d.
pub fn c_vector_pure(psi: &PureState) -> Result<ConcurrenceVector> {
    let mu = schmidt(psi)?.squared;
    let values = (2..=mu.len())
        .map(|k| h_k_spectrum(&mu, k))
        .collect::<Result<_>>()?;
    Ok(ConcurrenceVector { values })
}

pub fn schmidt_rank(psi: &PureState) -> Result<usize> {
    Ok(schmidt(psi)?.squared.iter().filter(|&&m| m > RANK_TOL).count())
}

/// √(2(1 − Tr[Φ(ψ)²])) for a channel Φ acting on the whole space of ψ.
pub fn phi_concurrence_pure(psi: &PureState, phi: &LinearMapRep) -> Result<f64> {
    phi.check_channel()?;
    let out = phi.apply(psi.density().mat())?;
    Ok(concurrence_from_purity(out.trace_product(&out).re))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Dims;
    use crate::maps::{completely_depolarizing, identity_map, partial_trace_channel};
    use crate::states::{ghz, haar_pure, psi_plus, random_product_pure};
    use crate::random::seeded;

    /// Brute-force subset enumeration.
    fn sigma_enum(k: usize, x: &[f64]) -> f64 {
        (0u32..1 << x.len())
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..x.len()).filter(|i| m >> i & 1 == 1).map(|i| x[i]).product::<f64>())
            .sum()
    }

    #[test]
    fn elementary_symmetric_values() {
        assert_eq!(elementary_symmetric(2, &[1.0, 2.0, 3.0]).unwrap(), 11.0);
        assert_eq!(elementary_symmetric(3, &[2.0, 3.0, 5.0]).unwrap(), 30.0);
        for d in 2..=8 {
            let x = vec![1.0 / d as f64; d];
            for k in 1..=d {
                let dp = elementary_symmetric(k, &x).unwrap();
                assert!((dp - sigma_enum(k, &x)).abs() < 1e-14);
                assert!((dp - binomial(d, k) / (d as f64).powi(k as i32)).abs() < 1e-14);
            }
        }
        assert!(matches!(elementary_symmetric(4, &[1.0; 3]), Err(Error::BadK { .. })));
        assert!(matches!(elementary_symmetric(0, &[1.0; 3]), Err(Error::BadK { .. })));
    }

    #[test]
    fn psi_plus_values() {
        for d in 2..7 {
            let p = psi_plus(d).unwrap();
            let c = concurrence_pure(&p).unwrap();
            assert!((c - (2.0 * (d as f64 - 1.0) / d as f64).sqrt()).abs() < 1e-12);
            for k in 2..=d {
                assert!((c_k_pure(&p, k).unwrap() - 1.0).abs() < 1e-10);
            }
            assert_eq!(schmidt_rank(&p).unwrap(), d);
        }
        let mu = schmidt(&psi_plus(3).unwrap()).unwrap().squared;
        assert!(mu.iter().all(|m| (m - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn half_half_spectrum() {
        let mu = [0.5, 0.5, 0.0, 0.0];
        assert!((h_k_spectrum(&mu, 2).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(h_k_spectrum(&mu, 3).unwrap(), 0.0);
        assert_eq!(h_k_spectrum(&mu, 4).unwrap(), 0.0);
        assert!((concurrence_from_purity(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_states() {
        let p = random_product_pure(&Dims::bipartite(3), &mut seeded(2));
        assert!(concurrence_pure(&p).unwrap() < 1e-7);
        assert_eq!(schmidt_rank(&p).unwrap(), 1);
        let p3 = random_product_pure(&Dims::uniform(2, 3), &mut seeded(3));
        assert!(concurrence_multipartite_pure(&p3).unwrap() < 1e-6);
    }

    #[test]
    fn ghz_value() {
        let c = concurrence_multipartite_pure(&ghz(3).unwrap()).unwrap();
        assert!((c - 1.5f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn two_party_formulas_coincide() {
        for s in 0..100 {
            let psi = haar_pure(&Dims::bipartite(3), s);
            let a = concurrence_pure(&psi).unwrap();
            let b = concurrence_multipartite_pure(&psi).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_concurrence_examples() {
        let psi = haar_pure(&Dims::bipartite(2), 1);
        assert!(phi_concurrence_pure(&psi, &identity_map(4).unwrap()).unwrap() < 1e-7);
        let dep = phi_concurrence_pure(&psi, &completely_depolarizing(4).unwrap()).unwrap();
        assert!((dep - (2.0 * 0.75f64).sqrt()).abs() < 1e-12);
        let tr_b = partial_trace_channel(&Dims::bipartite(3), &[0]).unwrap();
        for s in 0..50 {
            let psi = haar_pure(&Dims::bipartite(3), s);
            let a = phi_concurrence_pure(&psi, &tr_b).unwrap();
            assert!((a - concurrence_pure(&psi).unwrap()).abs() < 1e-10);
        }
        let not_tp = crate::maps::reduction_map(4).unwrap();
        assert!(matches!(
            phi_concurrence_pure(&psi, &not_tp),
            Err(Error::NotAChannel(_))
        ));
    }
}
