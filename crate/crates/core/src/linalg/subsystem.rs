//! Tensor-factor bookkeeping.
//!
//! Indices are row-major with the first tensor factor most significant:
//! for dims `[d0, d1, .., d_{N-1}]` the flat index of the multi-index
//! `(i0, .., i_{N-1})` is `((i0 * d1 + i1) * d2 + ..)`.

use serde::{Deserialize, Serialize};

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Local dimensions of the tensor factors of a Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::BadDim("dimension profile is empty".into()));
        }
        if dims.contains(&0) {
            return Err(Error::BadDim(format!("zero local dimension in {dims:?}")));
        }
        Ok(Self(dims))
    }

    /// `d ⊗ d`
    pub fn bipartite(d: usize) -> Self {
        Self(vec![d, d])
    }

    pub fn uniform(d: usize, parties: usize) -> Self {
        Self(vec![d; parties])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn local(&self, k: usize) -> usize {
        self.0[k]
    }

    /// Dimension profile of two copies: system factors then primed factors.
    pub fn doubled(&self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&self.0);
        Self(v)
    }

    pub fn select(&self, keep: &[usize]) -> Self {
        Self(keep.iter().map(|&k| self.0[k]).collect())
    }

    pub fn check_matrix(&self, m: &CMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::DimMismatch(format!(
                "matrix {}x{} does not match dims {:?}",
                m.rows(),
                m.cols(),
                self.0
            )));
        }
        Ok(())
    }

    /// Validates an index set: in range, no repeats. Returns it sorted.
    pub fn check_subset(&self, set: &[usize]) -> Result<Vec<usize>> {
        let mut s = set.to_vec();
        s.sort_unstable();
        for w in s.windows(2) {
            if w[0] == w[1] {
                return Err(Error::BadPartition(format!("repeated subsystem {}", w[0])));
            }
        }
        if let Some(&bad) = s.iter().find(|&&k| k >= self.parties()) {
            return Err(Error::BadPartition(format!(
                "subsystem {bad} out of range for {} parties",
                self.parties()
            )));
        }
        Ok(s)
    }

    fn strides(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut s = vec![1; n];
        for k in (0..n.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.0[k + 1];
        }
        s
    }

    /// Splits a flat index into its multi-index.
    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for k in (0..self.0.len()).rev() {
            out[k] = idx % self.0[k];
            idx /= self.0[k];
        }
        out
    }

    pub fn flat(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// All nonempty proper subsets of the parties, as sorted index lists,
    /// in increasing bitmask order.
    pub fn proper_subsets(&self) -> Vec<Vec<usize>> {
        let n = self.parties();
        (1..(1usize << n) - 1)
            .map(|mask| (0..n).filter(|&k| mask >> k & 1 == 1).collect())
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Dims {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Dims::new(v)
    }
}

/// Reduced operator on the subsystems in `keep` (kept in ascending order).
pub fn partial_trace(m: &CMatrix, dims: &Dims, keep: &[usize]) -> Result<CMatrix> {
    dims.check_matrix(m)?;
    let keep = dims.check_subset(keep)?;
    if keep.is_empty() {
        return Err(Error::BadPartition("nothing to keep".into()));
    }
    let traced: Vec<usize> = (0..dims.parties()).filter(|k| !keep.contains(k)).collect();
    let kd = dims.select(&keep);
    let td = dims.select(&traced);
    let strides = dims.strides();
    let offset = |sub: &[usize], sd: &Dims, idx: usize| -> usize {
        sd.digits(idx)
            .iter()
            .zip(sub)
            .map(|(&i, &k)| i * strides[k])
            .sum()
    };
    let nk = kd.total();
    let nt = if traced.is_empty() { 1 } else { td.total() };
    let kept_off: Vec<usize> = (0..nk).map(|i| offset(&keep, &kd, i)).collect();
    let traced_off: Vec<usize> = if traced.is_empty() {
        vec![0]
    } else {
        (0..nt).map(|i| offset(&traced, &td, i)).collect()
    };
    Ok(CMatrix::from_fn(nk, nk, |i, j| {
        traced_off
            .iter()
            .map(|&t| m[(kept_off[i] + t, kept_off[j] + t)])
            .sum()
    }))
}

/// Transposes the tensor factors listed in `flip`.
pub fn partial_transpose(m: &CMatrix, dims: &Dims, flip: &[usize]) -> Result<CMatrix> {
    dims.check_matrix(m)?;
    let flip = dims.check_subset(flip)?;
    let n = dims.total();
    let mut out = CMatrix::zeros(n, n);
    for a in 0..n {
        let da = dims.digits(a);
        for b in 0..n {
            let db = dims.digits(b);
            let (mut ra, mut rb) = (da.clone(), db.clone());
            for &k in &flip {
                ra[k] = db[k];
                rb[k] = da[k];
            }
            out[(dims.flat(&ra), dims.flat(&rb))] = m[(a, b)];
        }
    }
    Ok(out)
}

/// Index map for a subsystem permutation: new factor `k` is old factor
/// `perm[k]`. Returns (new dims, map from new flat index to old flat index).
pub fn permutation_map(dims: &Dims, perm: &[usize]) -> Result<(Dims, Vec<usize>)> {
    if perm.len() != dims.parties() {
        return Err(Error::BadPartition(format!(
            "permutation of length {} for {} parties",
            perm.len(),
            dims.parties()
        )));
    }
    let checked = dims.check_subset(perm)?;
    debug_assert_eq!(checked.len(), perm.len());
    let new_dims = dims.select(perm);
    let map = (0..dims.total())
        .map(|new_idx| {
            let nd = new_dims.digits(new_idx);
            let mut od = vec![0; perm.len()];
            for (k, &p) in perm.iter().enumerate() {
                od[p] = nd[k];
            }
            dims.flat(&od)
        })
        .collect();
    Ok((new_dims, map))
}

/// Relabels tensor factors; new factor `k` is old factor `perm[k]`.
pub fn permute_subsystems(m: &CMatrix, dims: &Dims, perm: &[usize]) -> Result<CMatrix> {
    dims.check_matrix(m)?;
    let (_, map) = permutation_map(dims, perm)?;
    let n = dims.total();
    Ok(CMatrix::from_fn(n, n, |i, j| m[(map[i], map[j])]))
}

pub fn permute_vector(v: &[C64], dims: &Dims, perm: &[usize]) -> Result<Vec<C64>> {
    if v.len() != dims.total() {
        return Err(Error::DimMismatch(format!(
            "vector of length {} for dims {:?}",
            v.len(),
            dims.as_slice()
        )));
    }
    let (_, map) = permutation_map(dims, perm)?;
    Ok(map.iter().map(|&o| v[o]).collect())
}

/// Tr_S(M) ⊗ 1_S with the identity placed back on the traced factors, so the
/// result lives on the full space again.
pub fn trace_and_pad(m: &CMatrix, dims: &Dims, traced: &[usize]) -> Result<CMatrix> {
    dims.check_matrix(m)?;
    let traced = dims.check_subset(traced)?;
    let keep: Vec<usize> = (0..dims.parties()).filter(|k| !traced.contains(k)).collect();
    let n = dims.total();
    if keep.is_empty() {
        return Ok(CMatrix::identity(n).scale(m.trace()));
    }
    let reduced = partial_trace(m, dims, &keep)?;
    embed(&reduced, dims, &keep)
}

/// Places an operator acting on the factors `on` (ascending) into the full
/// space, tensored with identities elsewhere.
pub fn embed(op: &CMatrix, dims: &Dims, on: &[usize]) -> Result<CMatrix> {
    let on = dims.check_subset(on)?;
    let od = dims.select(&on);
    if !op.is_square() || op.rows() != od.total() {
        return Err(Error::DimMismatch("embedded operator size".into()));
    }
    let n = dims.total();
    let mut out = CMatrix::zeros(n, n);
    let sub_index = |digits: &[usize]| -> usize {
        on.iter().fold(0, |acc, &k| acc * dims.local(k) + digits[k])
    };
    for a in 0..n {
        let da = dims.digits(a);
        let ia = sub_index(&da);
        for b in 0..n {
            let db = dims.digits(b);
            let same_rest = (0..dims.parties())
                .filter(|k| !on.contains(k))
                .all(|k| da[k] == db[k]);
            if same_rest {
                out[(a, b)] = op[(ia, sub_index(&db))];
            }
        }
    }
    Ok(out)
}

/// Unnormalized sum_i |i>|i> on `d ⊗ d`.
pub fn maximally_entangled_unnormalized(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = C64::new(1.0, 0.0);
    }
    v
}
