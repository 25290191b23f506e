//! Local monodromy data at a puncture: quasi-unipotent decomposition, weight filtrations,
//! pullback under `z -> z^n`, growth exponents and Deligne-lattice dimensions.
//!
//! Weight filtrations are centered at 0: a Jordan block of size `m` carries weights `m-1, m-3, ..., 1-m`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::spectral::is_nilpotent;
use crate::numeric::{eig_unit_circle, span_rank, Matrix, NumConfig, RotationNumber, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPart {
    pub alpha: RotationNumber,
    /// Jordan block sizes, largest first.
    pub blocks: Vec<usize>,
}

impl LocalPart {
    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalType {
    pub dim: usize,
    /// Parts sorted by `alpha`, with distinct `alpha`.
    pub parts: Vec<LocalPart>,
}

impl LocalType {
    /// Builds a normalized type: merges equal `alpha`, sorts blocks and parts, drops empty parts.
    pub fn new(parts: impl IntoIterator<Item = (RotationNumber, Vec<usize>)>) -> Self {
        let mut merged: BTreeMap<RotationNumber, Vec<usize>> = BTreeMap::new();
        for (alpha, blocks) in parts {
            merged
                .entry(alpha)
                .or_default()
                .extend(blocks.into_iter().filter(|&b| b > 0));
        }
        let parts: Vec<LocalPart> = merged
            .into_iter()
            .filter(|(_, b)| !b.is_empty())
            .map(|(alpha, mut blocks)| {
                blocks.sort_unstable_by(|a, b| b.cmp(a));
                LocalPart { alpha, blocks }
            })
            .collect();
        let dim = parts.iter().map(LocalPart::dim).sum();
        LocalType { dim, parts }
    }

    pub fn part(&self, alpha: RotationNumber) -> Option<&LocalPart> {
        self.parts.iter().find(|p| p.alpha == alpha)
    }

    pub fn unipotent_blocks(&self) -> &[usize] {
        self.part(RotationNumber::zero()).map_or(&[], |p| &p.blocks)
    }

    pub fn unipotent_dim(&self) -> usize {
        self.unipotent_blocks().iter().sum()
    }
}

/// Spectral type of a quasi-unitary monodromy matrix.
pub fn local_type<S: Scalar>(t: &Matrix<S>, cfg: &NumConfig) -> Result<LocalType> {
    let parts = eig_unit_circle(t, cfg)?;
    let mut out = Vec::new();
    for part in &parts {
        let blocks = part.jordan_blocks();
        for &alpha in &part.rotations {
            out.push((alpha, blocks.clone()));
        }
    }
    let lt = LocalType::new(out);
    if lt.dim != t.rows() {
        return Err(Error::Internal(format!(
            "local type has dimension {} for a {}x{} matrix",
            lt.dim,
            t.rows(),
            t.rows()
        )));
    }
    Ok(lt)
}

/// `dim Gr_k` for the weight filtration of a nilpotent with the given Jordan blocks.
pub fn graded_dims(blocks: &[usize]) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for &m in blocks {
        for t in 0..m {
            *out.entry(m as i64 - 1 - 2 * t as i64).or_insert(0) += 1;
        }
    }
    out
}

/// `dim W_k` from Jordan blocks.
pub fn weight_dim(blocks: &[usize], k: i64) -> usize {
    graded_dims(blocks).range(..=k).map(|(_, d)| d).sum()
}

#[derive(Debug, Clone)]
pub struct WeightFiltration<S> {
    pub dim: usize,
    /// Jordan basis vectors with their weights, ordered by chain.
    pub basis: Vec<(i64, Vec<S>)>,
    /// Jordan chains as (top vector, length).
    pub chains: Vec<(Vec<S>, usize)>,
}

impl<S: Scalar> WeightFiltration<S> {
    pub fn k_min(&self) -> i64 {
        self.basis.iter().map(|b| b.0).min().unwrap_or(0)
    }

    pub fn k_max(&self) -> i64 {
        self.basis.iter().map(|b| b.0).max().unwrap_or(0)
    }

    /// Basis of `W_k`.
    pub fn space(&self, k: i64) -> Vec<Vec<S>> {
        self.basis
            .iter()
            .filter(|(w, _)| *w <= k)
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn graded(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (w, _) in &self.basis {
            *out.entry(*w).or_insert(0) += 1;
        }
        out
    }

    pub fn graded_dim(&self, k: i64) -> usize {
        self.basis.iter().filter(|(w, _)| *w == k).count()
    }

    pub fn blocks(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.chains.iter().map(|c| c.1).collect();
        b.sort_unstable_by(|a, b| b.cmp(a));
        b
    }
}

/// The weight filtration of a nilpotent, built from Jordan chains.
pub fn weight_filtration<S: Scalar>(
    nil: &Matrix<S>,
    cfg: &NumConfig,
) -> Result<WeightFiltration<S>> {
    if !is_nilpotent(nil, cfg) {
        return Err(Error::NotNilpotent);
    }
    let n = nil.rows();
    let tol = cfg.tolerance;
    // kernels K_j = ker N^j, j = 0..=index
    let mut kernels: Vec<Vec<Vec<S>>> = vec![Vec::new()];
    let mut power = Matrix::identity(n);
    while kernels.last().unwrap().len() < n {
        power = power.mul(nil);
        let k = power.kernel_basis(tol);
        if k.len() == kernels.last().unwrap().len() {
            return Err(Error::NotNilpotent);
        }
        kernels.push(k);
    }
    let index = kernels.len() - 1;
    let mut chains: Vec<(Vec<S>, usize)> = Vec::new();
    for j in (1..=index).rev() {
        let mut span: Vec<Vec<S>> = kernels[j - 1].clone();
        for (top, len) in &chains {
            span.push(apply_power(nil, top, len - j));
        }
        let mut rank = span_rank(n, &span, tol);
        for v in &kernels[j] {
            span.push(v.clone());
            let r = span_rank(n, &span, tol);
            if r > rank {
                rank = r;
                chains.push((v.clone(), j));
            } else {
                span.pop();
            }
        }
    }
    let mut basis = Vec::with_capacity(n);
    for (top, len) in &chains {
        let mut v = top.clone();
        for t in 0..*len {
            basis.push((*len as i64 - 1 - 2 * t as i64, v.clone()));
            v = nil.mul_vec(&v);
        }
    }
    if span_rank(
        n,
        &basis.iter().map(|b| b.1.clone()).collect::<Vec<_>>(),
        tol,
    ) != n
    {
        return Err(Error::Internal("Jordan chains do not span".into()));
    }
    Ok(WeightFiltration {
        dim: n,
        basis,
        chains,
    })
}

fn apply_power<S: Scalar>(m: &Matrix<S>, v: &[S], k: usize) -> Vec<S> {
    let mut out = v.to_vec();
    for _ in 0..k {
        out = m.mul_vec(&out);
    }
    out
}

/// Checks the defining properties directly: nested spaces, `N W_k ⊆ W_{k-2}`, and `N^k: Gr_k -> Gr_{-k}` bijective.
pub fn verify_weight_axioms<S: Scalar>(
    nil: &Matrix<S>,
    w: &WeightFiltration<S>,
    cfg: &NumConfig,
) -> bool {
    let n = w.dim;
    let tol = cfg.tolerance;
    let (lo, hi) = (w.k_min().min(0) - 1, w.k_max().max(0) + 1);
    let dim_w = |k: i64| span_rank(n, &w.space(k), tol);
    for k in lo..=hi {
        let wk = w.space(k);
        if dim_w(k) != wk.len() || dim_w(k - 1) > wk.len() {
            return false;
        }
        // N W_k ⊆ W_{k-2}
        let mut span = w.space(k - 2);
        let base = span.len();
        span.extend(wk.iter().map(|v| nil.mul_vec(v)));
        if span_rank(n, &span, tol) != base {
            return false;
        }
    }
    if dim_w(hi) != n || dim_w(lo) != 0 {
        return false;
    }
    for k in 0..=hi {
        let gr_k = dim_w(k) - dim_w(k - 1);
        let gr_mk = dim_w(-k) - dim_w(-k - 1);
        if gr_k != gr_mk {
            return false;
        }
        let below = w.space(-k - 1);
        let mut span = below.clone();
        span.extend(w.space(k).iter().map(|v| apply_power(nil, v, k as usize)));
        if span_rank(n, &span, tol) - below.len() != gr_k {
            return false;
        }
    }
    true
}

/// True iff the two filtrations define the same flag.
pub fn same_flag<S: Scalar>(
    a: &WeightFiltration<S>,
    b: &WeightFiltration<S>,
    cfg: &NumConfig,
) -> bool {
    let lo = a.k_min().min(b.k_min());
    let hi = a.k_max().max(b.k_max());
    (lo..=hi).all(|k| {
        let (wa, wb) = (a.space(k), b.space(k));
        if wa.len() != wb.len() {
            return false;
        }
        let mut both = wa.clone();
        both.extend(wb);
        span_rank(a.dim, &both, cfg.tolerance) == wa.len()
    })
}

/// Local type of the pullback along `z -> z^n`: `alpha -> n alpha mod 1`, blocks merged.
pub fn pullback_local_type(t: &LocalType, n: u64) -> LocalType {
    assert!(n >= 1, "branching order must be positive");
    LocalType::new(t.parts.iter().map(|p| (p.alpha.scale(n), p.blocks.clone())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthExponent {
    pub beta: RotationNumber,
    pub k: i64,
    pub multiplicity: usize,
}

/// `|xi|^2 ~ |z|^{2 beta} |ln |z||^k` exponents of an adapted frame.
pub fn growth_exponents(t: &LocalType) -> Vec<GrowthExponent> {
    let mut out: Vec<GrowthExponent> = Vec::new();
    for part in &t.parts {
        for (k, mult) in graded_dims(&part.blocks).into_iter().rev() {
            out.push(GrowthExponent {
                beta: part.alpha,
                k,
                multiplicity: mult,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDims {
    /// Fiber dimension of every Deligne lattice.
    pub fiber_dim: usize,
    /// `dim M_0 V^0`
    pub d0: usize,
    /// `dim M_{-2} V^{-1}`
    pub d1: usize,
}

/// `dim M_k V^beta`: the part with `alpha = beta mod 1` contributes `W_k`, everything else passes through.
pub fn lattice_dim(t: &LocalType, k: i64, beta: RotationNumber) -> usize {
    match t.part(beta) {
        Some(part) => t.dim - part.dim() + weight_dim(&part.blocks, k),
        None => t.dim,
    }
}

pub fn lattice_dims(t: &LocalType) -> LatticeDims {
    // V^0 and V^{-1} both meet the unipotent part in the residue-0 and residue-(-1) eigenspaces
    let zero = RotationNumber::zero();
    LatticeDims {
        fiber_dim: t.dim,
        d0: lattice_dim(t, 0, zero),
        d1: lattice_dim(t, -2, zero),
    }
}

/// Flat local sections in the L² sense: `dim W_0` of the unipotent part.
pub fn local_h0(t: &LocalType) -> usize {
    weight_dim(t.unipotent_blocks(), 0)
}
