//! Parabolic first cohomology from Fox-calculus cocycles, an independent check on `global_h`.
//!
//! A cocycle assigns `x_g in V` to each generator. Along the relation word `r`,
//! `x(r) = sum_k P_{k-1} x(l_k)` with `P_k` the prefix product and `x(g^-1) = -rho(g)^-1 x(g)`;
//! cocycles are the solutions of `x(r) = 0`. Parabolic ones additionally have `x_{c_p} in Im(T_p - I)`.

use super::global::common_invariants;
use super::LocalSystem;
use crate::error::{Error, Result};
use crate::numeric::{Matrix, NumConfig, Scalar};

/// Linear constraints (rows) on the stacked unknowns `(x_{a1}, x_{b1}, ..., x_{cs})`.
pub fn parabolic_constraints<S: Scalar>(sys: &LocalSystem<S>, cfg: &NumConfig) -> Matrix<S> {
    let n = sys.rank();
    let ngen = sys.surface.num_generators();
    let mut fox = Matrix::<S>::zeros(n, n * ngen);
    let mut prefix = Matrix::<S>::identity(n);
    for letter in sys.surface.relation_word() {
        let g = letter.generator;
        let block = if letter.inverse {
            prefix.mul(sys.inverse(g)).neg()
        } else {
            prefix.clone()
        };
        for r in 0..n {
            for c in 0..n {
                let cur = fox[(r, g * n + c)].clone();
                fox[(r, g * n + c)] = cur + block[(r, c)].clone();
            }
        }
        let step = if letter.inverse {
            sys.inverse(g)
        } else {
            sys.matrix(g)
        };
        prefix = prefix.mul(step);
    }
    let mut blocks = vec![fox];
    for p in 0..sys.surface.num_punctures() {
        let g = sys.surface.meridian_index(p);
        // Im(T - I) is cut out by the left kernel of T - I
        let annihilators = sys
            .matrix(g)
            .minus_identity()
            .transpose()
            .kernel_basis(cfg.tolerance);
        if annihilators.is_empty() {
            continue;
        }
        let mut rows = Matrix::<S>::zeros(annihilators.len(), n * ngen);
        for (i, w) in annihilators.iter().enumerate() {
            for (c, x) in w.iter().enumerate() {
                rows[(i, g * n + c)] = x.clone();
            }
        }
        blocks.push(rows);
    }
    Matrix::vstack(&blocks.iter().collect::<Vec<_>>())
}

/// `dim Z_par - dim B`, with `dim B = n - h0`.
pub fn parabolic_h1<S: Scalar>(sys: &LocalSystem<S>, cfg: &NumConfig) -> Result<usize> {
    let n = sys.rank();
    let unknowns = n * sys.surface.num_generators();
    let constraints = parabolic_constraints(sys, cfg);
    let cocycles = unknowns - constraints.rank(cfg.tolerance);
    let h0 = common_invariants(n, sys.matrices(), cfg).cols();
    let coboundaries = n - h0;
    cocycles.checked_sub(coboundaries).ok_or_else(|| {
        Error::Internal(format!(
            "cocycle space {cocycles} smaller than coboundaries {coboundaries}"
        ))
    })
}

/// Principal cocycle `x_g = (rho(g) - 1) v` stacked over generators.
pub fn principal_cocycle<S: Scalar>(sys: &LocalSystem<S>, v: &[S]) -> Vec<S> {
    sys.matrices()
        .iter()
        .flat_map(|m| m.minus_identity().mul_vec(v))
        .collect()
}
