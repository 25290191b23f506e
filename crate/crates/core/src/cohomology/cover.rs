//! The direct image along a finite Galois cover, seen downstairs as `V ⊗ C[G]`.

use num::rational::Ratio;
use serde::{Deserialize, Serialize};

use super::global::{
    common_invariants, global_chi, global_h, stalk_dim, CohomologyReport, StalkModel,
};
use super::LocalSystem;
use crate::error::{Error, Result};
use crate::numeric::{ratio_str, Matrix, NumConfig, Scalar};
use crate::surface::CoveringDatum;

/// Generator matrices `A ⊗ L_{phi(gen)}`; index `(i, g)` of the tensor lands at `i |G| + g`.
pub fn induced_cover_system<S: Scalar>(
    sys: &LocalSystem<S>,
    cover: &CoveringDatum,
) -> Result<LocalSystem<S>> {
    let (group, images) = cover.finite_group().ok_or_else(|| {
        Error::Unsupported("induced systems need a finite group; use the character family".into())
    })?;
    if images.len() != sys.matrices().len() {
        return Err(Error::Input(
            "cover and local system have different generator counts".into(),
        ));
    }
    let mut mats = Vec::with_capacity(images.len());
    let mut invs = Vec::with_capacity(images.len());
    for (gen, &g) in images.iter().enumerate() {
        let reg: Matrix<S> = group.regular_rep(g);
        mats.push(sys.matrix(gen).kron(&reg));
        invs.push(sys.inverse(gen).kron(&reg.transpose()));
    }
    Ok(LocalSystem::from_parts(sys.surface.clone(), mats, invs))
}

/// Both stalk models side by side plus the pieces of the comparison sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverComparison {
    pub extension_of_pullback: CohomologyReport,
    pub pullback_of_extension: CohomologyReport,
    /// `dim Q_p` per puncture (unnormalized), the cokernel of small stalk into big stalk.
    pub quotient_dims: Vec<usize>,
    /// Rank of evaluation of big global sections into `sum Q_p`.
    pub evaluation_rank: usize,
    pub divergent: bool,
}

/// `I_n ⊗ (1/m) sum_k L_g^k` for `g` of order `m`.
fn coset_average<S: Scalar>(sys_rank: usize, cover: &CoveringDatum, p: usize) -> Matrix<S> {
    let (group, images) = cover.finite_group().expect("finite cover");
    let g = images[cover.base.meridian_index(p)];
    let order = group.element_order(g);
    let mut avg = Matrix::<S>::zeros(group.order(), group.order());
    for k in 0..order {
        avg = avg.add(&group.regular_rep(group.pow(g, k)));
    }
    let avg = avg.scale(&S::from_ratio(Ratio::new(1, order as i64)));
    Matrix::identity(sys_rank).kron(&avg)
}

pub fn compare_stalk_models<S: Scalar>(
    sys: &LocalSystem<S>,
    cover: &CoveringDatum,
    cfg: &NumConfig,
) -> Result<CoverComparison> {
    let inv = cover.validate()?;
    let order = cover.group_order().expect("validated finite cover");
    let big_sys = induced_cover_system(sys, cover)?;
    let big = global_h(&big_sys, cfg)?;
    let nbig = big_sys.rank();
    let sections = common_invariants(nbig, big_sys.matrices(), cfg);
    let mut quotient_dims = Vec::new();
    let mut evals = Vec::new();
    for p in 0..sys.surface.num_punctures() {
        let complement = Matrix::identity(nbig).sub(&coset_average::<S>(sys.rank(), cover, p));
        let t_big = big_sys.meridian(p);
        let big_stalk = stalk_dim(t_big, cfg);
        let small_stalk = stalk_dim(sys.meridian(p), cfg) * order / inv.branching[p];
        let q = big_stalk.checked_sub(small_stalk).ok_or_else(|| {
            Error::Internal(format!(
                "small stalk exceeds big stalk at puncture {}",
                p + 1
            ))
        })?;
        // Q_p is the image of the big stalk under I ⊗ (I - P)
        let stalk_basis = common_invariants(nbig, [t_big], cfg);
        let q_rank = complement.mul(&stalk_basis).rank(cfg.tolerance);
        if q_rank != q {
            return Err(Error::Internal(format!(
                "quotient dimension {q} at puncture {} disagrees with its rank {q_rank}",
                p + 1
            )));
        }
        quotient_dims.push(q);
        evals.push(complement.mul(&sections));
    }
    let evaluation_rank = if evals.is_empty() {
        0
    } else {
        Matrix::vstack(&evals.iter().collect::<Vec<_>>()).rank(cfg.tolerance)
    };
    let total_q: usize = quotient_dims.iter().sum();
    let r = |x: usize| Ratio::from_integer(x as i64);
    let small = CohomologyReport {
        h0: big.h0 - r(evaluation_rank),
        h1: big.h1 + r(total_q - evaluation_rank),
        h2: big.h2,
        chi: big.chi - r(total_q),
        normalization: big.normalization,
        model: StalkModel::Base,
    };
    let extension_of_pullback = big.normalized(order, StalkModel::ExtensionOfPullback);
    let pullback_of_extension = small.normalized(order, StalkModel::PullbackOfExtension);
    let divergent = !extension_of_pullback.same_dims(&pullback_of_extension);
    Ok(CoverComparison {
        extension_of_pullback,
        pullback_of_extension,
        quotient_dims,
        evaluation_rank,
        divergent,
    })
}

pub fn l2_cohomology_finite<S: Scalar>(
    sys: &LocalSystem<S>,
    cover: &CoveringDatum,
    model: StalkModel,
    cfg: &NumConfig,
) -> Result<CohomologyReport> {
    match model {
        StalkModel::Base => Err(Error::InvalidArgument("choose a cover stalk model".into())),
        StalkModel::ExtensionOfPullback => {
            cover.validate()?;
            let order = cover.group_order().expect("validated finite cover");
            Ok(global_h(&induced_cover_system(sys, cover)?, cfg)?.normalized(order, model))
        }
        StalkModel::PullbackOfExtension => {
            Ok(compare_stalk_models(sys, cover, cfg)?.pullback_of_extension)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiemannHurwitz {
    #[serde(with = "ratio_str")]
    pub lhs: Ratio<i64>,
    #[serde(with = "ratio_str")]
    pub rhs: Ratio<i64>,
    pub equal: bool,
}

/// `chi_G(cover) - sum dim(j_*V)_p / n_p` against `chi(base) - sum dim(j_*V)_p`.
pub fn riemann_hurwitz_check<S: Scalar>(
    sys: &LocalSystem<S>,
    cover: &CoveringDatum,
    cfg: &NumConfig,
) -> Result<RiemannHurwitz> {
    let inv = cover.validate()?;
    let small = l2_cohomology_finite(sys, cover, StalkModel::PullbackOfExtension, cfg)?;
    let mut lhs = small.chi;
    let mut rhs = Ratio::from_integer(global_chi(sys, cfg));
    for p in 0..sys.surface.num_punctures() {
        let stalk = stalk_dim(sys.meridian(p), cfg) as i64;
        lhs -= Ratio::new(stalk, inv.branching[p] as i64);
        rhs -= Ratio::from_integer(stalk);
    }
    Ok(RiemannHurwitz {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}
