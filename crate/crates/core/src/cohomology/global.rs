use num::rational::Ratio;
use serde::{Deserialize, Serialize};

use super::LocalSystem;
use crate::error::{Error, Result};
use crate::numeric::{ratio_str, Matrix, NumConfig, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Normalization {
    Plain,
    VonNeumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StalkModel {
    Base,
    ExtensionOfPullback,
    PullbackOfExtension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    #[serde(with = "ratio_str")]
    pub h0: Ratio<i64>,
    #[serde(with = "ratio_str")]
    pub h1: Ratio<i64>,
    #[serde(with = "ratio_str")]
    pub h2: Ratio<i64>,
    #[serde(with = "ratio_str")]
    pub chi: Ratio<i64>,
    pub normalization: Normalization,
    pub model: StalkModel,
}

impl CohomologyReport {
    pub fn plain(h0: usize, h1: usize, h2: usize) -> Self {
        let r = |x: usize| Ratio::from_integer(x as i64);
        CohomologyReport {
            h0: r(h0),
            h1: r(h1),
            h2: r(h2),
            chi: r(h0) - r(h1) + r(h2),
            normalization: Normalization::Plain,
            model: StalkModel::Base,
        }
    }

    /// Divides every dimension by `order` and relabels.
    pub fn normalized(&self, order: usize, model: StalkModel) -> Self {
        let d = Ratio::from_integer(order as i64);
        CohomologyReport {
            h0: self.h0 / d,
            h1: self.h1 / d,
            h2: self.h2 / d,
            chi: self.chi / d,
            normalization: Normalization::VonNeumann,
            model,
        }
    }

    pub fn dims(&self) -> [Ratio<i64>; 3] {
        [self.h0, self.h1, self.h2]
    }

    pub fn same_dims(&self, other: &Self) -> bool {
        self.dims() == other.dims()
    }
}

/// `dim ker(T - I)`
pub fn stalk_dim<S: Scalar>(t: &Matrix<S>, cfg: &NumConfig) -> usize {
    t.rows() - t.minus_identity().rank(cfg.tolerance)
}

/// Basis (as columns) of the common fixed space of all matrices, by successive kernel restriction.
pub fn common_invariants<'a, S: Scalar>(
    n: usize,
    matrices: impl IntoIterator<Item = &'a Matrix<S>>,
    cfg: &NumConfig,
) -> Matrix<S> {
    let mut basis = Matrix::<S>::identity(n);
    for m in matrices {
        if basis.cols() == 0 {
            break;
        }
        let image = m.minus_identity().mul(&basis);
        let coeffs = image.kernel_basis(cfg.tolerance);
        if coeffs.len() == basis.cols() {
            continue;
        }
        basis = basis.mul(&Matrix::from_columns(basis.cols(), &coeffs));
    }
    basis
}

/// Dimensions of `H^k(X, j_* V)` from invariants, coinvariants and the Euler characteristic.
pub fn global_h<S: Scalar>(sys: &LocalSystem<S>, cfg: &NumConfig) -> Result<CohomologyReport> {
    let n = sys.rank();
    let h0 = common_invariants(n, sys.matrices(), cfg).cols();
    let transposes: Vec<Matrix<S>> = sys.matrices().iter().map(Matrix::transpose).collect();
    let h2 = common_invariants(n, &transposes, cfg).cols();
    let chi = global_chi(sys, cfg);
    let h1 = h0 as i64 + h2 as i64 - chi;
    if h1 < 0 {
        return Err(Error::Internal(format!(
            "negative h1 from h0 = {h0}, h2 = {h2}, chi = {chi}"
        )));
    }
    Ok(CohomologyReport::plain(h0, h1 as usize, h2))
}

/// `chi = (2 - 2g - s) n + sum_p dim ker(T_p - I)`
pub fn global_chi<S: Scalar>(sys: &LocalSystem<S>, cfg: &NumConfig) -> i64 {
    let stalks: usize = (0..sys.surface.num_punctures())
        .map(|p| stalk_dim(sys.meridian(p), cfg))
        .sum();
    sys.surface.euler_char_open() * sys.rank() as i64 + stalks as i64
}
