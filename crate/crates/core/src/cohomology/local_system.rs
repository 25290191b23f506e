use crate::error::{Error, Result};
use crate::numeric::{eig_unit_circle, Matrix, NumConfig, Scalar};
use crate::surface::SurfaceData;

/// A representation of the punctured-surface group: one invertible matrix per generator.
#[derive(Debug, Clone)]
pub struct LocalSystem<S> {
    pub surface: SurfaceData,
    matrices: Vec<Matrix<S>>,
    inverses: Vec<Matrix<S>>,
}

impl<S: Scalar> LocalSystem<S> {
    /// Validates shapes, invertibility, the surface relation, and quasi-unitarity of every meridian.
    pub fn new(surface: SurfaceData, matrices: Vec<Matrix<S>>, cfg: &NumConfig) -> Result<Self> {
        let sys = Self::without_spectral_check(surface, matrices, cfg)?;
        for p in 0..sys.surface.num_punctures() {
            let t = sys.meridian(p);
            eig_unit_circle(t, cfg).map_err(|e| match e {
                Error::NotQuasiUnitary(msg) => Error::NotQuasiUnitary(format!(
                    "{}: {msg}",
                    sys.surface.generator_name(sys.surface.meridian_index(p))
                )),
                Error::IrrationalRotation(msg) => Error::IrrationalRotation(format!(
                    "{}: {msg}",
                    sys.surface.generator_name(sys.surface.meridian_index(p))
                )),
                other => other,
            })?;
        }
        Ok(sys)
    }

    /// Validates everything except the spectral condition on meridians.
    pub fn without_spectral_check(
        surface: SurfaceData,
        matrices: Vec<Matrix<S>>,
        cfg: &NumConfig,
    ) -> Result<Self> {
        let ngen = surface.num_generators();
        if matrices.len() != ngen {
            return Err(Error::Input(format!(
                "expected {ngen} monodromy matrices, got {}",
                matrices.len()
            )));
        }
        let n = matrices.first().map_or(0, Matrix::rows);
        let mut inverses = Vec::with_capacity(ngen);
        for (i, m) in matrices.iter().enumerate() {
            let name = surface.generator_name(i);
            if m.rows() != n || m.cols() != n {
                return Err(Error::Input(format!(
                    "matrix for {name} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
            let inv = m
                .inverse(cfg.tolerance)
                .map_err(|_| Error::Input(format!("matrix for {name} is not invertible")))?;
            inverses.push(inv);
        }
        let sys = LocalSystem {
            surface,
            matrices,
            inverses,
        };
        if n > 0
            && !sys
                .relation_product()
                .is_identity(cfg.tolerance * sys.scale())
        {
            return Err(Error::RelationViolated(sys.surface.relation_anchor()));
        }
        Ok(sys)
    }

    /// Trusted constructor for systems whose relation holds by construction.
    pub(crate) fn from_parts(
        surface: SurfaceData,
        matrices: Vec<Matrix<S>>,
        inverses: Vec<Matrix<S>>,
    ) -> Self {
        LocalSystem {
            surface,
            matrices,
            inverses,
        }
    }

    pub fn rank(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::rows)
    }

    pub fn matrices(&self) -> &[Matrix<S>] {
        &self.matrices
    }

    pub fn matrix(&self, generator: usize) -> &Matrix<S> {
        &self.matrices[generator]
    }

    pub fn inverse(&self, generator: usize) -> &Matrix<S> {
        &self.inverses[generator]
    }

    pub fn meridian(&self, p: usize) -> &Matrix<S> {
        &self.matrices[self.surface.meridian_index(p)]
    }

    fn scale(&self) -> f64 {
        self.matrices
            .iter()
            .chain(&self.inverses)
            .map(Matrix::max_abs)
            .fold(1.0, f64::max)
            .powi(4)
    }

    /// `prod [A_i, B_i] * prod T_p`
    pub fn relation_product(&self) -> Matrix<S> {
        let mut acc = Matrix::identity(self.rank());
        for letter in self.surface.relation_word() {
            let m = if letter.inverse {
                &self.inverses[letter.generator]
            } else {
                &self.matrices[letter.generator]
            };
            acc = acc.mul(m);
        }
        acc
    }

    /// The dual representation `g -> (rho(g)^T)^{-1}`.
    pub fn dual(&self) -> Self {
        LocalSystem {
            surface: self.surface.clone(),
            matrices: self.inverses.iter().map(Matrix::transpose).collect(),
            inverses: self.matrices.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Multiplies generator matrices by scalars (a rank-one twist); inverses are updated accordingly.
    pub fn twisted(&self, factors: &[S]) -> Self {
        LocalSystem {
            surface: self.surface.clone(),
            matrices: self
                .matrices
                .iter()
                .zip(factors)
                .map(|(m, f)| m.scale(f))
                .collect(),
            inverses: self
                .inverses
                .iter()
                .zip(factors)
                .map(|(m, f)| m.scale(&(S::one() / f.clone())))
                .collect(),
        }
    }
}
