use thiserror::Error;

use crate::numeric::scalar::ParseScalarError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("not quasi-unitary: {0}")]
    NotQuasiUnitary(String),
    #[error("irrational rotation unsupported: {0}")]
    IrrationalRotation(String),
    #[error("relation violated at generator {0}")]
    RelationViolated(String),
    #[error("cover images do not generate the group")]
    NonGenerating,
    #[error("bad group: {0}")]
    BadGroup(String),
    #[error("covering genus is not an integer (chi = {0})")]
    NonIntegralGenus(i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error(
        "obstruction: constant radial coefficient g0 = {g0} cannot be removed at weight k = {k}"
    )]
    Obstruction { g0: String, k: i64 },
    #[error("excluded weight: beta = {beta}, k = {k} gives beta*(k-1) = 0")]
    ExcludedWeight { beta: String, k: i64 },
    #[error("residue target not in the image of N on W0")]
    NotInImage,
    #[error("not equivariant: {0}")]
    NotEquivariant(String),
    #[error("d^2 != 0 at degree {0}")]
    NotComplex(usize),
    #[error("not a chain map at degree {0}")]
    NotChainMap(usize),
    #[error("insufficient samples: need at least {need}, got {got}")]
    InsufficientSamples { need: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error("internal invariant failure: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    At { path: String, source: Box<Error> },
}

impl Error {
    /// Attaches a JSON-pointer style position; nested positions are joined.
    pub fn at(self, path: impl Into<String>) -> Error {
        let outer = path.into();
        match self {
            Error::At { path, source } => {
                let sep = if path.starts_with('[') { "" } else { "." };
                Error::At {
                    path: format!("{outer}{sep}{path}"),
                    source,
                }
            }
            e => Error::At {
                path: outer,
                source: Box::new(e),
            },
        }
    }

    /// The error without position wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            e => e,
        }
    }

    /// Process exit code for this error: 2 for internal invariant failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) | Error::NonIntegralGenus(_) => 2,
            Error::At { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
