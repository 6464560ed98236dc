use thiserror::Error;

/// Errors shared across the lattice, form and pipeline modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate lattice")]
    DegenerateLattice,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate scaling: multiplier {0} shares a factor with the group order")]
    DegenerateScaling(i64),
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("discriminant {0} is a perfect square; caller must early-exit")]
    SquareDiscriminant(u64),
    #[error("binary form discriminant must be positive and non-square, got {0}")]
    BadFormDiscriminant(i64),
    #[error("lattice is not even or has non-negative determinant")]
    NotBinaryEven,
    #[error("representative prime search exceeded cap {cap} for modulus {modulus}")]
    PrimeSearchCap { cap: u64, modulus: u64 },
    #[error("isomorphism search exceeded its budget; undecided")]
    Undecided,
    #[error("rank must be 20 for the supersingular analysis (got {0}); enable any-rank mode to override")]
    RankNotTwenty(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
