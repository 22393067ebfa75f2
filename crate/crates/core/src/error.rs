use thiserror::Error;

use crate::roots::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank {rank} is not supported for family {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("{root} is not a root of {system}")]
    NotARoot { root: String, system: String },
    #[error("{root} is not a simple root defining an abelian nilradical of {system}")]
    NotAbelianNilradical { root: String, system: String },
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("roots {0} and {1} are not strongly orthogonal")]
    NotStronglyOrthogonal(String, String),
    #[error("roots {0} and {1} have overlapping supports")]
    OverlappingSupports(String, String),
    #[error("signed permutation {0} is not an involution")]
    NotInvolution(String),
    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix does not lie in the nilradical of the Borel subalgebra")]
    NotInNilradical,
    #[error("matrix entries are not constant")]
    NotConstant,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("{root} does not lie in {nilradical}")]
    OutsideNilradical { root: String, nilradical: String },
    #[error("labels belong to different nilradicals")]
    NilradicalMismatch,
    #[error("odd numerator {numerator} in dimension formula for {label}")]
    OddNumerator { label: String, numerator: usize },
    #[error("integrity failure: {0}")]
    Integrity(String),
}
