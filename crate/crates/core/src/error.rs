use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("identity law fails at ({row}, {col}): {side} identity sum is {value}")]
    IdentityLaw {
        side: &'static str,
        row: usize,
        col: usize,
        value: String,
    },

    #[error("associativity fails for (b{i} b{j}) b{k} vs b{i} (b{j} b{k}) at coordinate {m}")]
    Associativity {
        i: usize,
        j: usize,
        k: usize,
        m: usize,
    },

    #[error("identity support is empty")]
    EmptyIdentity,

    #[error("star is not an involutive permutation at index {0}")]
    StarNotInvolution(usize),

    #[error("star moves identity index {0} outside the identity support")]
    StarMovesIdentity(usize),

    #[error("operation requires an involution but the algebra has none")]
    StarAbsent,

    #[error("algebra is not of scheme type at index {index}: {reason}")]
    NotSchemeType { index: usize, reason: String },

    #[error("index {0} occurs in more than one block")]
    Overlap(usize),

    #[error("index {0} is not covered by any block")]
    IncompleteCover(usize),

    #[error("partition contains an empty block")]
    EmptyBlock,

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("seed family contains an empty set")]
    EmptySeed,

    #[error("seed {0:?} mixes identity and non-identity indices")]
    MixedSeed(Vec<usize>),

    #[error("partition is not a semifusion")]
    NotSemifusion,

    #[error("partition is not a fusion")]
    NotFusion,

    #[error("identity support is not a union of blocks")]
    IdentityNotUnion,

    #[error("rank {rank} exceeds the configured cap {cap}")]
    CapExceeded { rank: usize, cap: usize },

    #[error("brute-force search found no unique coarsest partition")]
    NoUniqueCoarsest,

    #[error("coherence violated for color {color}: pairs {first:?} and {second:?} have different 2-path counts")]
    Coherence {
        color: usize,
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("transpose of color {0} is not a color class")]
    TransposeNotColor(usize),

    #[error("color {0} occurs both on and off the diagonal")]
    FiberCondition(usize),

    #[error("color {0} does not occur in the relation matrix")]
    MissingColor(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("element {0} is not in the group")]
    NotAnElement(String),

    #[error("division by the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("polynomial {0} is reducible")]
    Reducible(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("minimal polynomial does not annihilate the regular matrix at basis vector {0}")]
    NotAnnihilated(usize),
}
