use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("lattice is not contained in the ambient lattice")]
    NotSublattice,

    #[error("quotient is infinite: rank {sup} over rank {sub}")]
    InfiniteQuotient { sup: usize, sub: usize },

    #[error("point {0} is not in the lattice")]
    NotInLattice(String),

    #[error("origin must belong to the set")]
    OriginMissing,

    #[error("origin is not an extremal point of the hull; translate by an extremal point first")]
    OriginNotExtremal,

    #[error("region is unbounded")]
    UnboundedRegion,

    #[error("size budget of {budget} points exceeded")]
    BudgetExceeded { budget: usize },

    #[error("growth table budget of {budget} points exceeded after {completed:?}")]
    PartialTable { budget: usize, completed: Vec<usize> },

    #[error("search budget of {budget} nodes exceeded")]
    SearchBudget { budget: u64 },

    #[error("group of order {order} is beyond the search budget; known bound m(1+log|G|/m) = {bound:.3}")]
    DavenportBudget { order: u64, bound: f64 },

    #[error("subset budget exceeded: 2^{members} subsets")]
    SubsetBudget { members: usize },

    #[error("membership is inconclusive after {cap} layers")]
    Inconclusive { cap: usize },

    #[error("minimal-element family is incomplete (cap {cap} reached)")]
    IncompleteFamily { cap: usize },

    #[error("hull is not a simplex")]
    NotSimplex,

    #[error("table too short: {len} entries, need {needed}")]
    TableTooShort { len: usize, needed: usize },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
