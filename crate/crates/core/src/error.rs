use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("rank mismatch: expected rank {expected}, found rank {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("letter budget exceeded: result would hold {needed} letters, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: usize },

    #[error("degenerate tuple: image {0} is the trivial word")]
    DegenerateTuple(usize),

    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("not a positive automorphism")]
    NotPositive,

    #[error("not cyclically reduced: image {0}")]
    NotCyclicallyReduced(usize),

    #[error("positive peeling stuck at images {0}")]
    PeelingStuck(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("64-bit overflow while computing {0}")]
    Overflow(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("infeasible request: {reason} (estimated {estimated_tuples} candidate tuples)")]
    Infeasible { reason: String, estimated_tuples: u128 },

    #[error("nielsen plateau search exceeded {0} states")]
    PlateauLimit(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
