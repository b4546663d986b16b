use thiserror::Error;

/// Errors produced by group construction, action validation and the chi engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication table is not associative at triple ({0}, {1}, {2})")]
    NonAssociative(u64, u64, u64),
    #[error("row or column {0} of the multiplication table is not a bijection")]
    NonBijective(u64),
    #[error("multiplication table has no two-sided identity")]
    MissingIdentity,
    #[error("element {0} has no inverse")]
    MissingInverse(u64),
    #[error("malformed description: {0}")]
    Malformed(String),
    #[error("subgroup is not normal in its parent")]
    NotNormal,
    #[error("element is not central")]
    NotCentral,
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    #[error("group order {0} exceeds the subgroup enumeration bound {1}")]
    SubgroupBound(u64, u64),
    #[error("action axiom violated: {0}")]
    ActionAxiom(String),
    #[error("acting subgroup does not preserve the fixed point set")]
    NotPreserved,
    #[error("tuple sum {sum} is not divisible by the group order {order}")]
    InexactDivision { sum: String, order: u64 },
    #[error("chi order {0} exceeds the configured maximum {1}")]
    OrderTooLarge(u32, u32),
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error("strata do not cover the ambient space: strata chi {strata}, ambient chi {ambient}")]
    Coverage { strata: i64, ambient: i64 },
    #[error("refinement point lies outside the stratum")]
    PointOutside,
    #[error("group order overflows the element index space")]
    OrderOverflow,
    #[error("operands belong to different groups")]
    GroupMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
