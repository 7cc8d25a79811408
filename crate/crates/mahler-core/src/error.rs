//! Error taxonomy shared by all modules.
//!
//! The CLI maps these onto its exit-code contract: domain-type errors exit 2,
//! convergence-type errors exit 3.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A series or product failed to reach its tail target within the term
    /// budget.
    #[error("series budget exceeded after {terms} terms (last |term| = {last:.3e})")]
    BudgetExceeded { terms: usize, last: f64 },

    /// Input outside the operation's stated domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An auxiliary polynomial solve had no clearly smallest root.
    #[error("branch ambiguous: {0}")]
    BranchAmbiguous(String),

    /// Leading coefficient too small relative to the rest of the polynomial.
    #[error("degenerate leading coefficient (|lead|/max = {ratio:.3e})")]
    DegenerateLeading { ratio: f64 },

    /// Weierstrass model with vanishing discriminant.
    #[error("degenerate curve: k^2 = {0} gives zero discriminant")]
    DegenerateCurve(i64),

    /// Point counting requested at a prime of bad reduction.
    #[error("bad prime {0}: divides the model discriminant")]
    BadPrime(u64),

    /// An iterative scheme did not stabilize.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// The functional-equation sign test failed, usually meaning a wrong
    /// conductor or corrupted coefficients.
    #[error("functional equation sign mismatch: {0}")]
    SignMismatch(String),

    /// The y-leading coefficient vanished at a quadrature node even after
    /// perturbing the node set.
    #[error("leading y-coefficient vanishes on the quadrature grid")]
    LeadingVanishes,

    /// An identity sampler could not produce the requested number of
    /// in-domain points.
    #[error("sampler exhausted for identity {0}")]
    SamplerExhausted(String),
}

impl Error {
    /// Whether this error is a domain violation (CLI exit 2) as opposed to a
    /// convergence failure (CLI exit 3).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::BranchAmbiguous(_)
                | Error::DegenerateLeading { .. }
                | Error::DegenerateCurve(_)
                | Error::BadPrime(_)
        )
    }
}
