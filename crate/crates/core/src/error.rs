use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A reference distribution has a zero component where a positive one is required.
    #[error("singular input: component {index} of the reference distribution is zero")]
    Singular { index: usize },

    /// The loss estimate would divide by a zero sampling probability.
    #[error("division by zero: arm {arm} has zero sampling probability")]
    DivisionByZero { arm: usize },

    /// An iterative solver stopped before reaching its tolerance.
    #[error("numerical failure in {what}: residual {residual:e}{}", fmt_at(.at))]
    Numerical {
        what: &'static str,
        residual: f64,
        /// (episode, round) where the failure happened, when known.
        at: Option<(usize, u64)>,
    },

    /// Adaptive quadrature did not reach its target tolerance.
    #[error("quadrature did not converge: achieved relative error {achieved:e}")]
    Quadrature { achieved: f64 },

    /// No admissible parameter bundle exists (empty δ interval or d·ε ≥ 1).
    #[error("infeasible parameters: {message}")]
    Infeasible {
        message: String,
        /// Smallest number of rounds per episode that makes the interval non-empty.
        min_rounds: Option<u64>,
    },

    /// The regret bound is vacuous because d·ε ≥ 1.
    #[error("vacuous bound: d·ε = {d_eps} ≥ 1")]
    VacuousBound { d_eps: f64 },
}

fn fmt_at(at: &Option<(usize, u64)>) -> String {
    match at {
        Some((s, t)) => format!(" at episode {s}, round {t}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Attaches an episode index to a numerical failure that already carries a round.
    pub fn in_episode(self, episode: usize) -> Self {
        match self {
            Error::Numerical { what, residual, at } => Error::Numerical {
                what,
                residual,
                at: Some((episode, at.map_or(0, |(_, t)| t))),
            },
            other => other,
        }
    }

    pub(crate) fn at_round(self, round: u64) -> Self {
        match self {
            Error::Numerical { what, residual, .. } => Error::Numerical {
                what,
                residual,
                at: Some((0, round)),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
