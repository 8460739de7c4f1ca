//! Translations between Hilbert proofs and natural-deduction derivations.

mod to_hilbert;
mod to_nd;

use thiserror::Error;

pub use to_hilbert::nd_to_hilbert;
pub use to_nd::{axiom_derivation, congruence_half, hilbert_to_nd};

use crate::hilbert::{BuildError, DeductionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("input is not accepted: {0}")]
    Rejected(String),
    #[error("{rule} has no counterpart in {logic}")]
    Unavailable { rule: String, logic: String },
    #[error("internal translation error: {0}")]
    Internal(String),
}

impl From<BuildError> for TranslateError {
    fn from(e: BuildError) -> Self {
        TranslateError::Internal(e.to_string())
    }
}

impl From<DeductionError> for TranslateError {
    fn from(e: DeductionError) -> Self {
        TranslateError::Internal(e.to_string())
    }
}

fn rejection(report: &crate::report::CheckReport) -> TranslateError {
    let first = report
        .diagnostics
        .first()
        .map_or_else(|| "no conclusion".to_string(), |d| d.to_string());
    TranslateError::Rejected(first)
}
