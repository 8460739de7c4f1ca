//! Data-parallel drivers over independent proofs.
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! pool; without it every function runs on the calling thread. The `_sequential`
//! variants are always available so the two can be compared.

use crate::document::{Body, ProofDocument};
use crate::hilbert::check_hilbert;
use crate::logic::LogicSpec;
use crate::natded::{check_nd_with, CheckOptions, Derivation};
use crate::normalize::{normalize_traced, Normalization, NormalizeError};
use crate::report::CheckReport;

/// Maps `f` over `items`, in parallel when the feature is enabled. Output order
/// matches input order.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Checks a document in its own logic.
pub fn check_document(doc: &ProofDocument, options: CheckOptions) -> CheckReport {
    match &doc.body {
        Body::Nd(d) => check_nd_with(d, &doc.logic, options),
        Body::Hilbert { proof, .. } => check_hilbert(proof, &doc.logic, &doc.assumption_set()),
    }
}

pub fn check_all(docs: &[ProofDocument], options: CheckOptions) -> Vec<CheckReport> {
    map(docs, |d| check_document(d, options))
}

pub fn check_all_sequential(docs: &[ProofDocument], options: CheckOptions) -> Vec<CheckReport> {
    map_sequential(docs, |d| check_document(d, options))
}

pub fn normalize_all(ds: &[Derivation], logic: &LogicSpec) -> Vec<Result<Normalization, NormalizeError>> {
    map(ds, |d| normalize_traced(d, logic))
}

pub fn normalize_all_sequential(
    ds: &[Derivation],
    logic: &LogicSpec,
) -> Vec<Result<Normalization, NormalizeError>> {
    map_sequential(ds, |d| normalize_traced(d, logic))
}
