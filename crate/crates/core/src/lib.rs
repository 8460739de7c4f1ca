//! Proof kernel for the weak subintuitionistic logic WF and its extensions.
//!
//! Hilbert proofs and natural-deduction derivations can be checked, translated
//! into each other, and (for natural deduction) normalized.

pub mod batch;
pub mod document;
pub mod formula;
pub mod generate;
pub mod hilbert;
pub mod logic;
pub mod natded;
pub mod normalize;
pub mod report;
pub mod translate;

pub use formula::{parse, Formula, ParseError};
pub use logic::{Extension, LogicSpec};
pub use natded::{check_nd, check_nd_with, CheckOptions, Derivation, Inference, NdRule};
pub use report::{CheckReport, Diagnostic, Location};
pub use normalize::{cut_measure, find_cuts, is_normal, normalize, reduce_once, CutMeasure};
