use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::formula::Formula;

/// Where a diagnostic points: a 1-based Hilbert line, or a child-index path in a
/// derivation tree (empty path = root).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Line(usize),
    Node(Vec<usize>),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Node(path) if path.is_empty() => f.write_str("node root"),
            Location::Node(path) => {
                f.write_str("node ")?;
                for (i, step) in path.iter().enumerate() {
                    if i > 0 {
                        f.write_str(".")?;
                    }
                    write!(f, "{step}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Diagnostic {
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Outcome of checking a Hilbert proof or a natural-deduction derivation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckReport {
    pub accepted: bool,
    pub conclusion: Option<Formula>,
    /// Assumptions the conclusion actually rests on.
    pub open_assumptions: BTreeSet<Formula>,
    pub diagnostics: Vec<Diagnostic>,
}

impl CheckReport {
    pub(crate) fn new(
        conclusion: Option<Formula>,
        open_assumptions: BTreeSet<Formula>,
        diagnostics: Vec<Diagnostic>,
    ) -> Self {
        CheckReport {
            accepted: diagnostics.is_empty() && conclusion.is_some(),
            conclusion,
            open_assumptions,
            diagnostics,
        }
    }

    pub fn depends_on_assumptions(&self) -> bool {
        !self.open_assumptions.is_empty()
    }

    pub fn has_diagnostic(&self, needle: &str) -> bool {
        self.diagnostics.iter().any(|d| d.message.contains(needle))
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.accepted { "accepted" } else { "rejected" })?;
        if let Some(c) = &self.conclusion {
            writeln!(f, "conclusion: {c}")?;
        }
        let open: Vec<String> = self.open_assumptions.iter().map(|a| a.to_string()).collect();
        writeln!(f, "open assumptions: {{{}}}", open.join(", "))?;
        for d in &self.diagnostics {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}
