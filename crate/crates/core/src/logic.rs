//! The base logic WF and its extensions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Extension {
    /// `(A->B) & (B->C) -> (A->C)`
    I,
    /// `(A->B) & (A->C) -> (A -> B&C)`
    C,
    /// `(A->C) & (B->C) -> (A|B -> C)`
    D,
    /// `(A -> B&C) -> (A->B) & (A->C)`
    CHat,
    /// `(A|B -> C) -> (A->C) & (B->C)`
    DHat,
    /// Rule N.
    N,
    /// Rule N2.
    N2,
}

impl Extension {
    pub const ALL: [Extension; 7] = [
        Extension::I,
        Extension::C,
        Extension::D,
        Extension::CHat,
        Extension::DHat,
        Extension::N,
        Extension::N2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Extension::I => "I",
            Extension::C => "C",
            Extension::D => "D",
            Extension::CHat => "CHAT",
            Extension::DHat => "DHAT",
            Extension::N => "N",
            Extension::N2 => "N2",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LogicSpec {
    extensions: BTreeSet<Extension>,
}

impl LogicSpec {
    pub fn new(extensions: impl IntoIterator<Item = Extension>) -> Self {
        LogicSpec {
            extensions: extensions.into_iter().collect(),
        }
    }

    pub fn wf() -> Self {
        Self::default()
    }

    pub fn f() -> Self {
        Self::new([Extension::I, Extension::C, Extension::D])
    }

    /// The nine named logics, in a fixed order.
    pub fn presets() -> Vec<(&'static str, LogicSpec)> {
        use Extension::*;
        vec![
            ("WF", Self::wf()),
            ("WFN", Self::new([N])),
            ("WFN2", Self::new([N2])),
            ("WFCHAT", Self::new([CHat])),
            ("WFDHAT", Self::new([DHat])),
            ("WFI", Self::new([I])),
            ("WFC", Self::new([C])),
            ("WFD", Self::new([D])),
            ("F", Self::f()),
        ]
    }

    pub fn has(&self, ext: Extension) -> bool {
        self.extensions.contains(&ext)
    }

    pub fn extensions(&self) -> impl Iterator<Item = Extension> + '_ {
        self.extensions.iter().copied()
    }

    pub fn is_subset(&self, other: &LogicSpec) -> bool {
        self.extensions.is_subset(&other.extensions)
    }

    /// The two-premise implication rules of plain WF are dropped as soon as one of
    /// N, N2 or I supplies its own replacement.
    pub fn has_basic_congruence_intro(&self) -> bool {
        !(self.has(Extension::N) || self.has(Extension::N2) || self.has(Extension::I))
    }
}

impl fmt::Display for LogicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((name, _)) = Self::presets().into_iter().find(|(_, l)| l == self) {
            return f.write_str(name);
        }
        f.write_str("WF")?;
        for ext in &self.extensions {
            write!(f, "+{}", ext.name())?;
        }
        Ok(())
    }
}

impl Serialize for LogicSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown logic {0:?}; expected a preset (WF, WFN, WFN2, WFCHAT, WFDHAT, WFI, WFC, WFD, F) or WF+EXT+...")]
pub struct UnknownLogic(pub String);

impl FromStr for LogicSpec {
    type Err = UnknownLogic;

    /// Accepts a preset name or an explicit set such as `WF+I+C`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        if let Some((_, logic)) = Self::presets().into_iter().find(|(n, _)| *n == upper) {
            return Ok(logic);
        }
        let mut parts = upper.split('+');
        if parts.next() != Some("WF") {
            return Err(UnknownLogic(s.to_string()));
        }
        let mut extensions = BTreeSet::new();
        for part in parts {
            let ext = Extension::ALL
                .into_iter()
                .find(|e| e.name() == part)
                .ok_or_else(|| UnknownLogic(s.to_string()))?;
            extensions.insert(ext);
        }
        Ok(LogicSpec { extensions })
    }
}
