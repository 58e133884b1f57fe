use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::generators::{generate, Family, NamedGraphSpec};
use crate::graph::PieceKind;
use crate::iso::ForbiddenFamily;

/// Whether pieces may overlap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    Cover,
    Partition,
}

/// The eight cover/partition invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Invariant {
    Inspc,
    Inspp,
    Insc,
    Insp,
    Inpc,
    Inpp,
    Ispc,
    Ispp,
}

impl Invariant {
    pub const ALL: [Invariant; 8] = [
        Invariant::Inspc,
        Invariant::Inspp,
        Invariant::Insc,
        Invariant::Insp,
        Invariant::Inpc,
        Invariant::Inpp,
        Invariant::Ispc,
        Invariant::Ispp,
    ];

    pub fn from_parts(kind: PieceKind, mode: Mode) -> Self {
        use Invariant::*;
        match (kind, mode) {
            (PieceKind::SPAny, Mode::Cover) => Inspc,
            (PieceKind::SPAny, Mode::Partition) => Inspp,
            (PieceKind::Star, Mode::Cover) => Insc,
            (PieceKind::Star, Mode::Partition) => Insp,
            (PieceKind::Path, Mode::Cover) => Inpc,
            (PieceKind::Path, Mode::Partition) => Inpp,
            (PieceKind::IsometricPath, Mode::Cover) => Ispc,
            (PieceKind::IsometricPath, Mode::Partition) => Ispp,
        }
    }

    pub fn kind(self) -> PieceKind {
        use Invariant::*;
        match self {
            Inspc | Inspp => PieceKind::SPAny,
            Insc | Insp => PieceKind::Star,
            Inpc | Inpp => PieceKind::Path,
            Ispc | Ispp => PieceKind::IsometricPath,
        }
    }

    pub fn mode(self) -> Mode {
        use Invariant::*;
        match self {
            Inspc | Insc | Inpc | Ispc => Mode::Cover,
            Inspp | Insp | Inpp | Ispp => Mode::Partition,
        }
    }

    pub fn name(self) -> &'static str {
        use Invariant::*;
        match self {
            Inspc => "inspc",
            Inspp => "inspp",
            Insc => "insc",
            Insp => "insp",
            Inpc => "inpc",
            Inpp => "inpp",
            Ispc => "ispc",
            Ispp => "ispp",
        }
    }

    /// Families of the characterizing forbidden family at parameter `n`.
    pub fn target_families(self) -> &'static [Family] {
        use Family::*;
        use Invariant::*;
        match self {
            Inspc => &[Complete, SStar, F1, F2, F3],
            Inspp => &[Complete, SStar, STilde, F1, F2, F4, F5],
            Insc => &[Complete, SStar, Path],
            Insp => &[Complete, SStar, STilde, Path],
            Inpc | Ispc => &[Complete, Star, F1, F2],
            Inpp | Ispp => &[Complete, Star, F1, F2, F4, F5],
        }
    }

    /// The forbidden family whose `≤`-predecessors are exactly the families
    /// bounding this invariant, at parameter `n` (`n >= 2`).
    pub fn target(self, n: usize) -> ForbiddenFamily {
        let members = self
            .target_families()
            .iter()
            .map(|&f| generate(&NamedGraphSpec::new(f, n)).expect("n >= 2"))
            .collect();
        ForbiddenFamily::named(members, format!("{}:{}", self.name(), n))
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Invariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Invariant::ALL
            .into_iter()
            .find(|i| i.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown invariant `{s}`")))
    }
}
