//! Three-valued answers for questions the set algebra cannot always decide.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriBool {
    Yes,
    No,
    Unknown,
}

impl TriBool {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriBool::Yes
        } else {
            TriBool::No
        }
    }
    pub fn is_yes(self) -> bool {
        self == TriBool::Yes
    }
    pub fn is_no(self) -> bool {
        self == TriBool::No
    }
    pub fn is_unknown(self) -> bool {
        self == TriBool::Unknown
    }
    pub fn and(self, other: TriBool) -> TriBool {
        use TriBool::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Yes, Yes) => Yes,
            _ => Unknown,
        }
    }
    pub fn or(self, other: TriBool) -> TriBool {
        use TriBool::*;
        match (self, other) {
            (Yes, _) | (_, Yes) => Yes,
            (No, No) => No,
            _ => Unknown,
        }
    }
    pub fn not(self) -> TriBool {
        match self {
            TriBool::Yes => TriBool::No,
            TriBool::No => TriBool::Yes,
            TriBool::Unknown => TriBool::Unknown,
        }
    }
    pub fn all<I: IntoIterator<Item = TriBool>>(it: I) -> TriBool {
        it.into_iter().fold(TriBool::Yes, TriBool::and)
    }
    pub fn any<I: IntoIterator<Item = TriBool>>(it: I) -> TriBool {
        it.into_iter().fold(TriBool::No, TriBool::or)
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriBool::Yes => "yes",
            TriBool::No => "no",
            TriBool::Unknown => "unknown",
        })
    }
}
