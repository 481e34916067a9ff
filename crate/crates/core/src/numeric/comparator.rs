use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The three comparison operators used for lab-value question variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    Lt,
    Eq,
    Gt,
}

impl Comparator {
    pub const ALL: [Comparator; 3] = [Comparator::Lt, Comparator::Eq, Comparator::Gt];

    /// Wording used inside rendered questions.
    pub fn phrase(self) -> &'static str {
        match self {
            Comparator::Lt => "lesser than",
            Comparator::Eq => "equal to",
            Comparator::Gt => "greater than",
        }
    }

    /// Row label in accuracy tables.
    pub fn label(self) -> &'static str {
        match self {
            Comparator::Lt => "Lesser Than",
            Comparator::Eq => "Equal To",
            Comparator::Gt => "Greater Than",
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Comparator::Lt => "lt",
            Comparator::Eq => "eq",
            Comparator::Gt => "gt",
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Comparator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lt" | "<" => Ok(Comparator::Lt),
            "eq" | "=" => Ok(Comparator::Eq),
            "gt" | ">" => Ok(Comparator::Gt),
            other => Err(format!("unknown comparator {other:?}")),
        }
    }
}
