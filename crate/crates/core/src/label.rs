use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// Site-level reliability class. `Reliable` is class id 0, `Unreliable`
/// (fake news) is class id 1; every "lowest class id" tie rule resolves
/// towards `Reliable`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Reliable,
    Unreliable,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Reliable, Label::Unreliable];

    pub fn id(self) -> usize {
        match self {
            Label::Reliable => 0,
            Label::Unreliable => 1,
        }
    }

    pub fn from_id(id: usize) -> Option<Label> {
        match id {
            0 => Some(Label::Reliable),
            1 => Some(Label::Unreliable),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Reliable => "reliable",
            Label::Unreliable => "unreliable",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reliable" | "real" | "0" => Ok(Label::Reliable),
            "unreliable" | "fake" | "1" => Ok(Label::Unreliable),
            other => Err(crate::Error::Malformed(alloc::format!("unknown label {other:?}"))),
        }
    }
}
