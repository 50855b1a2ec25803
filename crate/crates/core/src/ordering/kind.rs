use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which ordering a system, factor or kernel belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderingKind {
    Natural,
    Mc,
    Bmc,
    Hbmc,
}

impl OrderingKind {
    pub const ALL: [OrderingKind; 4] = [Self::Natural, Self::Mc, Self::Bmc, Self::Hbmc];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Natural => "natural",
            Self::Mc => "mc",
            Self::Bmc => "bmc",
            Self::Hbmc => "hbmc",
        }
    }
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown ordering `{s}` (expected natural, mc, bmc or hbmc)"))
    }
}
