use std::fmt;

use serde::{Deserialize, Serialize};

/// Strong Kleene truth values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThreeVal {
    False,
    Unknown,
    True,
}

use ThreeVal::*;

impl ThreeVal {
    pub const ALL: [ThreeVal; 3] = [False, Unknown, True];

    pub fn and(self, other: ThreeVal) -> ThreeVal {
        self.min(other)
    }

    pub fn or(self, other: ThreeVal) -> ThreeVal {
        self.max(other)
    }

    pub fn implies(self, other: ThreeVal) -> ThreeVal {
        (!self).or(other)
    }

    pub fn is_definite(self) -> bool {
        self != Unknown
    }

    pub fn is_true(self) -> bool {
        self == True
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            True => Some(true),
            False => Some(false),
            Unknown => None,
        }
    }
}

impl std::ops::Not for ThreeVal {
    type Output = ThreeVal;

    fn not(self) -> ThreeVal {
        match self {
            True => False,
            False => True,
            Unknown => Unknown,
        }
    }
}

impl From<bool> for ThreeVal {
    fn from(b: bool) -> Self {
        if b {
            True
        } else {
            False
        }
    }
}

impl fmt::Display for ThreeVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            True => "true",
            False => "false",
            Unknown => "unknown",
        })
    }
}
