use std::fmt;
use std::ops::Add;

use serde::Serialize;

/// Z2 degree of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Sign `(-1)^(|p||q|)` of the graded symmetry rules.
    pub fn sign(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }

    /// Bracket used between homogeneous elements: anticommutator for two odd
    /// elements, commutator otherwise.
    pub fn bracket_kind(self, other: Parity) -> BracketKind {
        if self.is_odd() && other.is_odd() {
            BracketKind::Anticommutator
        } else {
            BracketKind::Commutator
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BracketKind {
    #[serde(rename = "comm")]
    Commutator,
    #[serde(rename = "anti")]
    Anticommutator,
}

impl BracketKind {
    pub fn short_name(self) -> &'static str {
        match self {
            BracketKind::Commutator => "comm",
            BracketKind::Anticommutator => "anti",
        }
    }

    pub fn open(self) -> &'static str {
        match self {
            BracketKind::Commutator => "[",
            BracketKind::Anticommutator => "{",
        }
    }

    pub fn close(self) -> &'static str {
        match self {
            BracketKind::Commutator => "]",
            BracketKind::Anticommutator => "}",
        }
    }
}
