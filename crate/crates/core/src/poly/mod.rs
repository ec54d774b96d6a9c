//! Exact univariate and bivariate polynomials.
//!
//! A bivariate polynomial is stored through its *coordinate polynomials*:
//! `F(x, y) = Σ_n [F]_n(x) · yⁿ / n!`. With this factorial convention
//! `∂/∂y` is a pure index shift and `∂/∂x` acts coordinate-wise.

mod bi;
mod uni;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use bi::BiPoly;
pub use uni::UniPoly;
pub(crate) use uni::{power_name, render_terms};

/// Polynomial degree with a sentinel for the zero polynomial that sorts
/// below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub(crate) fn of_len(len: usize) -> Self {
        match len {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == Degree::NegInf
    }

    /// `self < bound` where `bound` is an ordinary integer.
    pub fn below(self, bound: usize) -> bool {
        match self {
            Degree::NegInf => true,
            Degree::Finite(d) => d < bound,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::NegInf => s.serialize_str("-inf"),
            Degree::Finite(d) => s.serialize_u64(*d as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Degree::Finite(n as usize)),
            Raw::S(s) if s == "-inf" => Ok(Degree::NegInf),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad degree {s:?}"))),
        }
    }
}

/// The monomial `x^x · y^y`, ordered graded-lexicographically with `x > y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mono {
    pub x: usize,
    pub y: usize,
}

impl Mono {
    pub fn new(x: usize, y: usize) -> Self {
        Mono { x, y }
    }

    pub fn total(self) -> usize {
        self.x + self.y
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (power_name("x", self.x), power_name("y", self.y)) {
            (a, b) if a.is_empty() && b.is_empty() => "1".to_string(),
            (a, b) if b.is_empty() => a,
            (a, b) if a.is_empty() => b,
            (a, b) => format!("{a}*{b}"),
        };
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let mut ms = vec![Mono::new(0, 3), Mono::new(2, 1), Mono::new(3, 0), Mono::new(0, 0), Mono::new(1, 0)];
        ms.sort();
        assert_eq!(
            ms,
            vec![Mono::new(0, 0), Mono::new(1, 0), Mono::new(0, 3), Mono::new(2, 1), Mono::new(3, 0)]
        );
    }

    #[test]
    fn degree_json() {
        assert_eq!(serde_json::to_string(&Degree::NegInf).unwrap(), r#""-inf""#);
        assert_eq!(serde_json::from_str::<Degree>("4").unwrap(), Degree::Finite(4));
    }
}
