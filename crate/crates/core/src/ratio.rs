use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact nonnegative rational `num/den`, used for parameters such as β so
/// that threshold checks like `|R| ≤ β·m` stay in integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid ratio {0:?}: expected <p>/<q> with q > 0")]
pub struct ParseRatioError(pub String);

impl Ratio {
    /// Panics if `den == 0`.
    pub const fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Ratio { num, den }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = ParseRatioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRatioError(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let num: u64 = p.parse().map_err(|_| err())?;
        let den: u64 = q.parse().map_err(|_| err())?;
        if den == 0 {
            return Err(err());
        }
        Ok(Ratio { num, den })
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse() {
        assert_eq!("1/12".parse::<Ratio>().unwrap(), Ratio::new(1, 12));
        assert_eq!("3".parse::<Ratio>().unwrap(), Ratio::new(3, 1));
        assert!("1/0".parse::<Ratio>().is_err());
        assert!("a/2".parse::<Ratio>().is_err());
    }
}
