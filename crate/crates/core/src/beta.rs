//! The exact rational threshold β with 0 < β < 1.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Beta(Ratio<u64>);

impl Beta {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidBeta(format!("{numer}/{denom}")));
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<u64>) -> Result<Self> {
        if r.is_zero() || r >= Ratio::one() {
            return Err(Error::InvalidBeta(r.to_string()));
        }
        Ok(Beta(r))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    pub fn numer(self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(self) -> u64 {
        *self.0.denom()
    }

    /// `count >= β·total`, exactly.
    pub fn is_met_by(self, count: usize, total: usize) -> bool {
        u128::from(self.denom()) * count as u128 >= u128::from(self.numer()) * total as u128
    }

    /// ⌈β·n / (1 − β)⌉.
    pub fn tail_length(self, n: usize) -> u64 {
        let scaled = self.0 * Ratio::from_integer(n as u64) / (Ratio::one() - self.0);
        scaled.ceil().to_integer()
    }
}

impl FromStr for Beta {
    type Err = Error;

    /// Accepts `p/q` or a bare integer (which is never in range).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidBeta(s.to_string());
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Beta::new(p, q).map_err(|_| bad())
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        let b: Beta = "2/4".parse().unwrap();
        assert_eq!(b, Beta::new(1, 2).unwrap());
        assert_eq!(b.to_string(), "1/2");
    }

    #[test]
    fn rejects_out_of_range() {
        for s in ["0/3", "1/1", "3/2", "1/0", "1", "abc", "-1/2"] {
            assert!(s.parse::<Beta>().is_err(), "{s}");
        }
    }

    #[test]
    fn tail_lengths() {
        assert_eq!(Beta::new(1, 2).unwrap().tail_length(3), 3);
        assert_eq!(Beta::new(3, 4).unwrap().tail_length(2), 6);
        assert_eq!(Beta::new(1, 3).unwrap().tail_length(5), 3);
    }

    #[test]
    fn threshold_is_exact() {
        let b = Beta::new(3, 5).unwrap();
        assert!(b.is_met_by(3, 5));
        assert!(!b.is_met_by(2, 5));
        assert!(Beta::new(1, 3).unwrap().is_met_by(1, 3));
    }
}
