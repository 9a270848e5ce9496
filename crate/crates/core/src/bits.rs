//! Fixed-length bit strings with 1-based positions.
//!
//! The textual form is a run of `'0'`/`'1'` characters with position 1
//! leftmost. When a string is used to index a table on the cube
//! (`to_index`/`from_index`), position `i` maps to bit `i - 1` of the index.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument(
                "bit string length must be positive".into(),
            ));
        }
        Ok(Self { bits })
    }

    /// All-zero string of length `len`.
    ///
    /// Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "bit string length must be positive");
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        assert!(len > 0, "bit string length must be positive");
        Self {
            bits: vec![true; len],
        }
    }

    /// Uniformly random string of length `len`.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        assert!(len > 0, "bit string length must be positive");
        Self {
            bits: (0..len).map(|_| rng.random::<bool>()).collect(),
        }
    }

    /// Builds the string whose position `i` is bit `i - 1` of `index`.
    pub fn from_index(index: usize, len: usize) -> Self {
        assert!(
            len > 0 && len < usize::BITS as usize,
            "length {len} out of index range"
        );
        Self {
            bits: (0..len).map(|j| (index >> j) & 1 == 1).collect(),
        }
    }

    pub fn to_index(&self) -> Result<usize> {
        if self.len() >= usize::BITS as usize {
            return Err(Error::InvalidArgument(format!(
                "length {} too large for a table index",
                self.len()
            )));
        }
        Ok(self
            .bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | (usize::from(b) << j)))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 1-based `position`.
    pub fn get(&self, position: usize) -> bool {
        assert!(
            (1..=self.len()).contains(&position),
            "position {position} outside 1..={}",
            self.len()
        );
        self.bits[position - 1]
    }

    pub fn set(&mut self, position: usize, value: bool) {
        assert!(
            (1..=self.len()).contains(&position),
            "position {position} outside 1..={}",
            self.len()
        );
        self.bits[position - 1] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Scalar product over GF(2).
    pub fn dot(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .fold(false, |acc, (a, b)| acc ^ (a & b)))
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::dimension(self.len(), other.len()));
        }
        Ok(())
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &BitString, b: &BitString) -> Result<usize> {
    a.check_len(b)?;
    Ok(a.bits.iter().zip(&b.bits).filter(|(x, y)| x != y).count())
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "invalid bit character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits).map_err(|_| Error::Parse("empty bit string".into()))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
