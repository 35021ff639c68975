//! Fixed-length bit vectors naming a subset of conditional features.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A candidate feature subset. Bit `i` set means feature `i` is selected.
///
/// Ordering is lexicographic over the bitstring (`'0' < '1'`, position 0 first),
/// which is the final tie-break in frog ranking.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FeatureMask {
    words: Vec<u64>,
    len: usize,
}

impl FeatureMask {
    pub fn empty(len: usize) -> Self {
        FeatureMask {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut m = Self::empty(len);
        for i in 0..len {
            m.set(i, true);
        }
        m
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut m = Self::empty(len);
        for &i in indices {
            m.set(i, true);
        }
        m
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut m = Self::empty(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            m.set(i, b);
        }
        m
    }

    /// Each bit set independently with probability one half; all-zero draws are redrawn.
    pub fn random_feasible<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        assert!(len > 0, "cannot draw a feasible mask of length zero");
        loop {
            let mut m = Self::empty(len);
            for i in 0..len {
                if rng.random_bool(0.5) {
                    m.set(i, true);
                }
            }
            if !m.is_empty() {
                return m;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// True when no bit is set (the infeasible subset).
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for mask of length {}", self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.ones().collect()
    }

    pub fn hamming(&self, other: &FeatureMask) -> usize {
        assert_eq!(self.len, other.len, "hamming distance of unequal-length masks");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Positions where `self` and `other` differ, ascending.
    pub fn differing(&self, other: &FeatureMask) -> Vec<usize> {
        assert_eq!(self.len, other.len);
        (0..self.len).filter(|&i| self.get(i) != other.get(i)).collect()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len == expected {
            Ok(())
        } else {
            Err(Error::MaskLength {
                expected,
                got: self.len,
            })
        }
    }
}

impl Ord for FeatureMask {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                // lowest set bit of the xor is the earliest differing position
                let pos = diff.trailing_zeros();
                return if a >> pos & 1 == 1 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for FeatureMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeatureMask({self})")
    }
}

impl FromStr for FeatureMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut m = FeatureMask::empty(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => m.set(i, true),
                '0' => {}
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("invalid mask character `{other}`"),
                    })
                }
            }
        }
        Ok(m)
    }
}

impl Serialize for FeatureMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeatureMask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
