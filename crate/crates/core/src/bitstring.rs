//! Fixed-length packed bit strings.
//!
//! Bits are stored little-endian inside `u64` words: position `i` (0-based)
//! lives in word `i / 64` at bit `i % 64`. The number of one-bits is cached
//! and kept current by every mutating method, so `count_ones` is O(1). All the
//! benchmark functions that only depend on `|x|_1` are therefore O(1) too.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
    ones: usize,
}

impl BitString {
    /// All-zero string of length `n`.
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "bit strings must have positive length");
        Self {
            words: vec![0; n.div_ceil(WORD)],
            len: n,
            ones: 0,
        }
    }

    /// All-one string of length `n`.
    pub fn ones(n: usize) -> Self {
        let mut x = Self::zeros(n);
        for w in x.words.iter_mut() {
            *w = u64::MAX;
        }
        x.clear_tail();
        x.ones = n;
        x
    }

    /// The string `1^a 0^(n-a)`.
    pub fn prefix_ones(n: usize, a: usize) -> Self {
        assert!(a <= n);
        let mut x = Self::zeros(n);
        for i in 0..a {
            x.set(i, true);
        }
        x
    }

    /// Uniformly random string of length `n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut x = Self::zeros(n);
        for w in x.words.iter_mut() {
            *w = rng.random::<u64>();
        }
        x.clear_tail();
        x.ones = x.words.iter().map(|w| w.count_ones() as usize).sum();
        x
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut x = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            x.set(i, b);
        }
        x
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.flip(i);
        }
    }

    /// Flips position `i` and keeps the cached one-count current.
    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "position {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        let w = &mut self.words[i / WORD];
        *w ^= mask;
        if *w & mask != 0 {
            self.ones += 1;
        } else {
            self.ones -= 1;
        }
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    /// Number of mismatching positions.
    ///
    /// # Panics
    ///
    /// Panics when the lengths differ.
    pub fn hamming(&self, other: &BitString) -> usize {
        assert_eq!(
            self.len, other.len,
            "hamming distance needs equal lengths"
        );
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Number of consecutive one-bits before the first zero-bit.
    pub fn leading_ones(&self) -> usize {
        let mut total = 0;
        for w in &self.words {
            let run = w.trailing_ones() as usize;
            total += run;
            if run < WORD {
                break;
            }
        }
        total.min(self.len)
    }

    /// Number of one-bits among positions `[start, end)`.
    pub fn count_ones_in(&self, start: usize, end: usize) -> usize {
        assert!(start <= end && end <= self.len);
        let mut total = 0;
        let mut i = start;
        while i < end {
            let word = i / WORD;
            let lo = i % WORD;
            let hi = (end - word * WORD).min(WORD);
            let span = hi - lo;
            let mask = if span == WORD {
                u64::MAX
            } else {
                ((1u64 << span) - 1) << lo
            };
            total += (self.words[word] & mask).count_ones() as usize;
            i += span;
        }
        total
    }

    #[inline]
    pub fn is_all_ones(&self) -> bool {
        self.ones == self.len
    }

    #[inline]
    pub fn is_all_zeros(&self) -> bool {
        self.ones == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseError::new("bit string must be non-empty"));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ParseError::new(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_bits(bits))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn count_ones_examples() {
        assert_eq!(BitString::ones(5).count_ones(), 5);
        assert_eq!(BitString::zeros(5).count_ones(), 0);
        assert_eq!(bs("10110").count_ones(), 3);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(bs("1010").hamming(&bs("1010")), 0);
        assert_eq!(bs("1111").hamming(&bs("0000")), 4);
        assert_eq!(bs("1100").hamming(&bs("1010")), 2);
    }

    #[test]
    #[should_panic(expected = "equal lengths")]
    fn hamming_length_mismatch_panics() {
        bs("101").hamming(&bs("1010"));
    }

    #[test]
    fn leading_ones_crosses_word_boundaries() {
        let mut x = BitString::ones(130);
        assert_eq!(x.leading_ones(), 130);
        x.flip(100);
        assert_eq!(x.leading_ones(), 100);
        x.flip(3);
        assert_eq!(x.leading_ones(), 3);
        assert_eq!(bs("1101").leading_ones(), 2);
        assert_eq!(bs("0111").leading_ones(), 0);
    }

    #[test]
    fn prefix_ones_layout() {
        assert_eq!(BitString::prefix_ones(6, 2).to_string(), "110000");
        assert_eq!(BitString::ones(70).to_string().len(), 70);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("10a1".parse::<BitString>().is_err());
        assert!("".parse::<BitString>().is_err());
    }

    proptest! {
        #[test]
        fn ones_plus_zeros_is_length(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let x = BitString::from_bits(bits.iter().copied());
            prop_assert_eq!(x.count_ones() + x.count_zeros(), bits.len());
            prop_assert_eq!(x.count_ones(), bits.iter().filter(|b| **b).count());
            prop_assert_eq!(x.to_string().parse::<BitString>().unwrap(), x);
        }

        #[test]
        fn hamming_is_symmetric_and_matches_naive(
            pair in (1usize..150).prop_flat_map(|n| (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            ))
        ) {
            let (a, b) = pair;
            let x = BitString::from_bits(a.iter().copied());
            let y = BitString::from_bits(b.iter().copied());
            let naive = a.iter().zip(&b).filter(|(p, q)| p != q).count();
            prop_assert_eq!(x.hamming(&y), naive);
            prop_assert_eq!(y.hamming(&x), naive);
            prop_assert_eq!(x.hamming(&x), 0);
        }

        #[test]
        fn range_counts_match_naive(
            bits in proptest::collection::vec(any::<bool>(), 1..200),
            a in 0usize..200,
            b in 0usize..200,
        ) {
            let n = bits.len();
            let (lo, hi) = (a.min(b) % (n + 1), a.max(b) % (n + 1));
            let (lo, hi) = (lo.min(hi), lo.max(hi));
            let x = BitString::from_bits(bits.iter().copied());
            let naive = bits[lo..hi].iter().filter(|b| **b).count();
            prop_assert_eq!(x.count_ones_in(lo, hi), naive);
        }
    }
}
