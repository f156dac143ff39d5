//! Binary sequences and the deterministic transforms built on them.
//!
//! A [`BitSeq`] is a packed sequence `x_1 x_2 ... x_n` with `n <= MAX_LEN`.
//! Symbol `x_1` is stored in the most significant occupied bit, so for two
//! sequences of equal length numeric order of the packed words coincides with
//! lexicographic order of the strings. Positions in the public API are
//! 1-indexed, matching the usual notation for codewords.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest representable sequence.
pub const MAX_LEN: usize = 128;

#[inline]
fn mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

/// A finite binary sequence.
///
/// Ordering is by length first, then lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitSeq {
    len: u32,
    bits: u128,
}

/// A sequence of non-negative integers, e.g. a run sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntSeq(pub Vec<u32>);

impl IntSeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Plain sum of the entries.
    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&v| v as u64).sum()
    }
}

impl BitSeq {
    /// The empty sequence.
    pub const EMPTY: BitSeq = BitSeq { len: 0, bits: 0 };

    /// All-zero sequence of length `len`.
    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_word(0, len)
    }

    /// All-one sequence of length `len`.
    pub fn ones(len: usize) -> Result<Self> {
        Self::from_word(mask(len), len)
    }

    /// Builds a sequence from its packed word; `x_1` is bit `len - 1`.
    pub fn from_word(word: u128, len: usize) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::TooLong(len));
        }
        if word & !mask(len) != 0 {
            return Err(Error::InvalidParameter(format!(
                "word {word:#x} has bits above length {len}"
            )));
        }
        Ok(BitSeq {
            len: len as u32,
            bits: word,
        })
    }

    #[inline]
    pub(crate) fn from_word_unchecked(word: u128, len: usize) -> Self {
        debug_assert!(len <= MAX_LEN && word & !mask(len) == 0);
        BitSeq {
            len: len as u32,
            bits: word,
        }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() > MAX_LEN {
            return Err(Error::TooLong(bits.len()));
        }
        let mut word = 0u128;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::Parse {
                    line: 1,
                    column: i + 1,
                    found: char::from_digit(b as u32, 10).unwrap_or('?'),
                });
            }
            word = (word << 1) | b as u128;
        }
        Ok(Self::from_word_unchecked(word, bits.len()))
    }

    /// Parses one line of `0`/`1` characters; `line` is used in error reports.
    pub fn parse_line(s: &str, line: usize) -> Result<Self> {
        let mut word = 0u128;
        let mut len = 0usize;
        for (col, ch) in s.chars().enumerate() {
            let b = match ch {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(Error::Parse {
                        line,
                        column: col + 1,
                        found: other,
                    })
                }
            };
            len += 1;
            if len > MAX_LEN {
                return Err(Error::TooLong(s.chars().count()));
            }
            word = (word << 1) | b;
        }
        Ok(Self::from_word_unchecked(word, len))
    }

    /// Parses newline-delimited bitstrings. Blank lines are skipped; a line
    /// holding only whitespace around the bits is trimmed.
    pub fn parse_lines(text: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.trim().is_empty() {
                continue;
            }
            let lead = trimmed.len() - trimmed.trim_start().len();
            let seq = Self::parse_line(trimmed.trim(), i + 1).map_err(|e| match e {
                Error::Parse {
                    line,
                    column,
                    found,
                } => Error::Parse {
                    line,
                    column: column + lead,
                    found,
                },
                other => other,
            })?;
            out.push(seq);
        }
        Ok(out)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed word; `x_1` is the most significant of the `len` low bits.
    #[inline]
    pub fn word(&self) -> u128 {
        self.bits
    }

    /// Symbol `x_i`, `1 <= i <= n`.
    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i >= 1 && i <= self.len());
        ((self.bits >> (self.len() - i)) & 1) as u8
    }

    /// Symbol `x_i` with the zero padding `x_0 = x_{n+1} = 0`.
    #[inline]
    pub fn get_padded(&self, i: usize) -> u8 {
        if i == 0 || i > self.len() {
            0
        } else {
            self.get(i)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.len()).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.iter().collect()
    }

    /// Number of ones.
    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Number of ones in `x_{[i, j]}` (1-indexed, inclusive; empty if `j < i`).
    #[inline]
    pub fn weight_range(&self, i: usize, j: usize) -> u32 {
        if j < i {
            return 0;
        }
        debug_assert!(i >= 1 && j <= self.len());
        let lo = self.len() - j;
        ((self.bits >> lo) & mask(j - i + 1)).count_ones()
    }

    /// `x_{[i, j]}` as a new sequence (empty if `j < i`).
    pub fn slice(&self, i: usize, j: usize) -> BitSeq {
        if j < i {
            return BitSeq::EMPTY;
        }
        debug_assert!(i >= 1 && j <= self.len());
        let lo = self.len() - j;
        let len = j - i + 1;
        Self::from_word_unchecked((self.bits >> lo) & mask(len), len)
    }

    pub fn concat(&self, other: &BitSeq) -> Result<BitSeq> {
        let len = self.len() + other.len();
        if len > MAX_LEN {
            return Err(Error::TooLong(len));
        }
        let hi = if other.len() >= 128 {
            0
        } else {
            self.bits << other.len()
        };
        Ok(Self::from_word_unchecked(hi | other.bits, len))
    }

    /// Flips `x_i`.
    #[inline]
    pub fn flip(&self, i: usize) -> BitSeq {
        debug_assert!(i >= 1 && i <= self.len());
        BitSeq {
            len: self.len,
            bits: self.bits ^ (1u128 << (self.len() - i)),
        }
    }

    /// Deletes `x_i`.
    #[inline]
    pub fn delete(&self, i: usize) -> BitSeq {
        debug_assert!(i >= 1 && i <= self.len());
        let p = self.len() - i;
        let low = self.bits & mask(p);
        let high = if p + 1 >= 128 { 0 } else { self.bits >> (p + 1) };
        BitSeq {
            len: self.len - 1,
            bits: (high << p) | low,
        }
    }

    /// Inserts `bit` so that it becomes symbol `i` of the result,
    /// `1 <= i <= n + 1`. Panics in debug builds if the result would exceed
    /// [`MAX_LEN`].
    #[inline]
    pub fn insert(&self, i: usize, bit: u8) -> BitSeq {
        debug_assert!(i >= 1 && i <= self.len() + 1 && self.len() < MAX_LEN);
        let p = self.len() + 1 - i;
        let low = self.bits & mask(p);
        let high = if p >= 128 { 0 } else { self.bits >> p };
        BitSeq {
            len: self.len + 1,
            bits: (high << (p + 1)) | ((bit as u128 & 1) << p) | low,
        }
    }

    /// Number of positions where two equal-length sequences differ.
    pub fn hamming(&self, other: &BitSeq) -> Result<u32> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok((self.bits ^ other.bits).count_ones())
    }

    /// Number of maximal runs of equal symbols.
    pub fn runs(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        let n = self.len();
        let changes = ((self.bits ^ (self.bits >> 1)) & mask(n - 1)).count_ones();
        changes as usize + 1
    }

    pub fn is_constant(&self) -> bool {
        self.bits == 0 || self.bits == mask(self.len())
    }

    /// Bitwise complement.
    pub fn complement(&self) -> BitSeq {
        BitSeq {
            len: self.len,
            bits: !self.bits & mask(self.len()),
        }
    }

    /// `x_n x_{n-1} ... x_1`.
    pub fn reverse(&self) -> BitSeq {
        if self.is_empty() {
            return *self;
        }
        BitSeq {
            len: self.len,
            bits: self.bits.reverse_bits() >> (128 - self.len()),
        }
    }

    /// Differential sequence: length `n + 1`, entry `i` is `x_i XOR x_{i-1}`
    /// under the padding `x_0 = x_{n+1} = 0`.
    pub fn differential(&self) -> Result<BitSeq> {
        let n = self.len();
        if n + 1 > MAX_LEN {
            return Err(Error::TooLong(n + 1));
        }
        Ok(Self::from_word_unchecked((self.bits << 1) ^ self.bits, n + 1))
    }

    /// Inverse of [`BitSeq::differential`]. The input must have even weight
    /// (and hence length at least one); the result has length `len - 1`.
    pub fn inverse_differential(&self) -> Result<BitSeq> {
        if self.is_empty() {
            return Err(Error::TooShort {
                op: "inverse_differential",
                len: 0,
                min: 1,
            });
        }
        if self.weight() % 2 == 1 {
            return Err(Error::OddWeight);
        }
        let n = self.len() - 1;
        let mut acc = 0u8;
        let mut word = 0u128;
        for i in 1..=n {
            acc ^= self.get(i);
            word = (word << 1) | acc as u128;
        }
        Ok(Self::from_word_unchecked(word, n))
    }

    /// Run sequence `r_1 .. r_{n+1}` with `r_1 = x_1` and `r` incremented
    /// whenever the symbol changes, under the trailing padding `x_{n+1} = 0`.
    pub fn run_sequence(&self) -> Result<IntSeq> {
        let n = self.len();
        if n == 0 {
            return Err(Error::TooShort {
                op: "run_sequence",
                len: 0,
                min: 1,
            });
        }
        let mut out = Vec::with_capacity(n + 1);
        let mut r = self.get(1) as u32;
        out.push(r);
        for i in 1..=n {
            if self.get_padded(i + 1) != self.get(i) {
                r += 1;
            }
            out.push(r);
        }
        Ok(IntSeq(out))
    }

    /// `ab`-indicator: length `n - 1`, entry `i` is one iff `x_i x_{i+1} = ab`.
    pub fn indicator(&self, a: u8, b: u8) -> Result<BitSeq> {
        if self.len() < 2 {
            return Err(Error::TooShort {
                op: "indicator",
                len: self.len(),
                min: 2,
            });
        }
        Ok(self.indicator_lenient(a, b))
    }

    /// As [`BitSeq::indicator`], but sequences shorter than two map to the
    /// empty sequence. Used on possibly short concatenated blocks.
    pub(crate) fn indicator_lenient(&self, a: u8, b: u8) -> BitSeq {
        let n = self.len();
        if n < 2 {
            return BitSeq::EMPTY;
        }
        let m = mask(n - 1);
        let first = self.bits >> 1;
        let second = self.bits & m;
        let fa = if a == 1 { first } else { !first };
        let sb = if b == 1 { second } else { !second };
        Self::from_word_unchecked(fa & sb & m, n - 1)
    }

    /// Block `i` of the length-`p` block decomposition: with `n' = floor(n/p)`,
    /// blocks `1..=n'` have length `p` and block `n' + 1` is the (possibly
    /// empty) tail.
    pub fn block(&self, p: usize, i: usize) -> Result<BitSeq> {
        let n = self.len();
        if p == 0 || p > n {
            return Err(Error::OutOfRange {
                what: "block length P",
                value: p as i128,
                range: format!("[1, {n}]"),
            });
        }
        let blocks = n / p;
        if i == 0 || i > blocks + 1 {
            return Err(Error::OutOfRange {
                what: "block index",
                value: i as i128,
                range: format!("[1, {}]", blocks + 1),
            });
        }
        Ok(self.block_lenient(p, i))
    }

    /// Block `i` for any `p >= 1`; indices past the tail give the empty
    /// sequence.
    pub(crate) fn block_lenient(&self, p: usize, i: usize) -> BitSeq {
        let n = self.len();
        let start = (i - 1).saturating_mul(p) + 1;
        if start > n {
            return BitSeq::EMPTY;
        }
        let end = (i * p).min(n);
        self.slice(start, end)
    }

    /// All sequences of length `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = BitSeq> {
        assert!(n < 64, "exhaustive iteration limited to n < 64");
        (0u64..(1u64 << n)).map(move |w| BitSeq::from_word_unchecked(w as u128, n))
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSeq(\"{self}\")")
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_line(s, 1)
    }
}

impl serde::Serialize for BitSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for BitSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
pub(crate) fn bs(s: &str) -> BitSeq {
    s.parse().unwrap()
}
