use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Fixed-width packed bit string.
///
/// Bit `i` is the value of the `i`-th variable of whatever domain the string
/// is attached to. The textual form lists bit 0 first, so `"0110"` has bit 1
/// and bit 2 set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(values: &[bool]) -> Self {
        let mut b = Bits::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            if v {
                b.set(i, true);
            }
        }
        b
    }

    /// Bits of `k` written most significant first, `len` wide.
    ///
    /// Enumerating `k = 0..2^len` yields the strings in lexicographic order.
    pub fn from_index(len: usize, k: u64) -> Self {
        debug_assert!(len <= 64);
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if (k >> (len - 1 - i)) & 1 == 1 {
                b.set(i, true);
            }
        }
        b
    }

    /// Inverse of [`Bits::from_index`].
    pub fn to_index(&self) -> u64 {
        debug_assert!(self.len <= 64);
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | self.get(i) as u64)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut b = self.clone();
        b.flip(i);
        b
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(&self, other: &Bits) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Bits at the given positions, in that order.
    pub fn select(&self, positions: &[usize]) -> Bits {
        let mut b = Bits::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                b.set(j, true);
            }
        }
        b
    }

    /// The first `n` bits.
    pub fn prefix(&self, n: usize) -> Bits {
        debug_assert!(n <= self.len);
        let mut b = Bits::zeros(n);
        for (dst, src) in b.words.iter_mut().zip(&self.words) {
            *dst = *src;
        }
        if !n.is_multiple_of(64) {
            if let Some(last) = b.words.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
        b
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.iter() {
            f.write_str(if v { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut b = Bits::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.set(i, true),
                _ => {
                    return Err(Error::Format {
                        line: 0,
                        message: format!("invalid bit `{c}` in `{s}`"),
                    })
                }
            }
        }
        Ok(b)
    }
}
