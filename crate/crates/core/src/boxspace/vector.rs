use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest party count any table in this crate can be built for. Tables
/// hold `4^n` rationals and the duality kernels touch `16^n` pairs.
pub const MAX_PARTIES: usize = 8;

/// Party count used when the caller does not override it.
pub const DEFAULT_PARTY_LIMIT: usize = 5;

/// A validated number of observers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parties(usize);

impl Parties {
    /// Accepts `1 ..= DEFAULT_PARTY_LIMIT`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_limit(n, DEFAULT_PARTY_LIMIT)
    }

    /// Accepts `1 ..= limit`, where `limit` is itself capped at [`MAX_PARTIES`].
    pub fn with_limit(n: usize, limit: usize) -> Result<Self> {
        let limit = limit.min(MAX_PARTIES);
        if n == 0 || n > limit {
            return Err(Error::PartiesOutOfRange { n, limit });
        }
        Ok(Parties(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `2^n`, the number of setting (or outcome) vectors.
    pub fn words(self) -> usize {
        1 << self.0
    }

    /// `4^n`, the dimension of box space.
    pub fn events(self) -> usize {
        1 << (2 * self.0)
    }

    /// `3^n`, the number of correlation coordinates.
    pub fn coordinates(self) -> usize {
        3usize.pow(self.0 as u32)
    }

    pub(crate) fn mask(self) -> u32 {
        ((1u64 << self.0) - 1) as u32
    }
}

impl fmt::Display for Parties {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An `n`-bit word. Used for setting vectors, outcome vectors and subsets
/// of observers alike.
///
/// Observer `k` (1-based) lives in bit `k - 1`. Text forms put observer 1
/// leftmost, so `"10"` has observer 1 set and observer 2 clear. The total
/// order is lexicographic on that text form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    n: u8,
    bits: u32,
}

impl BinaryVector {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n == 0 || n > MAX_PARTIES {
            return Err(Error::PartiesOutOfRange {
                n,
                limit: MAX_PARTIES,
            });
        }
        if u64::from(bits) >> n != 0 {
            return Err(Error::BitsOutOfRange { n, bits });
        }
        Ok(Self::from_raw(n, bits))
    }

    pub(crate) fn from_raw(n: usize, bits: u32) -> Self {
        debug_assert!(n <= MAX_PARTIES && u64::from(bits) >> n == 0);
        BinaryVector { n: n as u8, bits }
    }

    pub fn zeros(parties: Parties) -> Self {
        Self::from_raw(parties.get(), 0)
    }

    pub fn ones(parties: Parties) -> Self {
        Self::from_raw(parties.get(), parties.mask())
    }

    /// The unit vector `1_j` with only observer `j` (1-based) set.
    pub fn unit(parties: Parties, j: usize) -> Result<Self> {
        let n = parties.get();
        if j == 0 || j > n {
            return Err(Error::ObserverOutOfRange { index: j, n });
        }
        Ok(Self::from_raw(n, 1 << (j - 1)))
    }

    /// Builds a vector from components listed observer 1 first.
    pub fn from_components(components: &[u8]) -> Result<Self> {
        let n = components.len();
        let mut bits = 0u32;
        for (k, &c) in components.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << k,
                _ => {
                    return Err(Error::MalformedBitstring(format!("{components:?}")));
                }
            }
        }
        Self::new(n, bits)
    }

    pub fn n(self) -> usize {
        usize::from(self.n)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Component of observer `k` (1-based).
    pub fn component(self, k: usize) -> Result<u8> {
        if k == 0 || k > self.n() {
            return Err(Error::ObserverOutOfRange {
                index: k,
                n: self.n(),
            });
        }
        Ok(((self.bits >> (k - 1)) & 1) as u8)
    }

    pub fn components(self) -> impl Iterator<Item = u8> {
        (0..self.n()).map(move |k| ((self.bits >> k) & 1) as u8)
    }

    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    fn check_same(self, other: Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Componentwise product `a ∧ b`.
    pub fn wedge(self, other: Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_raw(self.n(), self.bits & other.bits))
    }

    /// Componentwise sum modulo 2. Fallible, so not `std::ops::Add`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_raw(self.n(), self.bits ^ other.bits))
    }

    /// `Σ_k a_k b_k mod 2`.
    pub fn dot_parity(self, other: Self) -> Result<u8> {
        self.check_same(other)?;
        Ok(parity(self.bits & other.bits) as u8)
    }

    pub fn is_subset_of(self, other: Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    /// All `2^n` vectors in lexicographic order.
    pub fn all(parties: Parties) -> impl Iterator<Item = BinaryVector> {
        let n = parties.get();
        (0..1u32 << n).map(move |i| Self::from_raw(n, lex_to_bits(n, i)))
    }

    /// All subsets of `self` in lexicographic order.
    pub fn subsets(self) -> impl Iterator<Item = BinaryVector> {
        let n = self.n();
        let sup = self.bits;
        (0..1u32 << n)
            .map(move |i| lex_to_bits(n, i))
            .filter(move |b| b & !sup == 0)
            .map(move |b| Self::from_raw(n, b))
    }
}

/// Maps a position in lexicographic (observer-1-first) order to the
/// internal word.
pub(crate) fn lex_to_bits(n: usize, i: u32) -> u32 {
    if n == 0 {
        0
    } else {
        i.reverse_bits() >> (32 - n)
    }
}

pub(crate) fn parity(x: u32) -> bool {
    x.count_ones() & 1 == 1
}

impl PartialOrd for BinaryVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinaryVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            let n = self.n();
            lex_to_bits(n, self.bits).cmp(&lex_to_bits(n, other.bits))
        })
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.components() {
            f.write_str(if c == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let components = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::MalformedBitstring(s.to_owned())),
            })
            .collect::<Result<Vec<u8>>>()?;
        if components.is_empty() {
            return Err(Error::MalformedBitstring(s.to_owned()));
        }
        Self::from_components(&components)
    }
}
