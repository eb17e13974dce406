//! Fixed-length bitstrings used as genomes and feature masks.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A bitstring over the `L` context columns; bit `j` set means column `j`
/// is selected.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Genome {
    words: Vec<u64>,
    len: usize,
}

impl Genome {
    pub fn zeros(len: usize) -> Self {
        Genome { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn ones(len: usize) -> Self {
        let mut g = Genome::zeros(len);
        for j in 0..len {
            g.set(j, true);
        }
        g
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut g = Genome::zeros(len);
        for j in indices {
            g.set(j, true);
        }
        g
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Genome::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j))
    }

    /// Parses a `0`/`1` string such as `"001100"`.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Genome::from_bools(&bits))
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
    pub fn get(&self, j: usize) -> bool {
        debug_assert!(j < self.len);
        (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, j: usize, value: bool) {
        assert!(j < self.len, "bit {j} out of range for length {}", self.len);
        let mask = 1u64 << (j % 64);
        if value {
            self.words[j / 64] |= mask;
        } else {
            self.words[j / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, j: usize) {
        assert!(j < self.len);
        self.words[j / 64] ^= 1u64 << (j % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn ones_indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count_ones());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn intersection_count(&self, other: &Genome) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn union_count(&self, other: &Genome) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Genome) -> Genome {
        assert_eq!(self.len, other.len);
        Genome { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(), len: self.len }
    }

    pub fn union(&self, other: &Genome) -> Genome {
        assert_eq!(self.len, other.len);
        Genome { words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(), len: self.len }
    }

    /// Hex encoding, most significant bit first: bit 0 is the top bit of the
    /// first byte, so the hex reads in the same order as the bitstring.
    pub fn to_hex(&self) -> String {
        let mut bytes = vec![0u8; self.len.div_ceil(8)];
        for j in self.ones_indices() {
            bytes[j / 8] |= 0x80 >> (j % 8);
        }
        hex::encode(bytes)
    }

    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|e| Error::Parse(format!("genome hex: {e}")))?;
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Shape(format!(
                "genome hex encodes {} bytes, expected {} for length {len}",
                bytes.len(),
                len.div_ceil(8)
            )));
        }
        let mut g = Genome::zeros(len);
        for (bi, byte) in bytes.iter().enumerate() {
            for k in 0..8 {
                if byte & (0x80 >> k) != 0 {
                    let j = bi * 8 + k;
                    if j >= len {
                        return Err(Error::Parse("genome hex has padding bits set".into()));
                    }
                    g.set(j, true);
                }
            }
        }
        Ok(g)
    }
}

impl Ord for Genome {
    /// Lexicographic order of the bitstrings read from bit 0, `0 < 1`.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if (a >> bit) & 1 == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Genome {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genome({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bit_ops() {
        let mut g = Genome::zeros(130);
        g.set(0, true);
        g.set(64, true);
        g.set(129, true);
        assert_eq!(g.count_ones(), 3);
        assert_eq!(g.ones_indices(), vec![0, 64, 129]);
        g.flip(64);
        assert!(!g.get(64));
        assert_eq!(Genome::ones(130).count_ones(), 130);
    }

    #[test]
    fn hex_reads_like_the_bitstring() {
        let g = Genome::parse_bits("1000000001").unwrap();
        assert_eq!(g.to_hex(), "8040");
        assert!(Genome::from_hex("8041", 10).is_err());
        assert!(Genome::from_hex("80", 10).is_err());
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a = Genome::parse_bits("0011").unwrap();
        let b = Genome::parse_bits("0100").unwrap();
        assert!(a < b);
        assert_eq!(a.to_string().cmp(&b.to_string()), a.cmp(&b));
    }

    proptest! {
        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..300)) {
            let g = Genome::from_bools(&bits);
            prop_assert_eq!(Genome::from_hex(&g.to_hex(), bits.len()).unwrap(), g);
        }

        #[test]
        fn order_matches_string_order(
            a in proptest::collection::vec(any::<bool>(), 70),
            b in proptest::collection::vec(any::<bool>(), 70),
        ) {
            let (ga, gb) = (Genome::from_bools(&a), Genome::from_bools(&b));
            prop_assert_eq!(ga.cmp(&gb), ga.to_string().cmp(&gb.to_string()));
        }
    }
}
