use std::cmp::Ordering;
use std::fmt;

/// Largest register file a [`BasisIndex`] can address.
pub const MAX_QUBITS: usize = 256;

const WORDS: usize = MAX_QUBITS / 64;

/// Computational basis label. Qubit `k` is bit `k` (little-endian).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BasisIndex([u64; WORDS]);

impl BasisIndex {
    pub const ZERO: BasisIndex = BasisIndex([0; WORDS]);

    pub fn from_u64(v: u64) -> Self {
        let mut w = [0; WORDS];
        w[0] = v;
        BasisIndex(w)
    }

    pub fn from_u128(v: u128) -> Self {
        let mut w = [0; WORDS];
        w[0] = v as u64;
        w[1] = (v >> 64) as u64;
        BasisIndex(w)
    }

    /// Value as `u64` when every set bit is below 64.
    pub fn to_u64(&self) -> Option<u64> {
        if self.0[1..].iter().all(|&w| w == 0) {
            Some(self.0[0])
        } else {
            None
        }
    }

    #[inline]
    pub fn bit(&self, q: usize) -> bool {
        (self.0[q >> 6] >> (q & 63)) & 1 == 1
    }

    #[inline]
    pub fn set_bit(&mut self, q: usize, v: bool) {
        let m = 1u64 << (q & 63);
        if v {
            self.0[q >> 6] |= m;
        } else {
            self.0[q >> 6] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, q: usize) {
        self.0[q >> 6] ^= 1u64 << (q & 63);
    }

    #[inline]
    pub fn with_bit(mut self, q: usize, v: bool) -> Self {
        self.set_bit(q, v);
        self
    }

    /// Gathers `qubits` (LSB first) into an integer.
    pub fn read(&self, qubits: &[usize]) -> u128 {
        debug_assert!(qubits.len() <= 128);
        qubits
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &q)| acc | ((self.bit(q) as u128) << i))
    }

    /// Scatters the low `qubits.len()` bits of `value` onto `qubits` (LSB first).
    pub fn write(&mut self, qubits: &[usize], value: u128) {
        for (i, &q) in qubits.iter().enumerate() {
            self.set_bit(q, (value >> i) & 1 == 1);
        }
    }

    /// Index of the highest set bit.
    pub fn highest_bit(&self) -> Option<usize> {
        (0..WORDS)
            .rev()
            .find(|&i| self.0[i] != 0)
            .map(|i| i * 64 + 63 - self.0[i].leading_zeros() as usize)
    }

    pub fn count_ones(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

impl Ord for BasisIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for BasisIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for BasisIndex {
    fn from(v: u64) -> Self {
        BasisIndex::from_u64(v)
    }
}

impl fmt::Debug for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasisIndex({self})")
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = self.0.iter().rposition(|&w| w != 0).unwrap_or(0);
        write!(f, "{:#x}", self.0[top])?;
        for i in (0..top).rev() {
            write!(f, "{:016x}", self.0[i])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_cross_word_boundaries() {
        let mut b = BasisIndex::ZERO;
        b.set_bit(63, true);
        b.set_bit(64, true);
        b.set_bit(255, true);
        assert!(b.bit(63) && b.bit(64) && b.bit(255));
        assert_eq!(b.highest_bit(), Some(255));
        assert_eq!(b.read(&[62, 63, 64]), 0b110);
        b.flip(255);
        assert_eq!(b.highest_bit(), Some(64));
        assert_eq!(b.to_u64(), None);
    }

    #[test]
    fn read_write_round_trip() {
        let qubits = [3, 70, 1, 200];
        let mut b = BasisIndex::from_u64(0b1000_0000);
        b.write(&qubits, 0b1011);
        assert_eq!(b.read(&qubits), 0b1011);
        assert!(b.bit(7));
    }

    #[test]
    fn ordering_is_numeric() {
        let lo = BasisIndex::from_u64(u64::MAX);
        let hi = BasisIndex::from_u128(1 << 64);
        assert!(lo < hi);
        assert_eq!(format!("{hi}"), "0x10000000000000000");
    }
}
