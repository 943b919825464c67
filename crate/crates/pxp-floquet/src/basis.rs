//! Rydberg-blockaded basis: all length-L bit patterns with no two adjacent
//! set bits, enumerated in ascending integer order.
//!
//! Site j of the chain occupies bit j−1 (least significant bit = site 1), so
//! the boundary terms of the Hamiltonian address bits 0 and L−1 directly.
//! The subspace dimension is the Fibonacci number F(L+2) with F(1)=F(2)=1.

use crate::error::{Error, Result};
use std::io::Write;

/// Largest supported chain length for basis enumeration. Patterns fit in a
/// `u64` with room to spare; memory is the real bound (F(32) ≈ 2.2M states).
pub const MAX_SITES: usize = 30;

/// The blockaded subspace of an L-site chain.
///
/// Immutable after construction; shared read access across threads is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockadedBasis {
    l: usize,
    states: Vec<u64>,
}

impl BlockadedBasis {
    /// Enumerate the blockaded patterns of an L-site chain.
    pub fn enumerate(l: usize) -> Result<Self> {
        if !(1..=MAX_SITES).contains(&l) {
            return Err(Error::Size(format!(
                "chain length {l} outside supported range 1..={MAX_SITES}"
            )));
        }
        let expected = fibonacci((l + 2) as u64)? as usize;
        let mut states = Vec::with_capacity(expected);
        for s in 0u64..(1 << l) {
            if s & (s >> 1) == 0 {
                states.push(s);
            }
        }
        debug_assert_eq!(states.len(), expected);
        Ok(Self { l, states })
    }

    /// Chain length L.
    pub fn sites(&self) -> usize {
        self.l
    }

    /// Subspace dimension F(L+2).
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// All patterns in ascending order.
    pub fn patterns(&self) -> &[u64] {
        &self.states
    }

    /// Pattern at ordinal `k`.
    pub fn pattern(&self, k: usize) -> u64 {
        self.states[k]
    }

    /// Ordinal of `pattern`, or `None` when the pattern is not a member.
    ///
    /// Operator construction legitimately probes patterns that exit the
    /// subspace, so absence is an ordinary outcome here rather than an error.
    pub fn lookup(&self, pattern: u64) -> Option<usize> {
        self.states.binary_search(&pattern).ok()
    }

    /// Ordinal of `pattern`, validating membership.
    pub fn index_of(&self, pattern: u64) -> Result<usize> {
        if pattern >> self.l != 0 {
            return Err(Error::InvalidState(format!(
                "pattern {pattern:#b} exceeds {} sites",
                self.l
            )));
        }
        if pattern & (pattern >> 1) != 0 {
            return Err(Error::InvalidState(format!(
                "pattern {pattern:#b} has adjacent excitations"
            )));
        }
        self.lookup(pattern).ok_or_else(|| {
            Error::InvalidState(format!("pattern {pattern:#b} not in basis"))
        })
    }

    /// True when `pattern` is a valid member pattern of this basis.
    pub fn contains(&self, pattern: u64) -> bool {
        pattern >> self.l == 0 && pattern & (pattern >> 1) == 0
    }

    /// Debug dump: one line per state, `ordinal,binary-pattern` with sites
    /// printed most significant bit first.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, &s) in self.states.iter().enumerate() {
            writeln!(w, "{k},{:0width$b}", s, width = self.l)?;
        }
        Ok(())
    }
}

/// n-th Fibonacci number with F(1) = F(2) = 1.
pub fn fibonacci(n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::Size(format!("fibonacci index {n} must be >= 1")));
    }
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 2..n {
        let c = a.checked_add(b).ok_or_else(|| {
            Error::Size(format!("fibonacci({n}) overflows u64"))
        })?;
        a = b;
        b = c;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: filter all 2^L patterns.
    fn brute_force(l: usize) -> Vec<u64> {
        (0u64..(1 << l)).filter(|s| s & (s >> 1) == 0).collect()
    }

    #[test]
    fn fibonacci_convention() {
        assert_eq!(fibonacci(1).unwrap(), 1);
        assert_eq!(fibonacci(2).unwrap(), 1);
        assert_eq!(fibonacci(3).unwrap(), 2);
        assert_eq!(fibonacci(14).unwrap(), 377);
        let seq: Vec<u64> = (1..=10).map(|n| fibonacci(n).unwrap()).collect();
        assert_eq!(seq, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
    }

    #[test]
    fn fibonacci_rejects_zero_and_overflow() {
        assert!(fibonacci(0).is_err());
        assert!(fibonacci(94).is_err());
        // F(93) is the last one representable in u64
        assert!(fibonacci(93).is_ok());
    }

    #[test]
    fn smallest_chain() {
        let b = BlockadedBasis::enumerate(1).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.patterns(), &[0, 1]);
    }

    #[test]
    fn four_site_patterns() {
        let b = BlockadedBasis::enumerate(4).unwrap();
        // site strings s1s2s3s4: 0000,1000,0100,0010,1010,1001,0001,0101
        assert_eq!(b.patterns(), &[0b0000, 0b0001, 0b0010, 0b0100, 0b0101, 0b1000, 0b1001, 0b1010]);
        assert_eq!(b.dim(), 8);
    }

    #[test]
    fn dimension_matches_fibonacci_and_brute_force() {
        for l in 1..=16 {
            let b = BlockadedBasis::enumerate(l).unwrap();
            assert_eq!(b.dim() as u64, fibonacci((l + 2) as u64).unwrap(), "L={l}");
            assert_eq!(b.patterns(), brute_force(l).as_slice(), "L={l}");
        }
    }

    #[test]
    fn twelve_sites_dim_377() {
        assert_eq!(BlockadedBasis::enumerate(12).unwrap().dim(), 377);
    }

    #[test]
    fn ordering_and_index_map_inverse() {
        for l in [1, 2, 5, 9, 12] {
            let b = BlockadedBasis::enumerate(l).unwrap();
            for k in 0..b.dim() {
                assert_eq!(b.index_of(b.pattern(k)).unwrap(), k);
                if k > 0 {
                    assert!(b.pattern(k) > b.pattern(k - 1));
                }
            }
        }
    }

    #[test]
    fn no_adjacent_excitations() {
        for l in 1..=14 {
            let b = BlockadedBasis::enumerate(l).unwrap();
            assert!(b.patterns().iter().all(|&s| s & (s >> 1) == 0));
        }
    }

    #[test]
    fn index_of_examples() {
        let b = BlockadedBasis::enumerate(4).unwrap();
        assert_eq!(b.index_of(0b0000).unwrap(), 0);
        // Néel 1010 as a site string = bits {0,2} = integer 5, fifth in order
        assert_eq!(b.index_of(0b0101).unwrap(), 4);
        assert!(matches!(b.index_of(0b0011), Err(Error::InvalidState(_))));
        assert!(matches!(b.index_of(0b10000), Err(Error::InvalidState(_))));
    }

    #[test]
    fn lookup_absent_is_none_not_error() {
        let b = BlockadedBasis::enumerate(4).unwrap();
        assert_eq!(b.lookup(0b0011), None);
        assert_eq!(b.lookup(0b0101), Some(4));
    }

    #[test]
    fn size_errors() {
        assert!(matches!(BlockadedBasis::enumerate(0), Err(Error::Size(_))));
        assert!(matches!(
            BlockadedBasis::enumerate(MAX_SITES + 1),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn dump_format() {
        let b = BlockadedBasis::enumerate(3).unwrap();
        let mut out = Vec::new();
        b.write_dump(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "0,000\n1,001\n2,010\n3,100\n4,101\n");
    }
}
