//! Enumeration of chamber faces as ordered block partitions.
//!
//! A k-face of the signed arrangement's chamber fan is encoded by an ordered
//! tuple of `k` nonempty blocks `I_1..I_k`, a possibly-empty trailing zero
//! block `I_{k+1}`, and a sign for every element outside the zero block; on
//! the face, coordinates in `I_l` share the common value `±γ_l` with
//! `γ_1 ≥ … ≥ γ_k ≥ 0` and coordinates in `I_{k+1}` vanish. Unsigned-
//! arrangement faces drop the signs and the zero block. The multiplicity of
//! a face counts the chambers whose closure contains it.
//!
//! Elements are `0`-based indices `0..n`. Both enumerations are lazy
//! iterators, so even the large face families stream in constant memory.

use super::WeylError;
use crate::exact::{factorial, pow2};
use num_bigint::BigInt;

/// A face of the signed arrangement: ordered nonempty blocks, a trailing
/// zero block, and a sign per non-zero-block element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPartition {
    blocks: Vec<Vec<usize>>,
    zero_block: Vec<usize>,
    /// Indexed by element: `+1`/`-1` off the zero block, `0` on it.
    signs: Vec<i8>,
}

impl SignedPartition {
    /// Validates that `blocks` are nonempty and, together with
    /// `zero_block`, partition `0..n` where `n` is the total element count,
    /// and that `signs` (indexed by element) is `±1` exactly off the zero
    /// block.
    pub fn new(
        blocks: Vec<Vec<usize>>,
        zero_block: Vec<usize>,
        signs: Vec<i8>,
    ) -> Result<Self, WeylError> {
        let n = signs.len();
        let mut seen = vec![false; n];
        let mut place = |e: usize| -> Result<(), WeylError> {
            if e >= n || seen[e] {
                return Err(WeylError::InvalidPartition);
            }
            seen[e] = true;
            Ok(())
        };
        for block in &blocks {
            if block.is_empty() {
                return Err(WeylError::InvalidPartition);
            }
            for &e in block {
                place(e)?;
                if signs[e] != 1 && signs[e] != -1 {
                    return Err(WeylError::InvalidSign);
                }
            }
        }
        for &e in &zero_block {
            place(e)?;
            if signs[e] != 0 {
                return Err(WeylError::InvalidSign);
            }
        }
        if seen.iter().any(|&s| !s) || blocks.is_empty() {
            return Err(WeylError::InvalidPartition);
        }
        Ok(SignedPartition {
            blocks,
            zero_block,
            signs,
        })
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// The ordered nonempty blocks `I_1..I_k`.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The trailing zero block `I_{k+1}`.
    pub fn zero_block(&self) -> &[usize] {
        &self.zero_block
    }

    /// Signs indexed by element (`0` marks zero-block elements).
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Number of chambers whose closure contains this face:
    /// `|I_1|! ⋯ |I_k|! · |I_{k+1}|! · 2^{|I_{k+1}|}`.
    pub fn multiplicity(&self) -> BigInt {
        let mut m = factorial(self.zero_block.len()) * pow2(self.zero_block.len());
        for block in &self.blocks {
            m *= factorial(block.len());
        }
        m
    }
}

/// A face of the unsigned arrangement: ordered nonempty blocks covering
/// `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    /// Validates that `blocks` are nonempty and partition `0..n` where `n`
    /// is the total element count.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self, WeylError> {
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(WeylError::InvalidPartition);
            }
            for &e in block {
                if e >= n || seen[e] {
                    return Err(WeylError::InvalidPartition);
                }
                seen[e] = true;
            }
        }
        if blocks.is_empty() {
            return Err(WeylError::InvalidPartition);
        }
        Ok(Partition { blocks, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of chambers whose closure contains this face: `∏ |I_l|!`.
    pub fn multiplicity(&self) -> BigInt {
        self.blocks
            .iter()
            .map(|b| factorial(b.len()))
            .product()
    }
}

/// Advances a base-`base` odometer lexicographically; returns `false` when
/// it wraps around.
fn advance_digits(digits: &mut [u8], base: u8) -> bool {
    for i in (0..digits.len()).rev() {
        if digits[i] + 1 < base {
            digits[i] += 1;
            for d in digits[i + 1..].iter_mut() {
                *d = 0;
            }
            return true;
        }
        digits[i] = 0;
    }
    false
}

fn covers_all_blocks(digits: &[u8], k: usize) -> bool {
    let mut mask = 0u32;
    for &d in digits {
        mask |= 1 << d;
    }
    mask == (1u32 << k) - 1
}

/// Advances to the next block assignment that uses every block; `digits`
/// must be inspected for coverage before the first call.
fn advance_to_covering(digits: &mut [u8], k: usize) -> bool {
    while advance_digits(digits, k as u8) {
        if covers_all_blocks(digits, k) {
            return true;
        }
    }
    false
}

struct MaskState {
    mask: u32,
    elems: Vec<usize>,
    digits: Vec<u8>,
    sign_mask: u32,
    sign_end: u32,
}

fn build_face(n: usize, k: usize, st: &MaskState) -> SignedPartition {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &e) in st.elems.iter().enumerate() {
        blocks[st.digits[i] as usize].push(e);
    }
    let zero_block: Vec<usize> = (0..n).filter(|&e| st.mask & (1 << e) != 0).collect();
    let mut signs = vec![0i8; n];
    for (i, &e) in st.elems.iter().enumerate() {
        signs[e] = if st.sign_mask & (1 << i) == 0 { 1 } else { -1 };
    }
    SignedPartition {
        blocks,
        zero_block,
        signs,
    }
}

/// Lazy, exhaustive, duplicate-free stream of the signed-arrangement
/// k-faces of `0..n`.
pub struct SignedPartitionIter {
    n: usize,
    k: usize,
    masks: std::ops::Range<u32>,
    current: Option<MaskState>,
}

impl Iterator for SignedPartitionIter {
    type Item = SignedPartition;

    fn next(&mut self) -> Option<SignedPartition> {
        let (n, k) = (self.n, self.k);
        loop {
            if let Some(st) = &mut self.current {
                if st.sign_mask < st.sign_end {
                    let item = build_face(n, k, st);
                    st.sign_mask += 1;
                    return Some(item);
                }
                if advance_to_covering(&mut st.digits, k) {
                    st.sign_mask = 0;
                    continue;
                }
                self.current = None;
            }
            loop {
                let mask = self.masks.next()?;
                let elems: Vec<usize> =
                    (0..self.n).filter(|&e| mask & (1 << e) == 0).collect();
                if elems.len() < self.k {
                    continue;
                }
                let mut digits = vec![0u8; elems.len()];
                if !covers_all_blocks(&digits, self.k)
                    && !advance_to_covering(&mut digits, self.k)
                {
                    continue;
                }
                let sign_end = 1u32 << elems.len();
                self.current = Some(MaskState {
                    mask,
                    elems,
                    digits,
                    sign_mask: 0,
                    sign_end,
                });
                break;
            }
        }
    }
}

/// Streams every signed k-face of `0..n` exactly once.
pub fn enumerate_signed_partitions(
    n: usize,
    k: usize,
) -> Result<SignedPartitionIter, WeylError> {
    signed_partitions_for_masks(n, k, 0..(1u32 << n))
}

/// Streams the signed k-faces whose zero block is one of the given element
/// masks — the split point for parallel reductions over the face family.
pub(super) fn signed_partitions_for_masks(
    n: usize,
    k: usize,
    masks: std::ops::Range<u32>,
) -> Result<SignedPartitionIter, WeylError> {
    if n < 1 {
        return Err(WeylError::BelowMinimum {
            name: "n",
            got: n,
            min: 1,
        });
    }
    if n > 25 {
        return Err(WeylError::UnsupportedSize { n, max: 25 });
    }
    if k == 0 || k > n {
        return Err(WeylError::KOutOfRange { k, max: n });
    }
    Ok(SignedPartitionIter {
        n,
        k,
        masks,
        current: None,
    })
}

/// Lazy, exhaustive, duplicate-free stream of the unsigned-arrangement
/// k-faces of `0..n`.
pub struct PartitionIter {
    n: usize,
    k: usize,
    digits: Option<Vec<u8>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let digits = self.digits.as_mut()?;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); self.k];
        for (e, &d) in digits.iter().enumerate() {
            blocks[d as usize].push(e);
        }
        let item = Partition {
            blocks,
            n: self.n,
        };
        if !advance_to_covering(digits, self.k) {
            self.digits = None;
        }
        Some(item)
    }
}

/// Streams every unsigned k-face of `0..n` exactly once.
pub fn enumerate_partitions(n: usize, k: usize) -> Result<PartitionIter, WeylError> {
    if n < 1 {
        return Err(WeylError::BelowMinimum {
            name: "n",
            got: n,
            min: 1,
        });
    }
    if n > 25 {
        return Err(WeylError::UnsupportedSize { n, max: 25 });
    }
    if k == 0 || k > n {
        return Err(WeylError::KOutOfRange { k, max: n });
    }
    let mut digits = vec![0u8; n];
    let digits = if covers_all_blocks(&digits, k) || advance_to_covering(&mut digits, k) {
        Some(digits)
    } else {
        None
    };
    Ok(PartitionIter { n, k, digits })
}

/// Multiplicity of a signed face (standalone form of
/// [`SignedPartition::multiplicity`]).
pub fn face_multiplicity(p: &SignedPartition) -> BigInt {
    p.multiplicity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binomial;
    use num_traits::One;
    use std::collections::HashSet;

    fn total_multiplicity_signed(n: usize, k: usize) -> BigInt {
        enumerate_signed_partitions(n, k)
            .unwrap()
            .map(|p| p.multiplicity())
            .sum()
    }

    fn total_multiplicity_unsigned(n: usize, k: usize) -> BigInt {
        enumerate_partitions(n, k)
            .unwrap()
            .map(|p| p.multiplicity())
            .sum()
    }

    #[test]
    fn enumeration_counts_for_small_cases() {
        assert_eq!(enumerate_signed_partitions(1, 1).unwrap().count(), 2);
        assert_eq!(enumerate_signed_partitions(2, 1).unwrap().count(), 8);
        assert_eq!(enumerate_signed_partitions(2, 2).unwrap().count(), 8);
        // Unsigned: ordered set partitions of 3 elements into 2 blocks.
        assert_eq!(enumerate_partitions(3, 2).unwrap().count(), 6);
        assert_eq!(enumerate_partitions(3, 3).unwrap().count(), 6);
    }

    #[test]
    fn enumeration_rejects_bad_domains() {
        assert!(matches!(
            enumerate_signed_partitions(0, 1),
            Err(WeylError::BelowMinimum { .. })
        ));
        assert!(matches!(
            enumerate_signed_partitions(3, 0),
            Err(WeylError::KOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_partitions(3, 4),
            Err(WeylError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn faces_are_distinct_and_valid() {
        let mut seen = HashSet::new();
        for p in enumerate_signed_partitions(4, 2).unwrap() {
            assert_eq!(p.n(), 4);
            assert_eq!(p.k(), 2);
            // Round-trip through the validating constructor.
            let rebuilt = SignedPartition::new(
                p.blocks().to_vec(),
                p.zero_block().to_vec(),
                p.signs().to_vec(),
            )
            .unwrap();
            assert_eq!(rebuilt, p);
            assert!(seen.insert(format!("{p:?}")), "duplicate face {p:?}");
        }
    }

    #[test]
    fn multiplicity_examples() {
        // All singleton blocks, empty zero block: a chamber, multiplicity 1.
        let chamber = SignedPartition::new(
            vec![vec![0], vec![1], vec![2]],
            vec![],
            vec![1, -1, 1],
        )
        .unwrap();
        assert_eq!(face_multiplicity(&chamber), BigInt::one());

        // Blocks sized 2, 2, 1 plus a zero block of size 3 (n = 8):
        // 2!·2!·1!·3!·2^3 = 192.
        let face = SignedPartition::new(
            vec![vec![0, 1], vec![2, 3], vec![4]],
            vec![5, 6, 7],
            vec![1, 1, -1, 1, -1, 0, 0, 0],
        )
        .unwrap();
        assert_eq!(face_multiplicity(&face), BigInt::from(192));
    }

    #[test]
    fn partition_constructors_validate() {
        assert!(matches!(
            SignedPartition::new(vec![vec![0], vec![]], vec![], vec![1, 1]),
            Err(WeylError::InvalidPartition)
        ));
        assert!(matches!(
            SignedPartition::new(vec![vec![0, 0]], vec![], vec![1, 1]),
            Err(WeylError::InvalidPartition)
        ));
        assert!(matches!(
            SignedPartition::new(vec![vec![0]], vec![1], vec![2, 0]),
            Err(WeylError::InvalidSign)
        ));
        assert!(matches!(
            SignedPartition::new(vec![vec![0]], vec![1], vec![1, 1]),
            Err(WeylError::InvalidSign)
        ));
        assert!(matches!(
            Partition::new(vec![vec![0], vec![0]]),
            Err(WeylError::InvalidPartition)
        ));
    }

    #[test]
    fn signed_completeness_small() {
        // Σ multiplicities over the signed k-faces = 2^n n! C(n, k).
        for n in 1..=6 {
            for k in 1..=n {
                let expected = pow2(n) * factorial(n) * binomial(n, k);
                assert_eq!(total_multiplicity_signed(n, k), expected, "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn signed_completeness_spot_checks_larger() {
        for (n, k) in [(7, 1), (7, 7), (8, 1)] {
            let expected = pow2(n) * factorial(n) * binomial(n, k);
            assert_eq!(total_multiplicity_signed(n, k), expected, "n={n}, k={k}");
        }
    }

    #[test]
    fn unsigned_completeness() {
        // Σ multiplicities over the unsigned k-faces = n! C(n-1, k-1).
        for n in 1..=7 {
            for k in 1..=n {
                let expected = factorial(n) * binomial(n - 1, k - 1);
                assert_eq!(
                    total_multiplicity_unsigned(n, k),
                    expected,
                    "n={n}, k={k}"
                );
            }
        }
    }

    #[test]
    #[ignore = "full n = 7 and n = 8 sweeps take minutes; run with --ignored"]
    fn signed_completeness_exhaustive_large() {
        for n in [7, 8] {
            for k in 1..=n {
                let expected = pow2(n) * factorial(n) * binomial(n, k);
                assert_eq!(total_multiplicity_signed(n, k), expected, "n={n}, k={k}");
            }
        }
        for k in 1..=8 {
            let expected = factorial(8) * binomial(7, k - 1);
            assert_eq!(total_multiplicity_unsigned(8, k), expected, "k={k}");
        }
    }
}
