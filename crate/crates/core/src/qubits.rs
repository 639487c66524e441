//! Bitmask primitives shared by every module.
//!
//! Qubits are numbered from 1 in all external I/O and stored internally as
//! bit positions `index - 1` of a `u64`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;

/// Widest register the bitmask representation can hold.
pub const MASK_WIDTH: usize = 64;

/// A ±1 value: a component coefficient, a Z or X outcome, an edge weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Maps a GF(2) bit to a sign: `false ↦ +1`, `true ↦ −1`.
    pub fn from_bit(bit: bool) -> Sign {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.is_minus() != rhs.is_minus())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => f.write_str("+1"),
            Sign::Minus => f.write_str("-1"),
        }
    }
}

/// A set of qubits stored as a bitmask.
///
/// Ordering is lexicographic on the ascending list of members, so
/// `{} < {1,2} < {1,2,3} < {1,3} < {2,3}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct QubitSet(u64);

impl QubitSet {
    pub const EMPTY: QubitSet = QubitSet(0);

    pub fn from_mask(mask: u64) -> QubitSet {
        QubitSet(mask)
    }

    /// The register `{1..n}`.
    pub fn full(n: usize) -> QubitSet {
        assert!(n <= MASK_WIDTH, "register of {n} qubits exceeds mask width");
        if n == MASK_WIDTH {
            QubitSet(u64::MAX)
        } else {
            QubitSet((1u64 << n) - 1)
        }
    }

    /// Builds a set from 1-based indices, rejecting anything outside `1..=n`.
    pub fn from_one_based(indices: &[usize], n: usize) -> Result<QubitSet, Error> {
        let mut mask = 0u64;
        for &q in indices {
            if q == 0 || q > n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            mask |= 1 << (q - 1);
        }
        Ok(QubitSet(mask))
    }

    pub fn single(index: usize) -> QubitSet {
        QubitSet(1 << index)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Membership test on a 0-based index.
    pub fn contains(self, index: usize) -> bool {
        index < MASK_WIDTH && self.0 >> index & 1 == 1
    }

    pub fn is_subset(self, other: QubitSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: QubitSet) -> QubitSet {
        QubitSet(self.0 | other.0)
    }

    pub fn intersection(self, other: QubitSet) -> QubitSet {
        QubitSet(self.0 & other.0)
    }

    pub fn difference(self, other: QubitSet) -> QubitSet {
        QubitSet(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: QubitSet) -> QubitSet {
        QubitSet(self.0 ^ other.0)
    }

    /// 0-based members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let index = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(index)
            }
        })
    }

    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// All subsets of `self`, including the empty set and `self`, in
    /// increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = QubitSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == full {
                None
            } else {
                Some((current.wrapping_sub(full)) & full)
            };
            Some(QubitSet(current))
        })
    }

    /// Applies a permutation of 0-based indices (`perm[old] = new`).
    pub fn permuted(self, perm: &[usize]) -> QubitSet {
        QubitSet(self.iter().fold(0, |acc, i| acc | 1 << perm[i]))
    }
}

impl Ord for QubitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for QubitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for QubitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QubitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, q) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", q + 1)?;
        }
        f.write_str("}")
    }
}

/// A partial Z-assignment: which qubits are fixed, and which of those read −1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZAssignment {
    qubits: QubitSet,
    minus: QubitSet,
}

impl ZAssignment {
    pub fn new(qubits: QubitSet, minus: QubitSet) -> ZAssignment {
        assert!(minus.is_subset(qubits), "minus positions must be fixed");
        ZAssignment { qubits, minus }
    }

    /// Builds an assignment from `(1-based qubit, ±1)` pairs.
    pub fn from_pairs(pairs: &[(usize, i64)], n: usize) -> Result<ZAssignment, Error> {
        let mut qubits = QubitSet::EMPTY;
        let mut minus = QubitSet::EMPTY;
        for &(q, v) in pairs {
            let bit = QubitSet::from_one_based(&[q], n)?;
            let sign = Sign::from_i64(v).ok_or(Error::BadSign(v))?;
            if !qubits.intersection(bit).is_empty() {
                return Err(Error::Parse(format!("qubit {q} assigned twice")));
            }
            qubits = qubits.union(bit);
            if sign.is_minus() {
                minus = minus.union(bit);
            }
        }
        Ok(ZAssignment { qubits, minus })
    }

    pub fn qubits(&self) -> QubitSet {
        self.qubits
    }

    /// Fixed qubits that read −1 (i.e. sit in |1⟩).
    pub fn minus(&self) -> QubitSet {
        self.minus
    }

    pub fn value(&self, index: usize) -> Option<Sign> {
        self.qubits
            .contains(index)
            .then(|| Sign::from_bit(self.minus.contains(index)))
    }

    /// `(1-based qubit, ±1)` pairs in ascending qubit order.
    pub fn pairs(&self) -> Vec<(usize, i64)> {
        self.qubits
            .iter()
            .map(|i| (i + 1, Sign::from_bit(self.minus.contains(i)).value()))
            .collect()
    }

    /// Whether a basis state with `support` in |1⟩ agrees with this assignment.
    pub fn admits(&self, support: QubitSet) -> bool {
        support.intersection(self.qubits) == self.minus
    }
}

/// A full Z-measurement record. Bitstrings use `'0'` for Z = +1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutcomeVector {
    n: usize,
    minus: QubitSet,
}

impl OutcomeVector {
    pub fn new(n: usize, minus: QubitSet) -> OutcomeVector {
        assert!(minus.is_subset(QubitSet::full(n)));
        OutcomeVector { n, minus }
    }

    pub fn from_values(values: &[i64]) -> Result<OutcomeVector, Error> {
        if values.len() > MASK_WIDTH {
            return Err(Error::TooManyQubits {
                n: values.len(),
                limit: MASK_WIDTH,
            });
        }
        let mut minus = 0u64;
        for (i, &v) in values.iter().enumerate() {
            if Sign::from_i64(v).ok_or(Error::BadSign(v))?.is_minus() {
                minus |= 1 << i;
            }
        }
        Ok(OutcomeVector {
            n: values.len(),
            minus: QubitSet(minus),
        })
    }

    pub fn from_bitstring(bits: &str) -> Result<OutcomeVector, Error> {
        let values = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(1),
                '1' => Ok(-1),
                other => Err(Error::Parse(format!(
                    "outcome bitstring may only contain '0' and '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err(Error::Parse("empty outcome bitstring".into()));
        }
        OutcomeVector::from_values(&values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Qubits that read Z = −1.
    pub fn minus(&self) -> QubitSet {
        self.minus
    }

    pub fn value(&self, index: usize) -> Sign {
        Sign::from_bit(self.minus.contains(index))
    }

    pub fn values(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.value(i).value()).collect()
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.n)
            .map(|i| if self.minus.contains(i) { '1' } else { '0' })
            .collect()
    }

    /// The outcome restricted to `qubits`.
    pub fn restrict(&self, qubits: QubitSet) -> ZAssignment {
        ZAssignment::new(qubits, self.minus.intersection(qubits))
    }
}

impl fmt::Debug for OutcomeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OutcomeVector({})", self.to_bitstring())
    }
}

impl Ord for OutcomeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_bitstring().cmp(&other.to_bitstring())
    }
}

impl PartialOrd for OutcomeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_set_order() {
        let set = |v: &[usize]| QubitSet::from_one_based(v, 4).unwrap();
        let mut sets = vec![set(&[2, 3]), set(&[1, 3]), set(&[1, 2, 3]), set(&[]), set(&[1, 2])];
        sets.sort();
        assert_eq!(
            sets,
            vec![set(&[]), set(&[1, 2]), set(&[1, 2, 3]), set(&[1, 3]), set(&[2, 3])]
        );
    }

    #[test]
    fn subsets_enumerates_every_submask_once() {
        let s = QubitSet::from_mask(0b1011);
        let subs: Vec<u64> = s.subsets().map(QubitSet::mask).collect();
        assert_eq!(subs, vec![0b0000, 0b0001, 0b0010, 0b0011, 0b1000, 0b1001, 0b1010, 0b1011]);
        assert_eq!(QubitSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn bitstring_convention() {
        let o = OutcomeVector::from_bitstring("0011").unwrap();
        assert_eq!(o.values(), vec![1, 1, -1, -1]);
        assert_eq!(o.to_bitstring(), "0011");
        assert!(OutcomeVector::from_bitstring("01a").is_err());
        assert!(OutcomeVector::from_bitstring("").is_err());
    }

    #[test]
    fn out_of_range_qubit() {
        assert!(QubitSet::from_one_based(&[0], 3).is_err());
        assert!(QubitSet::from_one_based(&[4], 3).is_err());
    }

    #[test]
    fn sign_product() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::Plus * Sign::Minus, Sign::Minus);
    }
}
