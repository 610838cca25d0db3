//! Canonical correlator keys and the dimension/stability rules.

use std::fmt;

use crate::error::{Error, Result};

/// `<tau_{d_1} ... tau_{d_n}>_g` with the indices sorted non-increasing.
///
/// Construction always canonicalizes, so keys built from permuted index
/// lists compare equal and hash identically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelatorKey {
    genus: u32,
    indices: Vec<u32>,
}

impl CorrelatorKey {
    pub fn new(genus: u32, mut indices: Vec<u32>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidInput("a correlator needs at least one insertion".into()));
        }
        indices.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { genus, indices })
    }

    /// Builds a key from parts that are known to be non-empty.
    pub(crate) fn from_parts(genus: u32, indices: Vec<u32>) -> Self {
        debug_assert!(!indices.is_empty());
        Self::new(genus, indices).expect("non-empty index list")
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn n(&self) -> usize {
        self.indices.len()
    }

    pub fn max_index(&self) -> u32 {
        self.indices[0]
    }

    pub fn index_sum(&self) -> u64 {
        self.indices.iter().map(|&d| d as u64).sum()
    }

    pub fn contains(&self, value: u32) -> bool {
        self.indices.contains(&value)
    }

    pub fn dimension_matches(&self) -> bool {
        dimension(self.genus, self.n()) == Some(self.index_sum())
    }

    pub fn is_stable(&self) -> bool {
        is_stable(self.genus, self.n())
    }

    pub fn is_trivially_zero(&self) -> bool {
        !self.is_stable() || !self.dimension_matches()
    }

    /// The indices with one occurrence of `value` removed.
    pub(crate) fn without_one(&self, value: u32) -> Option<Vec<u32>> {
        let pos = self.indices.iter().position(|&d| d == value)?;
        let mut rest = self.indices.clone();
        rest.remove(pos);
        Some(rest)
    }

    /// The indices with the entry at `pos` removed, plus that entry.
    pub(crate) fn split_at_position(&self, pos: usize) -> (u32, Vec<u32>) {
        let mut rest = self.indices.clone();
        let pivot = rest.remove(pos);
        (pivot, rest)
    }
}

/// Same as [`CorrelatorKey::new`]; named after the operation it performs.
pub fn canonicalize(genus: u32, raw: &[u32]) -> Result<CorrelatorKey> {
    CorrelatorKey::new(genus, raw.to_vec())
}

/// `3g - 3 + n`, or `None` when negative.
pub fn dimension(genus: u32, n: usize) -> Option<u64> {
    let dim = 3 * genus as i64 - 3 + n as i64;
    (dim >= 0).then_some(dim as u64)
}

/// `2g - 2 + n > 0`.
pub fn is_stable(genus: u32, n: usize) -> bool {
    2 * genus as i64 - 2 + n as i64 > 0
}

/// Literal form, e.g. `<t0^3>_0` or `<t3 t2>_2`.
impl fmt::Display for CorrelatorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        let mut first = true;
        let mut i = 0;
        while i < self.indices.len() {
            let d = self.indices[i];
            let run = self.indices[i..].iter().take_while(|&&e| e == d).count();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "t{d}^{run}")?;
            } else {
                write!(f, "t{d}")?;
            }
            i += run;
        }
        write!(f, ">_{}", self.genus)
    }
}

/// All stable, dimension-valid keys of genus `genus` with exactly `n`
/// insertions, in ascending order.
pub fn enumerate_keys(genus: u32, n: usize) -> Vec<CorrelatorKey> {
    let mut out = Vec::new();
    if n == 0 || !is_stable(genus, n) {
        return out;
    }
    let Some(total) = dimension(genus, n) else {
        return out;
    };
    let mut current = Vec::with_capacity(n);
    partitions(total, n, total, &mut current, &mut |parts| {
        out.push(CorrelatorKey::from_parts(genus, parts.to_vec()));
    });
    out.sort();
    out
}

/// Non-increasing sequences of exactly `slots` non-negative parts summing
/// to `remaining`, each part at most `cap`.
fn partitions(
    remaining: u64,
    slots: usize,
    cap: u64,
    current: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32]),
) {
    if slots == 0 {
        if remaining == 0 {
            emit(current);
        }
        return;
    }
    let hi = cap.min(remaining);
    // the remaining slots can absorb at most `slots * part`
    for part in (0..=hi).rev() {
        if part * (slots as u64) < remaining {
            break;
        }
        current.push(part as u32);
        partitions(remaining - part, slots - 1, part, current, emit);
        current.pop();
    }
}
