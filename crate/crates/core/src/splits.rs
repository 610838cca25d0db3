//! Ordered splits `I ⊔ J` of a list of insertion positions.
//!
//! Positions carrying equal indices are interchangeable, so splits are
//! enumerated per sub-multiset with a multiplicity equal to the number of
//! position subsets that produce it.

use crate::arith::binomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    /// Number of ordered position splits giving this (left, right) pair.
    pub count: u64,
}

/// All ordered splits of `values`, empty sides included.
pub fn ordered_splits(values: &[u32]) -> Vec<Split> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut groups: Vec<(u32, u64)> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some((last, m)) if *last == v => *m += 1,
            _ => groups.push((v, 1)),
        }
    }

    let mut out = Vec::new();
    let mut choice = vec![0u64; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut count = 1u64;
        for (&(v, m), &c) in groups.iter().zip(&choice) {
            left.extend(std::iter::repeat_n(v, c as usize));
            right.extend(std::iter::repeat_n(v, (m - c) as usize));
            count *= binomial(m, c);
        }
        out.push(Split { left, right, count });

        // odometer increment
        let mut i = 0;
        loop {
            if i == groups.len() {
                return out;
            }
            if choice[i] < groups[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_has_one_split() {
        let s = ordered_splits(&[]);
        assert_eq!(s, vec![Split { left: vec![], right: vec![], count: 1 }]);
    }

    #[test]
    fn counts_sum_to_power_of_two() {
        for values in [vec![1, 2, 3], vec![0, 0, 0, 0], vec![2, 2, 1, 0, 0]] {
            let total: u64 = ordered_splits(&values).iter().map(|s| s.count).sum();
            assert_eq!(total, 1 << values.len());
        }
    }

    #[test]
    fn repeated_values_grouped() {
        let s = ordered_splits(&[0, 0]);
        assert_eq!(s.len(), 3);
        let mid = s.iter().find(|s| s.left.len() == 1).unwrap();
        assert_eq!(mid.count, 2);
        assert_eq!(mid.right, vec![0]);
    }
}
