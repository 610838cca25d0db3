//! The Dijkgraaf–Verlinde–Verlinde recursion.
//!
//! ```text
//! <tau_{k+1} X>_g = 1/(2k+3)!! [ sum_j (2k+2d_j+1)!!/(2d_j-1)!! <X with d_j -> d_j+k>_g
//!                    + 1/2 sum_{r+s=k-1} (2r+1)!!(2s+1)!! <tau_r tau_s X>_{g-1}
//!                    + 1/2 sum_{r+s=k-1} (2r+1)!!(2s+1)!! sum_{I,J,g'} <tau_r X_I>_{g'} <tau_s X_J>_{g-g'} ]
//! ```
//!
//! This evaluator is the reference the other strategies are checked
//! against. It recurses at genus 0 as well, so its only inputs are the two
//! initial values `<tau_0^3>_0 = 1` and `<tau_1>_1 = 1/24`.

use num_traits::{One, Zero};

use crate::arith::{double_factorial, rational};
use crate::cache::CacheStore;
use crate::combination::LinearCombination;
use crate::error::{Error, Result};
use crate::key::CorrelatorKey;
use crate::scalar::Scalar;
use crate::splits::ordered_splits;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct DvvExpansion {
    /// The index `k + 1` that was removed.
    pub pivot_index: u32,
    pub combination: LinearCombination<Rational>,
}

/// One DVV step with the largest index as pivot.
pub fn dvv_step(key: &CorrelatorKey) -> Result<DvvExpansion> {
    dvv_step_at(key, 0)
}

/// One DVV step with the insertion at position `pivot` as `tau_{k+1}`.
pub fn dvv_step_at(key: &CorrelatorKey, pivot: usize) -> Result<DvvExpansion> {
    if key.is_trivially_zero() {
        return Err(Error::Precondition(format!("{key} vanishes identically")));
    }
    if pivot >= key.n() {
        return Err(Error::InvalidInput(format!("pivot {pivot} out of range for {key}")));
    }
    let (pivot_index, rest) = key.split_at_position(pivot);
    if pivot_index == 0 {
        return Err(Error::Precondition(format!("{key}: DVV pivot must be a positive index")));
    }
    let g = key.genus();
    let k = pivot_index as i64 - 1;
    let mut out = LinearCombination::new();

    for j in 0..rest.len() {
        let d = rest[j] as i64;
        let weight = double_factorial(2 * k + 2 * d + 1)? / double_factorial(2 * d - 1)?;
        let mut raised = rest.clone();
        raised[j] += k as u32;
        out.add_key(Rational::from_bigint(&weight), CorrelatorKey::from_parts(g, raised));
    }

    if k >= 1 {
        let splits = ordered_splits(&rest);
        for r in 0..k {
            let s = k - 1 - r;
            let weight = Rational::from_bigint(&(double_factorial(2 * r + 1)? * double_factorial(2 * s + 1)?))
                * rational(1, 2);

            if g >= 1 {
                let mut term = vec![r as u32, s as u32];
                term.extend(&rest);
                out.add_key(weight.clone(), CorrelatorKey::from_parts(g - 1, term));
            }

            for split in &splits {
                let w = weight.clone() * Rational::from_int(split.count as i64);
                for g1 in 0..=g {
                    let mut left = vec![r as u32];
                    left.extend(&split.left);
                    let mut right = vec![s as u32];
                    right.extend(&split.right);
                    let a = CorrelatorKey::from_parts(g1, left);
                    let b = CorrelatorKey::from_parts(g - g1, right);
                    if !a.is_trivially_zero() && !b.is_trivially_zero() {
                        out.add_pair(w.clone(), a, b);
                    }
                }
            }
        }
    }

    let norm = Rational::one() / Rational::from_bigint(&double_factorial(2 * k + 3)?);
    Ok(DvvExpansion { pivot_index, combination: out.pruned().scaled(&norm) })
}

/// `(genus, n)` of every factor must be lexicographically below the key's.
pub(crate) fn check_descent(key: &CorrelatorKey, combo: &LinearCombination<Rational>) -> Result<()> {
    for f in combo.keys() {
        if (f.genus(), f.n()) >= (key.genus(), key.n()) {
            return Err(Error::Inconsistency(format!(
                "DVV expansion of {key} produced non-descending term {f}"
            )));
        }
    }
    Ok(())
}

pub struct DvvEvaluator<'a> {
    cache: &'a CacheStore,
}

impl<'a> DvvEvaluator<'a> {
    pub fn new(cache: &'a CacheStore) -> Self {
        Self { cache }
    }

    pub fn eval(&self, key: &CorrelatorKey) -> Result<Rational> {
        if key.is_trivially_zero() {
            return Ok(Rational::zero());
        }
        self.cache.get_or_compute(key, |k| self.compute(k))
    }

    fn compute(&self, key: &CorrelatorKey) -> Result<Rational> {
        if let Some(v) = initial_value(key) {
            return Ok(v);
        }
        let expansion = dvv_step(key)?;
        check_descent(key, &expansion.combination)?;
        expansion.combination.evaluate(|f| self.eval(f))
    }

    /// Evaluates one step at an arbitrary positive pivot, recursing with the
    /// default pivot below it.
    pub fn eval_with_pivot(&self, key: &CorrelatorKey, pivot: usize) -> Result<Rational> {
        if key.is_trivially_zero() {
            return Ok(Rational::zero());
        }
        if let Some(v) = initial_value(key) {
            return Ok(v);
        }
        let expansion = dvv_step_at(key, pivot)?;
        check_descent(key, &expansion.combination)?;
        expansion.combination.evaluate(|f| self.eval(f))
    }
}

/// `<tau_0^3>_0` and `<tau_1>_1`: the two correlators with no usable DVV
/// pivot (for `<tau_1>_1` the printed right-hand side is empty).
fn initial_value(key: &CorrelatorKey) -> Option<Rational> {
    match (key.genus(), key.indices()) {
        (0, [0, 0, 0]) => Some(Rational::one()),
        (1, [1]) => Some(rational(1, 24)),
        _ => None,
    }
}

pub fn eval_dvv(key: &CorrelatorKey, cache: &CacheStore) -> Result<Rational> {
    DvvEvaluator::new(cache).eval(key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::key::{canonicalize, enumerate_keys};

    fn key(g: u32, d: &[u32]) -> CorrelatorKey {
        canonicalize(g, d).unwrap()
    }

    #[test]
    fn classical_values() {
        let cache = CacheStore::new();
        assert_eq!(eval_dvv(&key(1, &[1]), &cache).unwrap(), rational(1, 24));
        assert_eq!(eval_dvv(&key(2, &[4]), &cache).unwrap(), rational(1, 1152));
        assert_eq!(eval_dvv(&key(2, &[2, 3]), &cache).unwrap(), rational(29, 5760));
        assert_eq!(eval_dvv(&key(2, &[0, 5]), &cache).unwrap(), rational(1, 1152));
        assert_eq!(eval_dvv(&key(1, &[0, 0, 0]), &cache).unwrap(), rational(0, 1));
        assert_eq!(eval_dvv(&key(1, &[1, 1]), &cache).unwrap(), rational(1, 24));
    }

    #[test]
    fn genus_zero_by_recursion() {
        let cache = CacheStore::new();
        assert_eq!(eval_dvv(&key(0, &[2, 0, 0, 0, 0]), &cache).unwrap(), rational(1, 1));
        assert_eq!(eval_dvv(&key(0, &[1, 1, 0, 0, 0]), &cache).unwrap(), rational(2, 1));
        assert_eq!(eval_dvv(&key(0, &[2, 1, 0, 0, 0, 0]), &cache).unwrap(), rational(3, 1));
    }

    #[test]
    fn step_preconditions() {
        assert!(matches!(dvv_step(&key(0, &[0, 0, 0])), Err(Error::Precondition(_))));
        assert!(matches!(dvv_step(&key(1, &[2, 2])), Err(Error::Precondition(_))));
        assert!(dvv_step(&key(1, &[1])).unwrap().combination.is_empty());
    }

    #[test]
    fn one_step_of_tau0_tau5() {
        let cache = CacheStore::new();
        let exp = dvv_step(&key(2, &[0, 5])).unwrap();
        assert_eq!(exp.pivot_index, 5);
        let v = exp.combination.evaluate(|f| eval_dvv(f, &cache)).unwrap();
        assert_eq!(v, rational(1, 1152));
    }

    #[test]
    fn every_step_descends() {
        for g in 0..=3 {
            for n in 1..=5 {
                for k in enumerate_keys(g, n) {
                    if k.max_index() == 0 {
                        continue;
                    }
                    let exp = dvv_step(&k).unwrap();
                    check_descent(&k, &exp.combination).unwrap();
                }
            }
        }
    }

    #[test]
    fn pivot_independence() {
        let cache = CacheStore::new();
        let ev = DvvEvaluator::new(&cache);
        for g in 0..=2 {
            for n in 1..=4 {
                for k in enumerate_keys(g, n) {
                    let expected = ev.eval(&k).unwrap();
                    for pos in 0..k.n() {
                        if k.indices()[pos] == 0 {
                            continue;
                        }
                        assert_eq!(ev.eval_with_pivot(&k, pos).unwrap(), expected, "{k} pivot {pos}");
                    }
                }
            }
        }
    }
}
