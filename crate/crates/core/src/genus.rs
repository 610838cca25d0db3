//! Genus-descent strategies.
//!
//! For a correlator whose indices are all positive, the genus recursion
//! rewrites `(2g+n-1)(2g+n-2) <tau_{d_1} ... tau_{d_n}>_g` purely in terms of
//! correlators of genus strictly below `g`. Together with the string
//! equation (to clear `tau_0` insertions) this evaluates everything by
//! induction on the genus alone.
//!
//! The `tau_0` identity
//! `(2g+n-1) <tau_0 X>_g = 1/12 <tau_0^4 X>_{g-1} + 1/2 sum <tau_0^2 X_I>_{g'} <tau_0^2 X_J>_{g-g'}`
//! gives a second strategy: lift the largest index with the string
//! equation, resolve the `tau_0` term through the identity, and recurse on
//! the remaining same-genus terms.

use num_traits::{One, Zero};

use crate::arith::{integer, rational};
use crate::cache::CacheStore;
use crate::combination::LinearCombination;
use crate::error::{Error, Result};
use crate::key::CorrelatorKey;
use crate::rules::{genus0_eval, string_lift, string_step};
use crate::splits::ordered_splits;
use crate::Rational;

fn with_prefix(prefix: &[u32], rest: &[u32]) -> Vec<u32> {
    let mut v = Vec::with_capacity(prefix.len() + rest.len());
    v.extend_from_slice(prefix);
    v.extend_from_slice(rest);
    v
}

fn add_pair_nonvanishing(
    out: &mut LinearCombination<Rational>,
    coeff: Rational,
    a: CorrelatorKey,
    b: CorrelatorKey,
) {
    if !a.is_trivially_zero() && !b.is_trivially_zero() {
        out.add_pair(coeff, a, b);
    }
}

fn assert_lower_genus(what: &str, g: u32, combo: &LinearCombination<Rational>) -> Result<()> {
    if let Some(bad) = combo.keys().find(|k| k.genus() >= g) {
        return Err(Error::Inconsistency(format!(
            "{what} at genus {g} produced same-genus term {bad}"
        )));
    }
    Ok(())
}

/// Both sides of the genus recursion for `key`, with the insertion at
/// `pivot` playing the role of `d_1`: returns `((2g+n-1)(2g+n-2), rhs)` so
/// that `factor * <key> = rhs`.
pub fn thm11_sides(key: &CorrelatorKey, pivot: usize) -> Result<(Rational, LinearCombination<Rational>)> {
    let g = key.genus();
    if g == 0 {
        return Err(Error::Precondition(format!("genus recursion needs g >= 1: {key}")));
    }
    if key.contains(0) {
        return Err(Error::Precondition(format!("genus recursion needs all indices >= 1: {key}")));
    }
    if !key.dimension_matches() {
        return Err(Error::Precondition(format!("dimension mismatch: {key}")));
    }
    if pivot >= key.n() {
        return Err(Error::InvalidInput(format!("pivot {pivot} out of range for {key}")));
    }
    let n = key.n() as i64;
    let (d1, rest) = key.split_at_position(pivot);
    let c1 = 2 * g as i64 + n - 1;
    let c2 = 2 * d1 as i64 + 3;
    let mut rhs = LinearCombination::new();

    rhs.add_key(rational(c2, 12), CorrelatorKey::from_parts(g - 1, with_prefix(&[0, 0, 0, 0, d1 + 1], &rest)));
    rhs.add_key(rational(-c1, 6), CorrelatorKey::from_parts(g - 1, with_prefix(&[0, 0, 0], key.indices())));

    for split in ordered_splits(&rest) {
        let count = split.count as i64;
        for g1 in 0..=g {
            let right = CorrelatorKey::from_parts(g - g1, with_prefix(&[0, 0], &split.right));
            if right.is_trivially_zero() {
                continue;
            }
            add_pair_nonvanishing(
                &mut rhs,
                integer(c2 * count),
                CorrelatorKey::from_parts(g1, with_prefix(&[d1 + 1, 0, 0], &split.left)),
                right.clone(),
            );
            add_pair_nonvanishing(
                &mut rhs,
                integer(-c1 * count),
                CorrelatorKey::from_parts(g1, with_prefix(&[d1, 0], &split.left)),
                right,
            );
        }
    }
    Ok((integer(c1 * (c1 - 1)), rhs.pruned()))
}

/// One genus-recursion step with the largest index as `d_1`.
pub fn thm11_step(key: &CorrelatorKey) -> Result<LinearCombination<Rational>> {
    thm11_step_at(key, 0)
}

pub fn thm11_step_at(key: &CorrelatorKey, pivot: usize) -> Result<LinearCombination<Rational>> {
    let (factor, rhs) = thm11_sides(key, pivot)?;
    assert_lower_genus("genus recursion", key.genus(), &rhs)?;
    Ok(rhs.scaled(&(Rational::one() / factor)))
}

/// Both sides of the `tau_0` identity for `<tau_0 body>_g`: returns
/// `(2g+n-1, rhs)` with `n = body.len()`.
pub fn thm12_sides(g: u32, body: &[u32]) -> Result<(Rational, LinearCombination<Rational>)> {
    if g == 0 {
        return Err(Error::Precondition("tau_0 identity needs g >= 1".into()));
    }
    let n = body.len() as i64;
    let sum: i64 = body.iter().map(|&d| d as i64).sum();
    if sum != 3 * g as i64 + n - 2 {
        return Err(Error::Precondition(format!(
            "tau_0 identity needs sum d_j = 3g+n-2 = {}, got {sum}",
            3 * g as i64 + n - 2
        )));
    }
    let mut rhs = LinearCombination::new();
    rhs.add_key(rational(1, 12), CorrelatorKey::from_parts(g - 1, with_prefix(&[0, 0, 0, 0], body)));
    for split in ordered_splits(body) {
        let w = rational(split.count as i64, 2);
        for g1 in 0..=g {
            add_pair_nonvanishing(
                &mut rhs,
                w.clone(),
                CorrelatorKey::from_parts(g1, with_prefix(&[0, 0], &split.left)),
                CorrelatorKey::from_parts(g - g1, with_prefix(&[0, 0], &split.right)),
            );
        }
    }
    Ok((integer(2 * g as i64 + n - 1), rhs.pruned()))
}

/// `<tau_0 body>_g` as a combination of lower-genus terms (when every body
/// index is positive).
pub fn thm12_step(g: u32, body: &[u32]) -> Result<LinearCombination<Rational>> {
    let (factor, rhs) = thm12_sides(g, body)?;
    if !body.contains(&0) {
        assert_lower_genus("tau_0 identity", g, &rhs)?;
    }
    Ok(rhs.scaled(&(Rational::one() / factor)))
}

/// Both sides of the grouped relation
/// `(2g+n-1) <tau_r X>_g = (2r+3) <tau_0 tau_{r+1} X>_g - 1/6 <tau_0^3 tau_r X>_{g-1}
///                         - sum <tau_0 tau_r X_I>_{g'} <tau_0^2 X_J>_{g-g'}`.
///
/// The right side contains a same-genus term of higher weight, so this is
/// only used for verification.
pub fn grouped_step(
    g: u32,
    r: u32,
    body: &[u32],
) -> Result<(LinearCombination<Rational>, LinearCombination<Rational>)> {
    let n = body.len() as i64;
    let lhs_key = CorrelatorKey::from_parts(g, with_prefix(&[r], body));
    if !lhs_key.dimension_matches() {
        return Err(Error::Precondition(format!("dimension mismatch: {lhs_key}")));
    }
    let mut lhs = LinearCombination::new();
    lhs.add_key(integer(2 * g as i64 + n - 1), lhs_key);

    let mut rhs = LinearCombination::new();
    rhs.add_key(integer(2 * r as i64 + 3), CorrelatorKey::from_parts(g, with_prefix(&[0, r + 1], body)));
    if g >= 1 {
        rhs.add_key(rational(-1, 6), CorrelatorKey::from_parts(g - 1, with_prefix(&[0, 0, 0, r], body)));
    }
    for split in ordered_splits(body) {
        let w = integer(-(split.count as i64));
        for g1 in 0..=g {
            add_pair_nonvanishing(
                &mut rhs,
                w.clone(),
                CorrelatorKey::from_parts(g1, with_prefix(&[0, r], &split.left)),
                CorrelatorKey::from_parts(g - g1, with_prefix(&[0, 0], &split.right)),
            );
        }
    }
    Ok((lhs.pruned(), rhs.pruned()))
}

/// Genus recursion plus string equation.
pub struct GenusEvaluator<'a> {
    cache: &'a CacheStore,
}

impl<'a> GenusEvaluator<'a> {
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
        if key.genus() == 0 {
            return genus0_eval(key);
        }
        let combo = if key.contains(0) {
            string_step(key)?.pruned()
        } else {
            thm11_step(key)?
        };
        combo.evaluate(|k| self.eval(k))
    }
}

pub fn eval_thm11(key: &CorrelatorKey, cache: &CacheStore) -> Result<Rational> {
    GenusEvaluator::new(cache).eval(key)
}

/// `(g, n, sum d - max d)`, strictly decreasing along the max-index
/// recursion.
fn maxidx_measure(key: &CorrelatorKey) -> (u32, usize, u64) {
    (key.genus(), key.n(), key.index_sum() - key.max_index() as u64)
}

/// Induction on the largest index through the `tau_0` identity.
pub struct MaxIndexEvaluator<'a> {
    cache: &'a CacheStore,
}

impl<'a> MaxIndexEvaluator<'a> {
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
        if key.genus() == 0 {
            return genus0_eval(key);
        }
        if key.contains(0) {
            return string_step(key)?.pruned().evaluate(|k| self.eval(k));
        }

        let g = key.genus();
        let (top, rest) = key.split_at_position(0);
        let lifted = CorrelatorKey::from_parts(g, with_prefix(&[0, top + 1], &rest));
        let measure = maxidx_measure(key);
        let mut total = Rational::zero();
        for (product, coeff) in string_lift(key, 0)?.pruned().terms() {
            let term = product
                .as_single()
                .ok_or_else(|| Error::Inconsistency("string lift produced a product".into()))?;
            let value = if *term == lifted {
                self.cache.get_or_compute(term, |_| {
                    thm12_step(g, &with_prefix(&[top + 1], &rest))?.evaluate(|k| self.eval(k))
                })?
            } else {
                if maxidx_measure(term) >= measure {
                    return Err(Error::Inconsistency(format!(
                        "max-index recursion from {key} does not descend at {term}"
                    )));
                }
                self.eval(term)?
            };
            total += coeff.clone() * value;
        }
        Ok(total)
    }
}

pub fn eval_maxidx(key: &CorrelatorKey, cache: &CacheStore) -> Result<Rational> {
    MaxIndexEvaluator::new(cache).eval(key)
}
