//! Genus-0 closed form and the string/dilaton rewriting rules.

use num_traits::{One, Zero};

use crate::arith::{factorial, integer};
use crate::combination::LinearCombination;
use crate::error::{Error, Result};
use crate::key::{is_stable, CorrelatorKey};
use crate::Rational;

/// `(n-3)! / prod d_j!` for a genus-0 key, zero when the key vanishes.
pub fn genus0_eval(key: &CorrelatorKey) -> Result<Rational> {
    if key.genus() != 0 {
        return Err(Error::Precondition(format!("{key} is not genus 0")));
    }
    if key.is_trivially_zero() {
        return Ok(Rational::zero());
    }
    let numer = factorial(key.n() as u64 - 3);
    let denom = key
        .indices()
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, &d| acc * factorial(d as u64));
    Ok(Rational::new(numer, denom))
}

/// Removes one `tau_0` and lowers each remaining positive index in turn.
pub fn string_step(key: &CorrelatorKey) -> Result<LinearCombination<Rational>> {
    if key.n() < 2 {
        return Err(Error::Precondition(format!("string equation needs n >= 2: {key}")));
    }
    let rest = key
        .without_one(0)
        .ok_or_else(|| Error::Precondition(format!("{key} has no tau_0 insertion")))?;
    let mut out = LinearCombination::new();
    for i in 0..rest.len() {
        if rest[i] == 0 {
            continue;
        }
        let mut lowered = rest.clone();
        lowered[i] -= 1;
        out.add_key(Rational::one(), CorrelatorKey::from_parts(key.genus(), lowered));
    }
    Ok(out)
}

/// The string equation read backwards around the insertion at `pivot`:
/// `<tau_a X> = <tau_0 tau_{a+1} X> - sum_i <tau_{a+1} tau_{d_i - 1} X \ d_i>`.
pub fn string_lift(key: &CorrelatorKey, pivot: usize) -> Result<LinearCombination<Rational>> {
    if pivot >= key.n() {
        return Err(Error::InvalidInput(format!("pivot {pivot} out of range for {key}")));
    }
    let g = key.genus();
    let (a, rest) = key.split_at_position(pivot);
    let mut out = LinearCombination::new();

    let mut lifted = Vec::with_capacity(rest.len() + 2);
    lifted.extend([0, a + 1]);
    lifted.extend(&rest);
    out.add_key(Rational::one(), CorrelatorKey::from_parts(g, lifted));

    for i in 0..rest.len() {
        if rest[i] == 0 {
            continue;
        }
        let mut term = rest.clone();
        term[i] -= 1;
        term.push(a + 1);
        out.add_key(-Rational::one(), CorrelatorKey::from_parts(g, term));
    }
    Ok(out)
}

/// Removes one `tau_1`, multiplying by `2g - 2 + (n - 1)`.
pub fn dilaton_step(key: &CorrelatorKey) -> Result<LinearCombination<Rational>> {
    let rest = key
        .without_one(1)
        .ok_or_else(|| Error::Precondition(format!("{key} has no tau_1 insertion")))?;
    let g = key.genus();
    if rest.is_empty() || !is_stable(g, rest.len()) {
        return Err(Error::Precondition(format!(
            "dilaton reduction of {key} lands on an unstable correlator"
        )));
    }
    let factor = 2 * g as i64 - 2 + rest.len() as i64;
    let mut out = LinearCombination::new();
    out.add_key(integer(factor), CorrelatorKey::from_parts(g, rest));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::key::canonicalize;

    fn key(g: u32, d: &[u32]) -> CorrelatorKey {
        canonicalize(g, d).unwrap()
    }

    #[test]
    fn genus0_values() {
        assert_eq!(genus0_eval(&key(0, &[0, 0, 0])).unwrap(), rational(1, 1));
        assert_eq!(genus0_eval(&key(0, &[1, 1, 0, 0, 0])).unwrap(), rational(2, 1));
        assert_eq!(genus0_eval(&key(0, &[2, 1, 0, 0, 0, 0])).unwrap(), rational(3, 1));
        assert_eq!(genus0_eval(&key(0, &[1, 0])).unwrap(), rational(0, 1));
        assert!(genus0_eval(&key(1, &[1])).is_err());
    }

    #[test]
    fn string_step_examples() {
        let c = string_step(&key(1, &[0, 2])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient_of_key(&key(1, &[1])), Some(&rational(1, 1)));

        let c = string_step(&key(1, &[0, 1, 1])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient_of_key(&key(1, &[1, 0])), Some(&rational(2, 1)));

        let c = string_step(&key(1, &[0, 3, 0])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient_of_key(&key(1, &[2, 0])), Some(&rational(1, 1)));

        assert!(matches!(string_step(&key(1, &[1, 2])), Err(Error::Precondition(_))));
    }

    #[test]
    fn string_lift_examples() {
        let c = string_lift(&key(1, &[1]), 0).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient_of_key(&key(1, &[0, 2])), Some(&rational(1, 1)));

        let c = string_lift(&key(1, &[2, 1]), 0).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.coefficient_of_key(&key(1, &[0, 3, 1])), Some(&rational(1, 1)));
        assert_eq!(c.coefficient_of_key(&key(1, &[3, 0])), Some(&rational(-1, 1)));
    }

    #[test]
    fn dilaton_examples() {
        let c = dilaton_step(&key(1, &[1, 1])).unwrap();
        assert_eq!(c.coefficient_of_key(&key(1, &[1])), Some(&rational(1, 1)));
        let c = dilaton_step(&key(2, &[1, 4])).unwrap();
        assert_eq!(c.coefficient_of_key(&key(2, &[4])), Some(&rational(3, 1)));
        let c = dilaton_step(&key(0, &[1, 0, 0, 0])).unwrap();
        assert_eq!(c.coefficient_of_key(&key(0, &[0, 0, 0])), Some(&rational(1, 1)));
        assert!(dilaton_step(&key(0, &[1, 0, 0])).is_err());
        assert!(dilaton_step(&key(1, &[2, 0])).is_err());
    }
}
